#include <chrono>
#include <cmath>
#include <string>

#include "deepfir/engine.hpp"
#include "deepfir/errors.hpp"
#include "deepfir/minphase.hpp"

namespace deepfir {
namespace {

using Clock = std::chrono::steady_clock;

double micros(Clock::time_point a, Clock::time_point b) {
  return std::chrono::duration<double, std::micro>(b - a).count();
}

}  // namespace

std::string to_string(Mode m) {
  switch (m) {
    case Mode::deepfir: return "deepfir";
    case Mode::lstw: return "lstw";
    case Mode::ola: return "ola";
  }
  return "?";
}

Mode parse_mode(const std::string& s) {
  if (s == "deepfir") return Mode::deepfir;
  if (s == "lstw") return Mode::lstw;
  if (s == "ola") return Mode::ola;
  throw InvalidArgument("unknown mode '" + s + "' (expected deepfir, lstw or ola)");
}

StreamConfig StreamConfig::for_mode(Mode mode, double synthesis_ms, std::size_t taps,
                                    bool min_phase) {
  StreamConfig c;
  c.mode = mode;
  c.taps = taps;
  c.min_phase = min_phase;
  if (mode == Mode::ola) {
    c.synthesis_window = c.analysis_window;
    c.hop = c.synthesis_window / 2;
    c.validate();
    return c;
  }
  if (!(synthesis_ms > 0.0)) throw InvalidArgument("synthesis length must be positive");
  const double samples = synthesis_ms * c.sample_rate / 1000.0;
  const auto rounded = static_cast<std::size_t>(std::llround(samples));
  if (rounded < 1 || std::abs(samples - static_cast<double>(rounded)) > 1e-9) {
    throw InvalidArgument("synthesis length " + std::to_string(synthesis_ms) +
                          " ms is not a whole number of samples at 16 kHz");
  }
  c.synthesis_window = rounded;
  c.hop = mode == Mode::deepfir ? rounded : rounded / 2;
  c.validate();
  return c;
}

void StreamConfig::validate() const {
  auto fail = [](const std::string& msg) { throw InvalidArgument("stream config: " + msg); };
  if (sample_rate <= 0.0) fail("sample rate must be positive");
  if (analysis_window != kAnalysisWindow) {
    fail("analysis window must be " + std::to_string(kAnalysisWindow) + " samples");
  }
  if (hop < 1) fail("hop must be >= 1");
  if (synthesis_window > analysis_window) fail("synthesis window exceeds analysis window");
  switch (mode) {
    case Mode::deepfir:
      if (synthesis_window != hop) fail("deepfir requires synthesis window == hop");
      if (taps < 1) fail("taps must be >= 1");
      if (minphase_nfft != 0 && (!is_power_of_two(minphase_nfft) || minphase_nfft < 4 * taps)) {
        fail("min-phase nfft must be a power of two >= 4 * taps");
      }
      break;
    case Mode::lstw:
      if (synthesis_window < 2 || 2 * hop != synthesis_window) {
        fail("lstw requires hop == synthesis window / 2");
      }
      break;
    case Mode::ola:
      if (synthesis_window != analysis_window || 2 * hop != synthesis_window) {
        fail("ola requires synthesis == analysis window and hop == window / 2");
      }
      break;
  }
}

DeepFirEngine::DeepFirEngine(StreamConfig config, std::shared_ptr<const ModelWeights> weights)
    : config_(std::move(config)),
      weights_(std::move(weights)),
      state_(weights_ ? weights_->dims : ModelDims{}),
      history_(config_.analysis_window + config_.taps + config_.hop),
      current_(FirFilter::impulse(config_.taps)),
      previous_(FirFilter::impulse(config_.taps)),
      y_new_(config_.hop),
      y_old_(config_.hop) {
  if (config_.mode != Mode::deepfir) throw InvalidArgument("DeepFirEngine requires mode deepfir");
  config_.validate();
  if (!weights_) throw InvalidArgument("DeepFirEngine: no weights");
  const ModelDims& d = weights_->dims;
  if (d.head != HeadKind::taps) {
    throw InvalidArgument("deepfir mode needs a taps head (head_tag 0); weights carry a mask head");
  }
  if (d.out_dim != config_.taps) {
    throw InvalidArgument("weights predict " + std::to_string(d.out_dim) + " taps, config expects " +
                          std::to_string(config_.taps));
  }
  if (d.feature_dim != kFeatureDim) {
    throw InvalidArgument("weights expect " + std::to_string(d.feature_dim) +
                          " features, front-end produces " + std::to_string(kFeatureDim));
  }
  rise_ = hann_crossfade(config_.hop).first;
  if (config_.min_phase) {
    current_.phase_kind = PhaseKind::minimum;
    previous_.phase_kind = PhaseKind::minimum;
  }
}

void DeepFirEngine::check_hop(std::span<const Sample> input, std::span<Sample> output) const {
  if (input.size() != config_.hop || output.size() != config_.hop) {
    throw InvalidArgument("process_hop: expected " + std::to_string(config_.hop) +
                          " samples, got " + std::to_string(input.size()));
  }
}

void DeepFirEngine::install(FirFilter filter) {
  previous_ = std::move(current_);
  current_ = std::move(filter);
}

void DeepFirEngine::synthesize(std::span<Sample> output) {
  const std::size_t hop = config_.hop;
  const auto signal = history_.last(hop + config_.taps - 1);
  kernels::convolve_block(config_.backend, signal, current_.taps, y_new_);
  kernels::convolve_block(config_.backend, signal, previous_.taps, y_old_);
  // lerp(old, new, rise) == rise * new + (1 - rise) * old, and is exact
  // when both branches agree or rise == 1.
  for (std::size_t n = 0; n < hop; ++n) output[n] = std::lerp(y_old_[n], y_new_[n], rise_[n]);
}

void DeepFirEngine::process_hop(std::span<const Sample> input, std::span<Sample> output) {
  check_hop(input, output);
  const auto t0 = Clock::now();
  history_.push(input);
  const FeatureVector feats = features_(history_.last(config_.analysis_window));
  const auto t1 = Clock::now();

  FirFilter filter = predict_taps(*weights_, state_, feats, config_.backend);
  if (config_.min_phase) filter = to_minimum_phase(filter, config_.minphase_nfft);
  install(std::move(filter));
  const auto t2 = Clock::now();

  synthesize(output);
  const auto t3 = Clock::now();
  timing_ = {micros(t0, t1), micros(t1, t2), micros(t2, t3)};
}

void DeepFirEngine::process_hop_with_filter(std::span<const Sample> input, const FirFilter& filter,
                                            std::span<Sample> output) {
  check_hop(input, output);
  if (filter.size() != config_.taps) {
    throw InvalidArgument("process_hop_with_filter: filter has " + std::to_string(filter.size()) +
                          " taps, config expects " + std::to_string(config_.taps));
  }
  const auto t0 = Clock::now();
  history_.push(input);
  install(filter);
  const auto t1 = Clock::now();
  synthesize(output);
  timing_ = {0.0, micros(t0, t1), micros(t1, Clock::now())};
}

std::unique_ptr<HopProcessor> make_processor(const StreamConfig& config,
                                             std::shared_ptr<const ModelWeights> weights) {
  switch (config.mode) {
    case Mode::deepfir: return std::make_unique<DeepFirEngine>(config, std::move(weights));
    case Mode::lstw: return std::make_unique<LstwEngine>(config, std::move(weights));
    case Mode::ola: return std::make_unique<OlaEngine>(config, std::move(weights));
  }
  throw InvalidArgument("unknown mode");
}

}  // namespace deepfir
