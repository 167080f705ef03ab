#include <algorithm>
#include <chrono>
#include <string>

#include "deepfir/engine.hpp"
#include "deepfir/errors.hpp"

namespace deepfir {
namespace {

using Clock = std::chrono::steady_clock;

double micros(Clock::time_point a, Clock::time_point b) {
  return std::chrono::duration<double, std::micro>(b - a).count();
}

void check_mask_weights(const ModelWeights* w, const char* who) {
  if (w == nullptr) throw InvalidArgument(std::string(who) + ": no weights");
  if (w->dims.head != HeadKind::mask) {
    throw InvalidArgument(std::string(who) +
                          " needs a mask head (head_tag 1); weights carry a taps head");
  }
  if (w->dims.out_dim != kFeatureDim || w->dims.feature_dim != kFeatureDim) {
    throw InvalidArgument(std::string(who) + ": mask head must map " + std::to_string(kFeatureDim) +
                          " features to " + std::to_string(kFeatureDim) + " bins");
  }
}

void check_sizes(std::span<const Sample> in, std::span<Sample> out, std::size_t hop) {
  if (in.size() != hop || out.size() != hop) {
    throw InvalidArgument("process_hop: expected " + std::to_string(hop) + " samples, got " +
                          std::to_string(in.size()));
  }
}

// Emits the completed head of an overlap-add accumulator and shifts it.
void emit_and_shift(std::vector<Sample>& acc, std::span<Sample> out) {
  const std::size_t hop = out.size();
  std::copy_n(acc.begin(), hop, out.begin());
  std::copy(acc.begin() + static_cast<std::ptrdiff_t>(hop), acc.end(), acc.begin());
  std::fill(acc.end() - static_cast<std::ptrdiff_t>(hop), acc.end(), 0.0);
}

}  // namespace

OlaEngine::OlaEngine(StreamConfig config, std::shared_ptr<const ModelWeights> weights)
    : config_(std::move(config)),
      weights_(std::move(weights)),
      state_(weights_ ? weights_->dims : ModelDims{}),
      history_(config_.analysis_window),
      window_(sqrt_hann(config_.analysis_window)),
      accumulator_(config_.analysis_window, 0.0) {
  if (config_.mode != Mode::ola) throw InvalidArgument("OlaEngine requires mode ola");
  config_.validate();
  check_mask_weights(weights_.get(), "ola mode");
}

void OlaEngine::process_hop(std::span<const Sample> input, std::span<Sample> output) {
  check_sizes(input, output, config_.hop);
  const std::size_t n = config_.analysis_window;
  const auto t0 = Clock::now();
  history_.push(input);
  const auto frame = history_.last(n);
  const FeatureVector feats = features_(frame);
  std::vector<double> windowed(n);
  for (std::size_t i = 0; i < n; ++i) windowed[i] = window_[i] * frame[i];
  ComplexSpectrum spec = rfft(windowed);
  const auto t1 = Clock::now();

  const std::vector<float> mask = predict_mask(*weights_, state_, feats, config_.backend);
  const auto t2 = Clock::now();

  for (std::size_t k = 0; k < spec.size(); ++k) spec[k] *= static_cast<double>(mask[k]);
  const std::vector<double> y = irfft(spec, n);
  for (std::size_t i = 0; i < n; ++i) accumulator_[i] += window_[i] * y[i];
  emit_and_shift(accumulator_, output);
  timing_ = {micros(t0, t1), micros(t1, t2), micros(t2, Clock::now())};
}

LstwEngine::LstwEngine(StreamConfig config, std::shared_ptr<const ModelWeights> weights)
    : config_(std::move(config)),
      weights_(std::move(weights)),
      state_(weights_ ? weights_->dims : ModelDims{}),
      history_(config_.analysis_window),
      accumulator_(config_.synthesis_window, 0.0) {
  if (config_.mode != Mode::lstw) throw InvalidArgument("LstwEngine requires mode lstw");
  config_.validate();
  check_mask_weights(weights_.get(), "lstw mode");

  // Synthesis window = Hann(S) divided by the tail of the analysis window,
  // so the product applied to each segment is a COLA Hann at hop S/2.
  const std::size_t n = config_.analysis_window;
  const std::size_t s = config_.synthesis_window;
  const WindowVec& analysis = features_.window();
  const WindowVec hann = hann_periodic(s);
  synthesis_.coefficients.resize(s);
  for (std::size_t i = 0; i < s; ++i) synthesis_.coefficients[i] = hann[i] / analysis[n - s + i];
}

void LstwEngine::process_hop(std::span<const Sample> input, std::span<Sample> output) {
  check_sizes(input, output, config_.hop);
  const std::size_t n = config_.analysis_window;
  const std::size_t s = config_.synthesis_window;
  const auto t0 = Clock::now();
  history_.push(input);
  ComplexSpectrum spec;
  const FeatureVector feats = features_.extract(history_.last(n), &spec);
  const auto t1 = Clock::now();

  const std::vector<float> mask = predict_mask(*weights_, state_, feats, config_.backend);
  const auto t2 = Clock::now();

  for (std::size_t k = 0; k < spec.size(); ++k) spec[k] *= static_cast<double>(mask[k]);
  const std::vector<double> y = irfft(spec, n);
  for (std::size_t i = 0; i < s; ++i) accumulator_[i] += synthesis_[i] * y[n - s + i];
  emit_and_shift(accumulator_, output);
  timing_ = {micros(t0, t1), micros(t1, t2), micros(t2, Clock::now())};
}

}  // namespace deepfir
