#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "deepfir/dsp.hpp"
#include "deepfir/features.hpp"
#include "deepfir/filter.hpp"
#include "deepfir/kernels.hpp"
#include "deepfir/model.hpp"

namespace deepfir {

enum class Mode { deepfir, lstw, ola };

std::string to_string(Mode m);
Mode parse_mode(const std::string& s);

struct StreamConfig {
  double sample_rate = 16000.0;
  std::size_t analysis_window = kAnalysisWindow;
  std::size_t hop = 16;
  std::size_t synthesis_window = 16;
  std::size_t taps = 128;
  bool min_phase = true;
  Mode mode = Mode::deepfir;
  std::size_t minphase_nfft = 0;  // 0: default_minphase_nfft(taps)
  Backend backend = Backend::parallel;

  // Derives window and hop from a synthesis length in milliseconds:
  // deepfir uses hop = synthesis, lstw hop = synthesis / 2, ola is fixed at
  // 256 / 128 and ignores synthesis_ms.
  static StreamConfig for_mode(Mode mode, double synthesis_ms, std::size_t taps = 128,
                               bool min_phase = true);

  // Throws InvalidArgument on any violated invariant.
  void validate() const;

  double hop_ms() const { return static_cast<double>(hop) / sample_rate * 1000.0; }
  double synthesis_ms() const { return static_cast<double>(synthesis_window) / sample_rate * 1000.0; }
};

// Wall time spent in each stage of the most recent hop, microseconds.
// Minimum-phase conversion counts as inference.
struct HopTiming {
  double frontend_us = 0.0;
  double inference_us = 0.0;
  double synthesis_us = 0.0;

  double total_us() const { return frontend_us + inference_us + synthesis_us; }
};

// A streaming processor that consumes and emits exactly one hop at a time.
class HopProcessor {
 public:
  virtual ~HopProcessor() = default;

  virtual const StreamConfig& config() const = 0;
  std::size_t hop() const { return config().hop; }

  virtual void process_hop(std::span<const Sample> input, std::span<Sample> output) = 0;

  // Nominal delay between an input sample and its image in the output
  // stream, in samples, for a pass-through setting of the model.
  virtual std::size_t stream_delay() const = 0;

  virtual HopTiming last_timing() const = 0;

  std::vector<Sample> process_hop(std::span<const Sample> input) {
    std::vector<Sample> out(hop());
    process_hop(input, out);
    return out;
  }
};

// Deep FIR: per-hop tap prediction, optional minimum-phase conversion,
// time-domain convolution, half-Hann crossfade from the previous filter.
class DeepFirEngine final : public HopProcessor {
 public:
  DeepFirEngine(StreamConfig config, std::shared_ptr<const ModelWeights> weights);

  const StreamConfig& config() const override { return config_; }
  void process_hop(std::span<const Sample> input, std::span<Sample> output) override;
  using HopProcessor::process_hop;

  // Same synthesis path with an externally supplied filter; the model is
  // not run and its state does not advance.
  void process_hop_with_filter(std::span<const Sample> input, const FirFilter& filter,
                               std::span<Sample> output);

  std::size_t stream_delay() const override { return 0; }
  HopTiming last_timing() const override { return timing_; }

  const FirFilter& current_filter() const { return current_; }
  const FirFilter& previous_filter() const { return previous_; }
  const ModelState& model_state() const { return state_; }

 private:
  void check_hop(std::span<const Sample> input, std::span<Sample> output) const;
  void install(FirFilter filter);
  void synthesize(std::span<Sample> output);

  StreamConfig config_;
  std::shared_ptr<const ModelWeights> weights_;
  ModelState state_;
  FeatureExtractor features_;
  RingBuffer history_;
  FirFilter current_;
  FirFilter previous_;
  WindowVec rise_;
  std::vector<Sample> y_new_;
  std::vector<Sample> y_old_;
  HopTiming timing_;
};

// Spectral-mask baseline with 256-sample root-Hann analysis and synthesis
// windows at 50% overlap.
class OlaEngine final : public HopProcessor {
 public:
  OlaEngine(StreamConfig config, std::shared_ptr<const ModelWeights> weights);

  const StreamConfig& config() const override { return config_; }
  void process_hop(std::span<const Sample> input, std::span<Sample> output) override;
  using HopProcessor::process_hop;

  std::size_t stream_delay() const override { return config_.synthesis_window - config_.hop; }
  HopTiming last_timing() const override { return timing_; }

 private:
  StreamConfig config_;
  std::shared_ptr<const ModelWeights> weights_;
  ModelState state_;
  FeatureExtractor features_;
  RingBuffer history_;
  WindowVec window_;
  std::vector<Sample> accumulator_;
  HopTiming timing_;
};

// Long-short time window baseline: 256-sample Hamming analysis, a short
// synthesis segment cut from the end of the filtered frame, 50% overlap-add.
class LstwEngine final : public HopProcessor {
 public:
  LstwEngine(StreamConfig config, std::shared_ptr<const ModelWeights> weights);

  const StreamConfig& config() const override { return config_; }
  void process_hop(std::span<const Sample> input, std::span<Sample> output) override;
  using HopProcessor::process_hop;

  std::size_t stream_delay() const override { return config_.synthesis_window - config_.hop; }
  HopTiming last_timing() const override { return timing_; }

  // Effective synthesis window applied to the trailing segment.
  const WindowVec& synthesis_window() const { return synthesis_; }

 private:
  StreamConfig config_;
  std::shared_ptr<const ModelWeights> weights_;
  ModelState state_;
  FeatureExtractor features_;
  RingBuffer history_;
  WindowVec synthesis_;
  std::vector<Sample> accumulator_;
  HopTiming timing_;
};

std::unique_ptr<HopProcessor> make_processor(const StreamConfig& config,
                                             std::shared_ptr<const ModelWeights> weights);

// Feeds arbitrary-length chunks into a HopProcessor, emitting output one
// completed hop at a time. finish() zero-pads the final partial hop.
class StreamRunner {
 public:
  explicit StreamRunner(HopProcessor& processor);

  // Appends the outputs of every hop completed by `samples` to `out`.
  void push(std::span<const Sample> samples, std::vector<Sample>& out);

  // Flushes a partial hop (if any), appending the full hop of output.
  void finish(std::vector<Sample>& out);

  std::size_t hops_processed() const { return hops_; }
  std::size_t pending() const { return pending_.size(); }

  // Called after each hop with the processor, for tracing.
  void set_hop_callback(std::function<void(const HopProcessor&)> cb) { on_hop_ = std::move(cb); }

 private:
  void run_hop(std::vector<Sample>& out);

  HopProcessor& processor_;
  std::vector<Sample> pending_;
  std::size_t hops_ = 0;
  std::function<void(const HopProcessor&)> on_hop_;
};

struct EvalTrace {
  std::size_t hops = 0;
  std::vector<double> group_delay_ms;  // per hop, deepfir only, when traced
  std::vector<HopTiming> timings;
};

struct StreamOptions {
  bool trace_group_delay = false;
  bool trace_timing = true;
};

struct StreamResult {
  std::vector<Sample> output;  // same length as the input
  EvalTrace trace;
};

StreamResult process_stream(const StreamConfig& config,
                            std::shared_ptr<const ModelWeights> weights,
                            std::span<const Sample> samples, const StreamOptions& options = {});

}  // namespace deepfir
