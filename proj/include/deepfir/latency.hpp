#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "deepfir/engine.hpp"
#include "deepfir/model.hpp"

namespace deepfir {

inline constexpr double kDefaultHardwareMs = 1.1;
inline constexpr double kDefaultGroupDelayMs = 0.25;

// All values in milliseconds.
struct LatencyReport {
  double synthesis_window_ms = 0.0;
  double mean_group_delay_ms = 0.0;
  double hop_ms = 0.0;
  double hardware_ms = 0.0;
  double algorithmic_ms = 0.0;   // synthesis + group delay
  double end_to_end_ms = 0.0;    // algorithmic + hop + hardware
};

// deepfir: synthesis window + mean group delay. lstw / ola: the synthesis
// window alone; their filtering delay is already inside the window.
double algorithmic_latency(const StreamConfig& config, double mean_group_delay_ms);

LatencyReport end_to_end_latency(const StreamConfig& config, double mean_group_delay_ms,
                                 double hardware_ms = kDefaultHardwareMs);

// Instructions per hop = fixed + per_sample * hop samples.
struct CostModel {
  double fixed_per_hop = 0.0;
  double per_sample = 0.0;
  std::string source;  // "first-principles" or "calibrated:<what>"

  CostModel scaled(double g) const { return {fixed_per_hop * g, per_sample * g, source}; }
};

double estimate_mips(const CostModel& cost, const StreamConfig& config);

// Multiply-accumulate counts of the architecture: LSTM, dense layers,
// feature FFT, optional minimum-phase FFTs per hop; per output sample two
// convolutions over all taps plus the crossfade (deepfir) or nothing
// (lstw / ola, whose synthesis cost is per hop).
CostModel first_principles_cost(const StreamConfig& config, const ModelDims& dims);

// Keeps per_sample, solves fixed_per_hop so that `config` costs `target_mips`.
CostModel calibrate_fixed_cost(const StreamConfig& config, double target_mips, double per_sample,
                               std::string tag);

// Per-sample instruction estimate for deepfir synthesis: two convolutions
// over all taps plus the two-multiply, one-add crossfade.
double deepfir_per_sample_cost(std::size_t taps);

// One row of the published comparison table next to this calculator's result.
struct Table1Row {
  std::string type;
  double synthesis_ms = 0.0;
  double paper_algorithmic_ms = 0.0;
  double paper_end_to_end_ms = 0.0;
  double paper_mips = 0.0;
  LatencyReport computed;
  double predicted_mips = 0.0;
  bool algorithmic_matches = false;
  bool end_to_end_matches = false;
  bool flagged_discrepant = false;  // end-to-end disagrees with the formula
};

// Reported values are compared within one unit of their last printed
// decimal (0.01 ms). MIPS predictions use the deepfir cost calibrated on
// the 1 ms row and the lstw cost calibrated on the 4 ms row.
std::vector<Table1Row> reproduce_table1(double mean_group_delay_ms = kDefaultGroupDelayMs,
                                        double hardware_ms = kDefaultHardwareMs);

inline constexpr double kTable1Tolerance = 0.01;

struct TimingReport {
  std::size_t hops = 0;
  double mean_us = 0.0;
  double p95_us = 0.0;
  double max_us = 0.0;
  double hop_us = 0.0;             // hop duration in audio time
  double real_time_factor = 0.0;   // mean / hop duration
  double inference_fraction = 0.0; // inference / total measured time
  double mean_frontend_us = 0.0;
  double mean_inference_us = 0.0;
  double mean_synthesis_us = 0.0;
};

TimingReport summarize_timings(const std::vector<HopTiming>& timings, double hop_us);

// Runs `seconds` of deterministic white noise through a fresh processor on
// the calling thread and reports per-hop wall time.
TimingReport measure_realtime(const StreamConfig& config,
                              std::shared_ptr<const ModelWeights> weights, double seconds,
                              std::uint64_t seed = 1);

}  // namespace deepfir
