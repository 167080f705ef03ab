#include <algorithm>
#include <cmath>
#include <random>

#include "deepfir/errors.hpp"
#include "deepfir/latency.hpp"

namespace deepfir {

TimingReport summarize_timings(const std::vector<HopTiming>& timings, double hop_us) {
  TimingReport r;
  r.hops = timings.size();
  r.hop_us = hop_us;
  if (timings.empty()) return r;

  std::vector<double> totals;
  totals.reserve(timings.size());
  double fe = 0.0, inf = 0.0, syn = 0.0;
  for (const auto& t : timings) {
    totals.push_back(t.total_us());
    fe += t.frontend_us;
    inf += t.inference_us;
    syn += t.synthesis_us;
  }
  const double n = static_cast<double>(timings.size());
  const double sum = fe + inf + syn;
  r.mean_us = sum / n;
  r.mean_frontend_us = fe / n;
  r.mean_inference_us = inf / n;
  r.mean_synthesis_us = syn / n;
  r.inference_fraction = sum > 0.0 ? inf / sum : 0.0;

  std::sort(totals.begin(), totals.end());
  // Nearest-rank percentile.
  const auto rank = static_cast<std::size_t>(std::ceil(0.95 * n));
  r.p95_us = totals[std::clamp<std::size_t>(rank, 1, totals.size()) - 1];
  r.max_us = totals.back();
  r.real_time_factor = hop_us > 0.0 ? r.mean_us / hop_us : 0.0;
  return r;
}

TimingReport measure_realtime(const StreamConfig& config,
                              std::shared_ptr<const ModelWeights> weights, double seconds,
                              std::uint64_t seed) {
  if (!(seconds > 0.0)) throw InvalidArgument("measure_realtime: duration must be positive");
  const auto total = static_cast<std::size_t>(std::llround(seconds * config.sample_rate));

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 0.1);
  std::vector<Sample> audio(total);
  for (auto& x : audio) x = noise(rng);

  // Builds FFT plans and touches the weights before anything is timed.
  {
    auto warm = make_processor(config, weights);
    std::vector<Sample> in(config.hop, 0.0), out(config.hop);
    for (int i = 0; i < 4; ++i) warm->process_hop(in, out);
  }

  auto processor = make_processor(config, std::move(weights));
  std::vector<HopTiming> timings;
  timings.reserve(total / config.hop + 1);
  StreamRunner runner(*processor);
  runner.set_hop_callback([&](const HopProcessor& p) { timings.push_back(p.last_timing()); });
  std::vector<Sample> out;
  out.reserve(total + config.hop);
  runner.push(audio, out);
  runner.finish(out);

  return summarize_timings(timings, config.hop_ms() * 1000.0);
}

}  // namespace deepfir
