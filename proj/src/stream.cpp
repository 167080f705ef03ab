#include <algorithm>

#include "deepfir/engine.hpp"
#include "deepfir/minphase.hpp"

namespace deepfir {

StreamRunner::StreamRunner(HopProcessor& processor) : processor_(processor) {
  pending_.reserve(processor_.hop());
}

void StreamRunner::run_hop(std::vector<Sample>& out) {
  const std::size_t hop = processor_.hop();
  const std::size_t start = out.size();
  out.resize(start + hop);
  processor_.process_hop(pending_, std::span<Sample>(out).subspan(start, hop));
  pending_.clear();
  ++hops_;
  if (on_hop_) on_hop_(processor_);
}

void StreamRunner::push(std::span<const Sample> samples, std::vector<Sample>& out) {
  const std::size_t hop = processor_.hop();
  while (!samples.empty()) {
    const std::size_t take = std::min(hop - pending_.size(), samples.size());
    pending_.insert(pending_.end(), samples.begin(), samples.begin() + static_cast<std::ptrdiff_t>(take));
    samples = samples.subspan(take);
    if (pending_.size() == hop) run_hop(out);
  }
}

void StreamRunner::finish(std::vector<Sample>& out) {
  if (pending_.empty()) return;
  pending_.resize(processor_.hop(), 0.0);
  run_hop(out);
}

StreamResult process_stream(const StreamConfig& config,
                            std::shared_ptr<const ModelWeights> weights,
                            std::span<const Sample> samples, const StreamOptions& options) {
  config.validate();
  auto processor = make_processor(config, std::move(weights));
  StreamResult result;
  StreamRunner runner(*processor);
  const bool trace_gd = options.trace_group_delay && config.mode == Mode::deepfir;
  runner.set_hop_callback([&](const HopProcessor& p) {
    if (options.trace_timing) result.trace.timings.push_back(p.last_timing());
    if (trace_gd) {
      const auto& engine = static_cast<const DeepFirEngine&>(p);
      GroupDelayOptions gd;
      gd.sample_rate = config.sample_rate;
      result.trace.group_delay_ms.push_back(group_delay(engine.current_filter(), 0, gd).mean_ms);
    }
  });

  result.output.reserve(samples.size() + config.hop);
  runner.push(samples, result.output);
  runner.finish(result.output);
  result.output.resize(samples.size());
  result.trace.hops = runner.hops_processed();
  return result;
}

}  // namespace deepfir
