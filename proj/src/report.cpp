#include "deepfir/report.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <cstdio>
#include <memory>
#include <stdexcept>

namespace deepfir {
namespace {

Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

}  // namespace

Json to_json(const StreamConfig& c) {
  return {
      {"sample_rate", c.sample_rate},
      {"analysis_window", c.analysis_window},
      {"hop", c.hop},
      {"synthesis_window", c.synthesis_window},
      {"synthesis_ms", c.synthesis_ms()},
      {"hop_ms", c.hop_ms()},
      {"taps", c.taps},
      {"min_phase", c.min_phase},
      {"minphase_nfft", c.minphase_nfft},
      {"mode", to_string(c.mode)},
      {"backend", c.backend == Backend::parallel ? "parallel" : "serial"},
  };
}

Json to_json(const LatencyReport& r) {
  return {
      {"synthesis_window_ms", r.synthesis_window_ms}, {"mean_group_delay_ms", r.mean_group_delay_ms},
      {"hop_ms", r.hop_ms},                           {"hardware_ms", r.hardware_ms},
      {"algorithmic_ms", r.algorithmic_ms},           {"end_to_end_ms", r.end_to_end_ms},
  };
}

Json to_json(const TimingReport& r) {
  return {
      {"hops", r.hops},
      {"mean_us", r.mean_us},
      {"p95_us", r.p95_us},
      {"max_us", r.max_us},
      {"hop_us", r.hop_us},
      {"real_time_factor", r.real_time_factor},
      {"inference_fraction", r.inference_fraction},
      {"mean_frontend_us", r.mean_frontend_us},
      {"mean_inference_us", r.mean_inference_us},
      {"mean_synthesis_us", r.mean_synthesis_us},
  };
}

Json to_json(const ModelDims& d) {
  return {
      {"feature_dim", d.feature_dim},
      {"hidden", d.hidden},
      {"fc_dim", d.fc_dim},
      {"out_dim", d.out_dim},
      {"num_layers", d.num_layers},
      {"head", d.head == HeadKind::taps ? "sigmoid-taps" : "sigmoid-mask"},
      {"head_tag", static_cast<std::uint32_t>(d.head)},
      {"parameter_count", d.parameter_count()},
  };
}

Json to_json(const CostModel& c) {
  return {{"fixed_per_hop", c.fixed_per_hop}, {"per_sample", c.per_sample}, {"source", c.source}};
}

Json to_json(const Table1Row& r) {
  return {
      {"type", r.type},
      {"synthesis_ms", r.synthesis_ms},
      {"paper_algorithmic_ms", r.paper_algorithmic_ms},
      {"paper_end_to_end_ms", r.paper_end_to_end_ms},
      {"paper_mips", r.paper_mips},
      {"computed", to_json(r.computed)},
      {"predicted_mips", number_or_null(r.predicted_mips)},
      {"algorithmic_matches", r.algorithmic_matches},
      {"end_to_end_matches", r.end_to_end_matches},
      {"flagged_discrepant", r.flagged_discrepant},
  };
}

std::string sha256_hex(std::span<const std::byte> bytes) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), digest, &len) != 1) {
    throw std::runtime_error("sha256 failed");
  }
  std::string hex(2 * len, '0');
  for (unsigned int i = 0; i < len; ++i) std::snprintf(&hex[2 * i], 3, "%02x", digest[i]);
  return hex;
}

}  // namespace deepfir
