#include "deepfir/minphase.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include "deepfir/dsp.hpp"
#include "deepfir/errors.hpp"

namespace deepfir {
namespace {

constexpr double kRelativeFloor = 1e-8;

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

void check_taps(const FirFilter& filter, const char* who) {
  if (filter.taps.empty()) throw InvalidArgument(std::string(who) + ": empty filter");
  for (double t : filter.taps) {
    if (!std::isfinite(t)) throw InvalidArgument(std::string(who) + ": non-finite tap");
  }
}

}  // namespace

std::size_t default_minphase_nfft(std::size_t taps) { return std::max<std::size_t>(4, next_pow2(4 * taps)); }

FirFilter to_minimum_phase(const FirFilter& filter, std::size_t nfft) {
  check_taps(filter, "to_minimum_phase");
  const std::size_t taps = filter.size();
  if (nfft == 0) nfft = default_minphase_nfft(taps);
  if (!is_power_of_two(nfft) || nfft < 4 * taps) {
    throw InvalidArgument("to_minimum_phase: nfft " + std::to_string(nfft) +
                          " must be a power of two >= 4 * taps (" + std::to_string(4 * taps) + ")");
  }

  const ComplexSpectrum x = rfft(filter.taps, nfft);
  double peak_sq = 0.0;
  for (const auto& v : x) peak_sq = std::max(peak_sq, std::norm(v));
  if (peak_sq == 0.0) throw DegenerateFilter("to_minimum_phase: filter spectrum is identically zero");
  const double floor_sq = kRelativeFloor * kRelativeFloor * peak_sq;

  // ln max(|X|, eps) computed from |X|^2, skipping the square root.
  ComplexSpectrum log_mag(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) log_mag[k] = 0.5 * std::log(std::max(std::norm(x[k]), floor_sq));

  // The real cepstrum is even; folding it onto positive quefrency gives the
  // cepstrum of the minimum-phase sequence with the same magnitude.
  std::vector<double> cep = irfft(log_mag, nfft);
  const std::size_t half = nfft / 2;
  for (std::size_t n = 1; n < half; ++n) cep[n] *= 2.0;
  std::fill(cep.begin() + static_cast<std::ptrdiff_t>(half) + 1, cep.end(), 0.0);

  ComplexSpectrum folded = rfft(cep);
  for (auto& v : folded) v = std::polar(std::exp(v.real()), v.imag());
  std::vector<double> h = irfft(folded, nfft);

  FirFilter out;
  out.taps.assign(h.begin(), h.begin() + static_cast<std::ptrdiff_t>(taps));
  out.phase_kind = PhaseKind::minimum;
  return out;
}

GroupDelayProfile group_delay(const FirFilter& filter, std::size_t nfft,
                              const GroupDelayOptions& options) {
  check_taps(filter, "group_delay");
  const std::size_t taps = filter.size();
  if (nfft == 0) nfft = default_minphase_nfft(taps);
  if (!is_power_of_two(nfft) || nfft < taps) {
    throw InvalidArgument("group_delay: nfft " + std::to_string(nfft) +
                          " must be a power of two >= tap count");
  }

  std::vector<double> ramp(taps);
  for (std::size_t n = 0; n < taps; ++n) ramp[n] = static_cast<double>(n) * filter.taps[n];
  const ComplexSpectrum h = rfft(filter.taps, nfft);
  const ComplexSpectrum nh = rfft(ramp, nfft);

  double peak = 0.0;
  for (const auto& v : h) peak = std::max(peak, std::abs(v));
  if (peak == 0.0) throw DegenerateFilter("group_delay: filter spectrum is identically zero");
  const double threshold = peak * std::pow(10.0, options.floor_db / 20.0);

  GroupDelayProfile p;
  p.weighting = options.weighting;
  p.per_bin.resize(h.size());
  p.included.resize(h.size());
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < h.size(); ++k) {
    const double mag = std::abs(h[k]);
    p.included[k] = mag >= threshold;
    p.per_bin[k] = mag > 0.0 ? (nh[k] / h[k]).real() : 0.0;
    if (!p.included[k]) continue;
    const double w = options.weighting == DelayWeighting::magnitude ? mag : 1.0;
    num += w * p.per_bin[k];
    den += w;
  }
  p.mean_samples = num / den;
  p.mean_ms = p.mean_samples / options.sample_rate * 1000.0;
  return p;
}

}  // namespace deepfir
