#include "deepfir/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "deepfir/dsp.hpp"
#include "deepfir/errors.hpp"

namespace deepfir {

SpectrogramBatch stft(std::span<const double> signal, std::size_t window, std::size_t hop) {
  if (hop == 0) throw InvalidArgument("stft: hop must be >= 1");
  if (signal.size() < window) {
    throw InvalidArgument("stft: signal of " + std::to_string(signal.size()) +
                          " samples is shorter than the " + std::to_string(window) + "-sample window");
  }
  const WindowVec w = sqrt_hann(window);
  SpectrogramBatch s;
  s.batch = 1;
  s.bins = window / 2 + 1;
  s.frames = 1 + (signal.size() - window) / hop;
  s.window = window;
  s.hop = hop;
  s.data.resize(s.bins * s.frames);
  std::vector<double> frame(window);
  for (std::size_t t = 0; t < s.frames; ++t) {
    for (std::size_t n = 0; n < window; ++n) frame[n] = w[n] * signal[t * hop + n];
    const ComplexSpectrum x = rfft(frame);
    for (std::size_t f = 0; f < s.bins; ++f) s.at(0, f, t) = x[f];
  }
  return s;
}

SpectrogramBatch stack(std::span<const SpectrogramBatch> items) {
  if (items.empty()) throw InvalidArgument("stack: no spectrograms");
  SpectrogramBatch out = items[0];
  out.batch = 0;
  out.data.clear();
  for (const auto& s : items) {
    if (s.bins != out.bins || s.frames != out.frames) throw InvalidArgument("stack: shape mismatch");
    out.data.insert(out.data.end(), s.data.begin(), s.data.end());
    out.batch += s.batch;
  }
  return out;
}

double compressed_spectral_loss(const SpectrogramBatch& reference, const SpectrogramBatch& estimate,
                                const LossConfig& cfg) {
  if (reference.batch != estimate.batch || reference.bins != estimate.bins ||
      reference.frames != estimate.frames || reference.data.size() != estimate.data.size()) {
    throw InvalidArgument("compressed_spectral_loss: spectrogram shapes differ");
  }
  if (!(cfg.alpha > 0.0 && cfg.alpha <= 1.0) || !(cfg.beta >= 0.0 && cfg.beta <= 1.0)) {
    throw InvalidArgument("compressed_spectral_loss: need alpha in (0,1] and beta in [0,1]");
  }
  auto compress = [&](std::complex<double> z, double& mag_c) {
    const double mag = std::abs(z);
    mag_c = std::pow(mag, cfg.alpha);
    // Phase is undefined at zero magnitude; the compressed value is 0 there.
    return mag > 0.0 ? z * (mag_c / mag) : std::complex<double>{};
  };
  double loss = 0.0;
  for (std::size_t i = 0; i < reference.data.size(); ++i) {
    double ref_c, est_c;
    const auto ref_z = compress(reference.data[i], ref_c);
    const auto est_z = compress(estimate.data[i], est_c);
    const double mag_term = est_c - ref_c;
    loss += (1.0 - cfg.beta) * mag_term * mag_term + cfg.beta * std::norm(est_z - ref_z);
  }
  return loss;
}

double si_sdr(std::span<const double> reference, std::span<const double> estimate) {
  if (reference.size() != estimate.size() || reference.empty()) {
    throw InvalidArgument("si_sdr: signals must have equal nonzero length");
  }
  double ref_energy = 0.0, dot = 0.0;
  for (std::size_t n = 0; n < reference.size(); ++n) {
    ref_energy += reference[n] * reference[n];
    dot += estimate[n] * reference[n];
  }
  if (ref_energy == 0.0) throw InvalidArgument("si_sdr: reference is all zeros");
  const double scale = dot / ref_energy;
  double target = 0.0, residual = 0.0;
  for (std::size_t n = 0; n < reference.size(); ++n) {
    const double s = scale * reference[n];
    const double e = estimate[n] - s;
    target += s * s;
    residual += e * e;
  }
  if (residual == 0.0) return kSiSdrClampDb;
  if (target == 0.0) return -kSiSdrClampDb;
  return std::clamp(10.0 * std::log10(target / residual), -kSiSdrClampDb, kSiSdrClampDb);
}

double si_sdr_improvement(std::span<const double> mixture, std::span<const double> reference,
                          std::span<const double> estimate) {
  return si_sdr(reference, estimate) - si_sdr(reference, mixture);
}

AlignedPair align(std::span<const double> reference, std::span<const double> estimate, long lag) {
  if (lag >= 0) {
    const auto l = static_cast<std::size_t>(lag);
    if (l >= estimate.size()) return {};
    const std::size_t n = std::min(reference.size(), estimate.size() - l);
    return {reference.first(n), estimate.subspan(l, n)};
  }
  const auto l = static_cast<std::size_t>(-lag);
  if (l >= reference.size()) return {};
  const std::size_t n = std::min(reference.size() - l, estimate.size());
  return {reference.subspan(l, n), estimate.first(n)};
}

long best_lag(std::span<const double> reference, std::span<const double> estimate, long max_lag) {
  long best = 0;
  double best_score = -std::numeric_limits<double>::infinity();
  for (long lag = -max_lag; lag <= max_lag; ++lag) {
    const AlignedPair p = align(reference, estimate, lag);
    if (p.reference.empty()) continue;
    double energy = 0.0;
    for (double r : p.reference) energy += r * r;
    if (energy == 0.0) continue;
    const double score = si_sdr(p.reference, p.estimate);
    // Ties keep the smallest |lag| seen first from the left; prefer 0.
    if (score > best_score || (score == best_score && std::abs(lag) < std::abs(best))) {
      best_score = score;
      best = lag;
    }
  }
  return best;
}

}  // namespace deepfir
