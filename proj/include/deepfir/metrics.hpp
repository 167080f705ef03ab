#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace deepfir {

// Complex STFT frames indexed (batch, frequency, time).
struct SpectrogramBatch {
  std::size_t batch = 0;
  std::size_t bins = 0;
  std::size_t frames = 0;
  std::size_t window = 0;
  std::size_t hop = 0;
  std::vector<std::complex<double>> data;

  std::complex<double>& at(std::size_t b, std::size_t f, std::size_t t) {
    return data[(b * bins + f) * frames + t];
  }
  const std::complex<double>& at(std::size_t b, std::size_t f, std::size_t t) const {
    return data[(b * bins + f) * frames + t];
  }
};

inline constexpr std::size_t kLossWindow = 256;
inline constexpr std::size_t kLossHop = 128;

// Root-Hann framed FFT; 1 + floor((len - window) / hop) frames.
SpectrogramBatch stft(std::span<const double> signal, std::size_t window = kLossWindow,
                      std::size_t hop = kLossHop);

// Stacks equally shaped single-signal spectrograms along the batch axis.
SpectrogramBatch stack(std::span<const SpectrogramBatch> items);

struct LossConfig {
  double alpha = 0.3;   // compression exponent
  double beta = 0.85;   // weight of the phase-aware complex term
};

// sum_{b,f,t} (1-beta)(|S'|^a - |S|^a)^2 + beta |S'^a - S^a|^2
// with S^a = |S|^a e^{j angle S}.
double compressed_spectral_loss(const SpectrogramBatch& reference, const SpectrogramBatch& estimate,
                                const LossConfig& cfg = {});

inline constexpr double kSiSdrClampDb = 60.0;

// Scale-invariant SDR in dB, clamped to [-60, +60].
double si_sdr(std::span<const double> reference, std::span<const double> estimate);

// si_sdr(reference, estimate) - si_sdr(reference, mixture).
double si_sdr_improvement(std::span<const double> mixture, std::span<const double> reference,
                          std::span<const double> estimate);

// Estimate shifted earlier by `lag` samples (estimate[n + lag] vs reference[n]);
// negative lag shifts later. Both returned views cover the overlap only.
struct AlignedPair {
  std::span<const double> reference;
  std::span<const double> estimate;
};
AlignedPair align(std::span<const double> reference, std::span<const double> estimate, long lag);

// Lag in [-max_lag, max_lag] maximizing SI-SDR of the aligned overlap.
long best_lag(std::span<const double> reference, std::span<const double> estimate, long max_lag);

}  // namespace deepfir
