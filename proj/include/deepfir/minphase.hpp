#pragma once

#include <cstddef>
#include <vector>

#include "deepfir/filter.hpp"

namespace deepfir {

// FFT size used for the cepstral conversion when none is given: the next
// power of two >= 4 * taps (512 for 128 taps).
std::size_t default_minphase_nfft(std::size_t taps);

// Homomorphic (real-cepstrum) minimum-phase conversion.
//
//   X = rfft(taps, nfft), L = ln max(|X|, 1e-8 max|X|), c = irfft(L),
//   fold c into a causal m, h = irfft(exp(rfft(m))) truncated to taps.
//
// nfft must be a power of two >= 4 * taps. Larger nfft reduces cepstral
// aliasing, which is the dominant error for filters with zeros near the
// unit circle. Throws DegenerateFilter for an all-zero filter.
FirFilter to_minimum_phase(const FirFilter& filter, std::size_t nfft = 0);

enum class DelayWeighting { uniform, magnitude };

struct GroupDelayOptions {
  DelayWeighting weighting = DelayWeighting::magnitude;
  double floor_db = -60.0;  // bins this far below the peak are excluded
  double sample_rate = 16000.0;
};

struct GroupDelayProfile {
  std::vector<double> per_bin;   // samples, nfft/2 + 1 bins
  std::vector<bool> included;    // bins above the floor
  double mean_samples = 0.0;
  double mean_ms = 0.0;
  DelayWeighting weighting = DelayWeighting::magnitude;
};

// tau[k] = Re{ DFT(n h[n]) / DFT(h[n]) } at each of the nfft/2 + 1 bins.
GroupDelayProfile group_delay(const FirFilter& filter, std::size_t nfft = 0,
                              const GroupDelayOptions& options = {});

}  // namespace deepfir
