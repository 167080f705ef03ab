#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "deepfir/dsp.hpp"

namespace deepfir {

inline constexpr std::size_t kAnalysisWindow = 256;  // 16 ms @ 16 kHz
inline constexpr std::size_t kFeatureDim = kAnalysisWindow / 2 + 1;
inline constexpr double kFeatureCompression = 0.3;

// Compressed FFT magnitudes of the newest analysis window.
using FeatureVector = std::vector<float>;

// Computes |rfft(hamming(256) * frame)|^0.3. Stateless apart from the
// cached window; one instance may be shared read-only.
class FeatureExtractor {
 public:
  FeatureExtractor();

  FeatureVector operator()(std::span<const double> frame) const;

  // Also hands back the windowed spectrum, for callers that filter with it.
  FeatureVector extract(std::span<const double> frame, ComplexSpectrum* spectrum) const;

  const WindowVec& window() const { return window_; }

 private:
  WindowVec window_;
};

FeatureVector extract_features(std::span<const double> frame);

// |X[k]|^0.3 for an already computed spectrum.
FeatureVector compress_magnitudes(std::span<const std::complex<double>> spectrum);

}  // namespace deepfir
