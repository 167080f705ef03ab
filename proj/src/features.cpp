#include "deepfir/features.hpp"

#include <cmath>
#include <string>

#include "deepfir/errors.hpp"

namespace deepfir {

FeatureExtractor::FeatureExtractor() : window_(hamming(kAnalysisWindow)) {}

FeatureVector FeatureExtractor::operator()(std::span<const double> frame) const {
  return extract(frame, nullptr);
}

FeatureVector FeatureExtractor::extract(std::span<const double> frame,
                                        ComplexSpectrum* spectrum) const {
  if (frame.size() != kAnalysisWindow) {
    throw InvalidArgument("extract_features: frame has " + std::to_string(frame.size()) +
                          " samples, expected " + std::to_string(kAnalysisWindow));
  }
  std::vector<double> windowed(kAnalysisWindow);
  for (std::size_t n = 0; n < kAnalysisWindow; ++n) windowed[n] = window_[n] * frame[n];
  ComplexSpectrum x = rfft(windowed);
  FeatureVector v = compress_magnitudes(x);
  if (spectrum != nullptr) *spectrum = std::move(x);
  return v;
}

FeatureVector compress_magnitudes(std::span<const std::complex<double>> spectrum) {
  FeatureVector v(spectrum.size());
  for (std::size_t k = 0; k < spectrum.size(); ++k) {
    v[k] = static_cast<float>(std::pow(std::abs(spectrum[k]), kFeatureCompression));
  }
  return v;
}

FeatureVector extract_features(std::span<const double> frame) {
  static const FeatureExtractor extractor;
  return extractor(frame);
}

}  // namespace deepfir
