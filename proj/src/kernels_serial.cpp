#include <cassert>

#include "deepfir/kernels.hpp"

namespace deepfir::kernels::serial {

void matvec(const Matrix& a, std::span<const float> x, std::span<const float> bias,
            std::span<float> y) {
  assert(x.size() == a.cols && y.size() == a.rows && bias.size() == a.rows);
  for (std::size_t r = 0; r < a.rows; ++r) {
    const float* w = a.data.data() + r * a.cols;
    float acc = bias[r];
    for (std::size_t c = 0; c < a.cols; ++c) acc += w[c] * x[c];
    y[r] = acc;
  }
}

void convolve_block(std::span<const double> signal, std::span<const double> taps,
                    std::span<double> out) {
  const std::size_t k = taps.size();
  assert(signal.size() == out.size() + k - 1);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double* newest = signal.data() + k - 1 + i;
    double acc = 0.0;
    for (std::size_t j = 0; j < k; ++j) acc += taps[j] * *(newest - j);
    out[i] = acc;
  }
}

}  // namespace deepfir::kernels::serial
