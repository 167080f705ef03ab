#include <omp.h>

#include <cassert>
#include <cstddef>
#include <cstdint>

#include "deepfir/kernels.hpp"

namespace deepfir::kernels {
namespace {

// Below this many multiply-adds a parallel region costs more than it saves.
constexpr std::size_t kMinParallelWork = 16384;

}  // namespace

int max_threads() { return omp_get_max_threads(); }

namespace parallel {

void matvec(const Matrix& a, std::span<const float> x, std::span<const float> bias,
            std::span<float> y) {
  assert(x.size() == a.cols && y.size() == a.rows && bias.size() == a.rows);
  const auto rows = static_cast<std::int64_t>(a.rows);
  const std::size_t cols = a.cols;
  const float* w_base = a.data.data();
  const float* xs = x.data();
#pragma omp parallel for schedule(static) if (a.rows * a.cols >= kMinParallelWork)
  for (std::int64_t r = 0; r < rows; ++r) {
    const float* w = w_base + static_cast<std::size_t>(r) * cols;
    float acc = bias[static_cast<std::size_t>(r)];
    for (std::size_t c = 0; c < cols; ++c) acc += w[c] * xs[c];
    y[static_cast<std::size_t>(r)] = acc;
  }
}

void convolve_block(std::span<const double> signal, std::span<const double> taps,
                    std::span<double> out) {
  const std::size_t k = taps.size();
  assert(signal.size() == out.size() + k - 1);
  const auto n = static_cast<std::int64_t>(out.size());
  const double* h = taps.data();
#pragma omp parallel for schedule(static) if (out.size() * k >= kMinParallelWork)
  for (std::int64_t i = 0; i < n; ++i) {
    const double* newest = signal.data() + k - 1 + static_cast<std::size_t>(i);
    double acc = 0.0;
    for (std::size_t j = 0; j < k; ++j) acc += h[j] * *(newest - j);
    out[static_cast<std::size_t>(i)] = acc;
  }
}

}  // namespace parallel
}  // namespace deepfir::kernels
