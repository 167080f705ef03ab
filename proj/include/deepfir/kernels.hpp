#pragma once

// Data-parallel inner loops. Each kernel exists twice: a plain serial loop
// kept as the reference, and an OpenMP version used by the engines. The
// parallel versions split work only across independent outputs and keep
// every reduction in the serial order, so the two are bit-identical.

#include <cstddef>
#include <span>
#include <vector>

namespace deepfir {

enum class Backend { serial, parallel };

// Dense float matrix, row-major, rows = outputs.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<float> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0f) {}

  float& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  float at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  std::span<const float> row(std::size_t r) const { return {data.data() + r * cols, cols}; }
};

namespace kernels {

namespace serial {

// y = A x + bias
void matvec(const Matrix& a, std::span<const float> x, std::span<const float> bias,
            std::span<float> y);

// out[i] = sum_k taps[k] * signal[taps.size() - 1 + i - k]
// signal holds out.size() + taps.size() - 1 samples, oldest first.
void convolve_block(std::span<const double> signal, std::span<const double> taps,
                    std::span<double> out);

}  // namespace serial

namespace parallel {

void matvec(const Matrix& a, std::span<const float> x, std::span<const float> bias,
            std::span<float> y);

void convolve_block(std::span<const double> signal, std::span<const double> taps,
                    std::span<double> out);

}  // namespace parallel

inline void matvec(Backend b, const Matrix& a, std::span<const float> x,
                   std::span<const float> bias, std::span<float> y) {
  if (b == Backend::parallel) {
    parallel::matvec(a, x, bias, y);
  } else {
    serial::matvec(a, x, bias, y);
  }
}

inline void convolve_block(Backend b, std::span<const double> signal,
                           std::span<const double> taps, std::span<double> out) {
  if (b == Backend::parallel) {
    parallel::convolve_block(signal, taps, out);
  } else {
    serial::convolve_block(signal, taps, out);
  }
}

// Number of OpenMP threads the parallel kernels may use (1 without OpenMP).
int max_threads();

}  // namespace kernels
}  // namespace deepfir
