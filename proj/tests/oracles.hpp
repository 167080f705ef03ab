#pragma once

// Independent reference computations used across the test suites. None of
// these call into the library under test.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <vector>

#include "deepfir/model.hpp"

namespace oracle {

// O(N^2) DFT over the full spectrum.
inline std::vector<std::complex<double>> dft(std::span<const double> x, std::size_t n = 0) {
  if (n == 0) n = x.size();
  std::vector<std::complex<double>> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<double> acc = 0.0;
    for (std::size_t t = 0; t < x.size() && t < n; ++t) {
      const double ang = -2.0 * std::numbers::pi * static_cast<double>((k * t) % n) / static_cast<double>(n);
      acc += x[t] * std::complex<double>(std::cos(ang), std::sin(ang));
    }
    out[k] = acc;
  }
  return out;
}

inline std::vector<double> noise(std::size_t n, std::uint64_t seed, double sigma = 0.1) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d(0.0, sigma);
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

inline std::vector<double> tone(std::size_t n, double hz, double amp = 0.5, double fs = 16000.0) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = amp * std::sin(2.0 * std::numbers::pi * hz * static_cast<double>(i) / fs);
  return v;
}

// Full linear convolution of a stream with a fixed filter, zero history.
inline std::vector<double> convolve(std::span<const double> x, std::span<const double> h) {
  std::vector<double> y(x.size(), 0.0);
  for (std::size_t n = 0; n < x.size(); ++n) {
    for (std::size_t k = 0; k < h.size() && k <= n; ++k) y[n] += h[k] * x[n - k];
  }
  return y;
}

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Double-precision forward pass reading the float weights element by element.
struct Lstm {
  const deepfir::ModelWeights& w;
  std::vector<std::vector<double>> h, c;

  explicit Lstm(const deepfir::ModelWeights& weights) : w(weights) {
    for (const auto& l : w.layers) {
      h.emplace_back(l.hidden, 0.0);
      c.emplace_back(l.hidden, 0.0);
    }
  }

  std::vector<double> step(std::span<const float> input) {
    std::vector<double> x(input.begin(), input.end());
    for (std::size_t li = 0; li < w.layers.size(); ++li) {
      const auto& l = w.layers[li];
      const std::size_t hn = l.hidden;
      std::vector<double> z(4 * hn);
      for (std::size_t r = 0; r < 4 * hn; ++r) {
        double acc = l.bias[r];
        for (std::size_t j = 0; j < l.input_dim; ++j) acc += static_cast<double>(l.gates.at(r, j)) * x[j];
        for (std::size_t j = 0; j < hn; ++j) acc += static_cast<double>(l.gates.at(r, l.input_dim + j)) * h[li][j];
        z[r] = acc;
      }
      for (std::size_t j = 0; j < hn; ++j) {
        const double i = sigmoid(z[j]), f = sigmoid(z[hn + j]), g = std::tanh(z[2 * hn + j]),
                     o = sigmoid(z[3 * hn + j]);
        c[li][j] = f * c[li][j] + i * g;
        h[li][j] = o * std::tanh(c[li][j]);
      }
      x = h[li];
    }
    return x;
  }

  std::vector<double> predict(std::span<const float> input) {
    const auto top = step(input);
    auto dense = [](const deepfir::DenseLayer& d, const std::vector<double>& v) {
      std::vector<double> y(d.kernel.rows);
      for (std::size_t r = 0; r < d.kernel.rows; ++r) {
        double acc = d.bias[r];
        for (std::size_t j = 0; j < d.kernel.cols; ++j) acc += static_cast<double>(d.kernel.at(r, j)) * v[j];
        y[r] = acc;
      }
      return y;
    };
    auto a = dense(w.fc1, top);
    for (auto& v : a) v = std::max(v, 0.0);
    auto out = dense(w.fc2, a);
    for (auto& v : out) v = sigmoid(v);
    return out;
  }
};

}  // namespace oracle
