#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "deepfir/filter.hpp"

namespace deepfir {

using Sample = double;
using ComplexSpectrum = std::vector<std::complex<double>>;

struct WindowVec {
  std::vector<double> coefficients;

  std::size_t length() const { return coefficients.size(); }
  double operator[](std::size_t i) const { return coefficients[i]; }
};

// Symmetric Hamming: w[n] = 0.54 - 0.46 cos(2 pi n / (length - 1)).
WindowVec hamming(std::size_t length);

// Periodic square-root Hann. Its square satisfies COLA at hop = length / 2.
WindowVec sqrt_hann(std::size_t length);

// Periodic Hann, w[n] = 0.5 (1 - cos(2 pi n / length)).
WindowVec hann_periodic(std::size_t length);

// Half-Hann crossfade ramps. rise[n] = 0.5 (1 - cos(pi (n + 1) / length)),
// fall[n] = 1 - rise[n]; rise ends at exactly 1.
std::pair<WindowVec, WindowVec> hann_crossfade(std::size_t length);

bool is_power_of_two(std::size_t n);

// Real-input FFT of a power-of-two length N >= 2. Returns N/2 + 1 bins.
ComplexSpectrum rfft(std::span<const double> signal);

// Same, zero-padding `signal` to `nfft` first.
ComplexSpectrum rfft(std::span<const double> signal, std::size_t nfft);

// Inverse of rfft: N/2 + 1 bins in, N real samples out (1/N normalized).
// Imaginary parts of bins 0 and N/2 are ignored.
std::vector<double> irfft(std::span<const std::complex<double>> spectrum, std::size_t n);

// Fixed-capacity history of the most recent samples, zero-initialized.
// Storage is mirrored so any suffix can be viewed contiguously.
class RingBuffer {
 public:
  explicit RingBuffer(std::size_t capacity);

  std::size_t capacity() const { return capacity_; }

  void push(Sample x);
  void push(std::span<const Sample> xs);

  // The newest k samples, oldest first. k <= capacity.
  std::span<const Sample> last(std::size_t k) const;

  Sample newest() const { return last(1)[0]; }

  void clear();

 private:
  std::size_t capacity_;
  std::size_t head_ = 0;  // next write slot in [0, capacity)
  std::vector<Sample> storage_;
};

// y = sum_k taps[k] * x[n - k] with x[n] the newest sample in `history`.
Sample direct_convolve(const RingBuffer& history, const FirFilter& taps);

}  // namespace deepfir
