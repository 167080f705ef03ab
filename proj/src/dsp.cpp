#include "deepfir/dsp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "deepfir/errors.hpp"

namespace deepfir {

FirFilter FirFilter::impulse(std::size_t tap_count) {
  FirFilter f;
  f.taps.assign(tap_count, 0.0);
  if (tap_count > 0) f.taps[0] = 1.0;
  return f;
}

WindowVec hamming(std::size_t length) {
  if (length < 2) throw InvalidArgument("hamming: length must be >= 2");
  WindowVec w;
  w.coefficients.resize(length);
  const double denom = static_cast<double>(length - 1);
  // Evaluated on the first half and mirrored, so the window is exactly symmetric.
  for (std::size_t n = 0; n < length; ++n) {
    const auto m = static_cast<double>(std::min(n, length - 1 - n));
    w.coefficients[n] = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * m / denom);
  }
  return w;
}

WindowVec hann_periodic(std::size_t length) {
  if (length < 1) throw InvalidArgument("hann_periodic: length must be >= 1");
  WindowVec w;
  w.coefficients.resize(length);
  const double len = static_cast<double>(length);
  for (std::size_t n = 0; n < length; ++n) {
    w.coefficients[n] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(n) / len));
  }
  return w;
}

WindowVec sqrt_hann(std::size_t length) {
  WindowVec w = hann_periodic(length);
  for (double& c : w.coefficients) c = std::sqrt(c);
  return w;
}

std::pair<WindowVec, WindowVec> hann_crossfade(std::size_t length) {
  if (length == 0) throw InvalidArgument("hann_crossfade: length must be >= 1");
  WindowVec rise, fall;
  rise.coefficients.resize(length);
  fall.coefficients.resize(length);
  const double len = static_cast<double>(length);
  for (std::size_t n = 0; n < length; ++n) {
    // n + 1 == length gives cos(pi) = -1 exactly, so rise ends at 1.0.
    rise.coefficients[n] = 0.5 * (1.0 - std::cos(std::numbers::pi * static_cast<double>(n + 1) / len));
    fall.coefficients[n] = 1.0 - rise.coefficients[n];
  }
  return {std::move(rise), std::move(fall)};
}

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

RingBuffer::RingBuffer(std::size_t capacity) : capacity_(capacity), storage_(2 * capacity, 0.0) {
  if (capacity == 0) throw InvalidArgument("RingBuffer: capacity must be >= 1");
}

void RingBuffer::push(Sample x) {
  storage_[head_] = x;
  storage_[head_ + capacity_] = x;
  head_ = head_ + 1 == capacity_ ? 0 : head_ + 1;
}

void RingBuffer::push(std::span<const Sample> xs) {
  for (Sample x : xs) push(x);
}

std::span<const Sample> RingBuffer::last(std::size_t k) const {
  if (k > capacity_) {
    throw InvalidArgument("RingBuffer::last: requested " + std::to_string(k) +
                          " samples from capacity " + std::to_string(capacity_));
  }
  // storage_[head_ .. head_ + capacity_) is the full history, oldest first.
  return {storage_.data() + head_ + capacity_ - k, k};
}

void RingBuffer::clear() {
  std::fill(storage_.begin(), storage_.end(), 0.0);
  head_ = 0;
}

Sample direct_convolve(const RingBuffer& history, const FirFilter& filter) {
  const std::size_t k = filter.size();
  if (k > history.capacity()) {
    throw InvalidArgument("direct_convolve: " + std::to_string(k) + " taps exceed history of " +
                          std::to_string(history.capacity()));
  }
  auto x = history.last(k);
  Sample y = 0.0;
  for (std::size_t i = 0; i < k; ++i) y += filter.taps[i] * x[k - 1 - i];
  return y;
}

}  // namespace deepfir
