// Real FFTs backed by FFTW. Plans are built once per size with
// FFTW_ESTIMATE (deterministic algorithm choice across runs) and cached
// per thread together with their scratch buffers.

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "deepfir/dsp.hpp"
#include "deepfir/errors.hpp"

namespace deepfir {
namespace {

// The FFTW planner is not thread-safe; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

class RealFftPlan {
 public:
  explicit RealFftPlan(std::size_t n)
      : n_(n),
        real_(static_cast<double*>(fftw_malloc(sizeof(double) * n))),
        spec_(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * (n / 2 + 1)))) {
    std::lock_guard lock(planner_mutex());
    const int len = static_cast<int>(n);
    forward_ = fftw_plan_dft_r2c_1d(len, real_, spec_, FFTW_ESTIMATE);
    inverse_ = fftw_plan_dft_c2r_1d(len, spec_, real_, FFTW_ESTIMATE);
  }

  RealFftPlan(const RealFftPlan&) = delete;
  RealFftPlan& operator=(const RealFftPlan&) = delete;

  ~RealFftPlan() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(inverse_);
    fftw_free(real_);
    fftw_free(spec_);
  }

  ComplexSpectrum forward(std::span<const double> x) {
    std::fill(real_, real_ + n_, 0.0);
    std::copy(x.begin(), x.end(), real_);
    fftw_execute(forward_);
    ComplexSpectrum out(n_ / 2 + 1);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = {spec_[k][0], spec_[k][1]};
    return out;
  }

  std::vector<double> inverse(std::span<const std::complex<double>> bins) {
    for (std::size_t k = 0; k < bins.size(); ++k) {
      spec_[k][0] = bins[k].real();
      spec_[k][1] = bins[k].imag();
    }
    spec_[0][1] = 0.0;
    spec_[n_ / 2][1] = 0.0;
    fftw_execute(inverse_);
    std::vector<double> out(real_, real_ + n_);
    const double scale = 1.0 / static_cast<double>(n_);
    for (double& v : out) v *= scale;
    return out;
  }

 private:
  std::size_t n_;
  double* real_;
  fftw_complex* spec_;
  fftw_plan forward_;
  fftw_plan inverse_;
};

RealFftPlan& plan_for(std::size_t n) {
  thread_local std::map<std::size_t, std::unique_ptr<RealFftPlan>> cache;
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<RealFftPlan>(n);
  return *slot;
}

void check_size(std::size_t n, const char* who) {
  if (n < 2 || !is_power_of_two(n)) {
    throw InvalidArgument(std::string(who) + ": length " + std::to_string(n) +
                          " is not a power of two >= 2");
  }
}

}  // namespace

ComplexSpectrum rfft(std::span<const double> signal) { return rfft(signal, signal.size()); }

ComplexSpectrum rfft(std::span<const double> signal, std::size_t nfft) {
  check_size(nfft, "rfft");
  if (signal.size() > nfft) {
    throw InvalidArgument("rfft: signal of " + std::to_string(signal.size()) +
                          " samples exceeds nfft " + std::to_string(nfft));
  }
  return plan_for(nfft).forward(signal);
}

std::vector<double> irfft(std::span<const std::complex<double>> spectrum, std::size_t n) {
  check_size(n, "irfft");
  if (spectrum.size() != n / 2 + 1) {
    throw InvalidArgument("irfft: expected " + std::to_string(n / 2 + 1) + " bins, got " +
                          std::to_string(spectrum.size()));
  }
  return plan_for(n).inverse(spectrum);
}

}  // namespace deepfir
