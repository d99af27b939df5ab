#include "tsa/fft.hpp"

#include <fftw3.h>

#include <mutex>

#include "tsa/errors.hpp"

namespace tsa {

namespace {

// FFTW plan creation/destruction is not thread-safe; execution is.
std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}

struct PlanGuard {
  fftw_plan plan = nullptr;
  ~PlanGuard() {
    if (plan != nullptr) {
      std::lock_guard<std::mutex> lock(plan_mutex());
      fftw_destroy_plan(plan);
    }
  }
};

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace

std::vector<std::complex<double>> rfft(std::span<const double> x) {
  const std::size_t n = x.size();
  if (n == 0) throw DomainError("rfft: empty input");
  std::vector<double> in(x.begin(), x.end());
  std::vector<std::complex<double>> out(n / 2 + 1);

  PlanGuard guard;
  {
    std::lock_guard<std::mutex> lock(plan_mutex());
    guard.plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), in.data(),
                                      reinterpret_cast<fftw_complex*>(out.data()),
                                      FFTW_ESTIMATE);
  }
  fftw_execute(guard.plan);
  return out;
}

std::vector<double> irfft(std::span<const std::complex<double>> spectrum, std::size_t n) {
  if (n == 0) throw DomainError("irfft: empty request");
  if (spectrum.size() != n / 2 + 1) {
    throw DomainError("irfft: spectrum length does not match n");
  }
  std::vector<std::complex<double>> in(spectrum.begin(), spectrum.end());
  std::vector<double> out(n);

  PlanGuard guard;
  {
    std::lock_guard<std::mutex> lock(plan_mutex());
    guard.plan = fftw_plan_dft_c2r_1d(static_cast<int>(n),
                                      reinterpret_cast<fftw_complex*>(in.data()),
                                      out.data(), FFTW_ESTIMATE);
  }
  fftw_execute(guard.plan);
  const double scale = 1.0 / static_cast<double>(n);
  for (double& v : out) v *= scale;
  return out;
}

std::vector<double> fft_convolve(std::span<const double> a, std::span<const double> b,
                                 std::size_t out_len) {
  if (a.empty() || b.empty()) throw DomainError("fft_convolve: empty input");
  const std::size_t full = a.size() + b.size() - 1;
  if (out_len > full) throw DomainError("fft_convolve: out_len exceeds convolution length");
  const std::size_t len = next_pow2(a.size() + b.size());

  std::vector<double> pa(len, 0.0);
  std::vector<double> pb(len, 0.0);
  std::copy(a.begin(), a.end(), pa.begin());
  std::copy(b.begin(), b.end(), pb.begin());

  const auto fa = rfft(pa);
  const auto fb = rfft(pb);
  std::vector<std::complex<double>> prod(fa.size());
  for (std::size_t i = 0; i < fa.size(); ++i) prod[i] = fa[i] * fb[i];

  std::vector<double> conv = irfft(prod, len);
  conv.resize(out_len);
  return conv;
}

}  // namespace tsa
