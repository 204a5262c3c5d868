#include "lpinn/fft.hpp"

#include "lpinn/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <utility>

namespace lpinn {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

FftPlan::FftPlan(std::size_t n) : n_(n) {
  if (!is_power_of_two(n)) {
    throw ContractViolation("FFT length " + std::to_string(n) +
                            " is not a power of two");
  }
  bitrev_.resize(n);
  std::size_t bits = 0;
  while ((std::size_t{1} << bits) < n) ++bits;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t r = 0;
    for (std::size_t b = 0; b < bits; ++b) {
      if (i & (std::size_t{1} << b)) r |= std::size_t{1} << (bits - 1 - b);
    }
    bitrev_[i] = r;
  }
  twiddle_.resize(n / 2);
  for (std::size_t k = 0; k < n / 2; ++k) {
    const double angle =
        -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
    twiddle_[k] = {std::cos(angle), std::sin(angle)};
  }
}

void FftPlan::transform(std::span<Complex> a, bool inverse) const {
  if (a.size() != n_) {
    throw ShapeError("FFT plan of size " + std::to_string(n_) +
                     " applied to " + std::to_string(a.size()) + " values");
  }
  for (std::size_t i = 0; i < n_; ++i) {
    if (i < bitrev_[i]) std::swap(a[i], a[bitrev_[i]]);
  }
  for (std::size_t len = 2; len <= n_; len <<= 1) {
    const std::size_t half = len / 2;
    const std::size_t stride = n_ / len;
    for (std::size_t start = 0; start < n_; start += len) {
      for (std::size_t k = 0; k < half; ++k) {
        Complex w = twiddle_[k * stride];
        if (inverse) w = std::conj(w);
        const Complex u = a[start + k];
        const Complex v = a[start + k + half] * w;
        a[start + k] = u + v;
        a[start + k + half] = u - v;
      }
    }
  }
  if (inverse) {
    const double scale = 1.0 / static_cast<double>(n_);
    for (auto& z : a) z *= scale;
  }
}

void FftPlan::forward(std::span<Complex> data) const { transform(data, false); }
void FftPlan::inverse(std::span<Complex> data) const { transform(data, true); }

std::vector<Complex> fft(std::span<const double> x) {
  std::vector<Complex> a(x.begin(), x.end());
  FftPlan(a.size()).forward(a);
  return a;
}

std::vector<Complex> fft(std::span<const Complex> x) {
  std::vector<Complex> a(x.begin(), x.end());
  FftPlan(a.size()).forward(a);
  return a;
}

std::vector<Complex> ifft(std::span<const Complex> spectrum) {
  std::vector<Complex> a(spectrum.begin(), spectrum.end());
  FftPlan(a.size()).inverse(a);
  return a;
}

}  // namespace lpinn
