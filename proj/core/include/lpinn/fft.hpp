#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace lpinn {

using Complex = std::complex<double>;

bool is_power_of_two(std::size_t n);

/// Iterative radix-2 FFT with cached twiddles and bit-reversal table.
/// Convention: X_m = sum_n x_n exp(-2 pi i m n / N); inverse includes 1/N.
class FftPlan {
 public:
  /// Throws ContractViolation unless n is a power of two.
  explicit FftPlan(std::size_t n);

  std::size_t size() const { return n_; }
  void forward(std::span<Complex> data) const;
  void inverse(std::span<Complex> data) const;

 private:
  void transform(std::span<Complex> data, bool inverse) const;

  std::size_t n_;
  std::vector<std::size_t> bitrev_;
  std::vector<Complex> twiddle_;  // exp(-2 pi i k / n), k < n/2
};

std::vector<Complex> fft(std::span<const double> x);
std::vector<Complex> fft(std::span<const Complex> x);
std::vector<Complex> ifft(std::span<const Complex> spectrum);

}  // namespace lpinn
