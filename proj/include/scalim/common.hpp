#ifndef SCALIM_COMMON_HPP_
#define SCALIM_COMMON_HPP_

#include <complex>
#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

namespace scalim {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// Precondition violations (bad dimensions, invalid parameters, forbidden
// model families).
class DomainError : public std::invalid_argument {
public:
  explicit DomainError(const std::string& msg) : std::invalid_argument(msg) {}
};

// Failures of the numerics themselves (non-finite integrands, quadrature
// that does not reach its tolerance).
class NumericalError : public std::runtime_error {
public:
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

// Neumaier compensated accumulator. Summation order is fixed by the caller,
// so results are identical across thread counts.
class KahanSum {
public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

class KahanSumC {
public:
  void add(cplx z) {
    re_.add(z.real());
    im_.add(z.imag());
  }
  cplx value() const { return {re_.value(), im_.value()}; }

private:
  KahanSum re_, im_;
};

inline std::string format_g12(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

inline uint64_t fnv1a64(const void* data, size_t n) {
  const auto* p = static_cast<const unsigned char*>(data);
  uint64_t h = 14695981039346656037ull;
  for (size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string fnv1a64_hex(const std::string& s) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a64(s.data(), s.size())));
  return buf;
}

// Regularized upper incomplete gamma Q(a, x) for half-integer a = two_a/2,
// via the downward closed forms Q(1/2,x) = erfc(sqrt(x)), Q(1,x) = exp(-x)
// and the recurrence Q(a+1,x) = Q(a,x) + x^a e^{-x} / Gamma(a+1).
double upper_gamma_regularized_half(int two_a, double x);

}  // namespace scalim

#endif  // SCALIM_COMMON_HPP_
