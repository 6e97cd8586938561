#ifndef SCALIM_POLY_HPP_
#define SCALIM_POLY_HPP_

#include <array>
#include <cstdint>
#include <vector>

#include "scalim/common.hpp"
#include "scalim/vecmat.hpp"

namespace scalim {

// Multi-index exponents over up to kMaxDim axes.
using MultiIndex = std::array<uint8_t, kMaxDim>;

inline int multi_degree(const MultiIndex& m) {
  return int(m[0]) + int(m[1]) + int(m[2]) + int(m[3]);
}

// Polynomial in d variables with complex coefficients, kept in canonical
// order (graded lexicographic) with near-zero terms dropped.
class Poly {
public:
  struct Term {
    MultiIndex exp{};
    cplx coeff{};
  };

  Poly() = default;
  static Poly constant(cplx c);
  static Poly monomial(const MultiIndex& m, cplx c);

  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  int degree() const;

  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator*(const Poly& o) const;
  Poly scaled(cplx c) const;

  // d/du_nu
  Poly derivative(int nu) const;
  // P(u) -> P(u / lambda): coefficient times lambda^{-|alpha|}
  Poly arg_scaled(double inv_lambda_pow_base) const;
  // P(u) -> P(B u), expanding through the linear map B (active block d x d)
  Poly compose_linear(const Mat& b, int d) const;
  Poly conjugated() const;

  cplx eval(const Vec& u, int d) const;

  // Sum of |coeff| * prod sigma_nu^alpha_nu, a scale for tolerance tests.
  double coeff_scale(const Vec& sigma, int d) const;
  double max_abs_coeff() const;

  void canonicalize(double drop_tol = 0.0);

private:
  std::vector<Term> terms_;
};

}  // namespace scalim

#endif  // SCALIM_POLY_HPP_
