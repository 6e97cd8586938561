#include "doctest.h"

#include "scalim/poly.hpp"

using namespace scalim;

namespace {
MultiIndex mi(int a, int b = 0, int c = 0, int d = 0) {
  return MultiIndex{uint8_t(a), uint8_t(b), uint8_t(c), uint8_t(d)};
}
}  // namespace

TEST_CASE("polynomial arithmetic and evaluation") {
  const Poly p = Poly::constant(2.0) + Poly::monomial(mi(1), 3.0);   // 2 + 3u0
  const Poly q = Poly::monomial(mi(0, 1), 1.0);                      // u1
  const Poly pq = p * q;
  Vec u;
  u[0] = 0.5;
  u[1] = -2.0;
  CHECK(pq.eval(u, 2).real() == doctest::Approx(-7.0));
  CHECK(pq.eval(u, 2).imag() == 0.0);
  CHECK(pq.degree() == 2);
  CHECK((p - p).is_zero());
}

TEST_CASE("derivative and argument scaling") {
  // u0^2 u1
  const Poly p = Poly::monomial(mi(2, 1), 1.0);
  const Poly dp = p.derivative(0);
  Vec u;
  u[0] = 1.5;
  u[1] = 2.0;
  CHECK(dp.eval(u, 2).real() == doctest::Approx(2 * 1.5 * 2.0));
  // P(u/2): coefficient scaled by 2^{-3}
  const Poly s = p.arg_scaled(0.5);
  CHECK(s.eval(u, 2).real() == doctest::Approx(p.eval({{0.75, 1.0, 0, 0}}, 2).real()));
}

TEST_CASE("composition with a linear map matches direct evaluation") {
  Mat b{};
  b.at(0, 0) = 1.0;
  b.at(0, 1) = 2.0;
  b.at(1, 0) = -0.5;
  b.at(1, 1) = 1.5;
  const Poly p = Poly::constant(1.0) + Poly::monomial(mi(1, 1), 2.0) + Poly::monomial(mi(0, 2), -1.0);
  const Poly comp = p.compose_linear(b, 2);
  Vec u;
  u[0] = 0.3;
  u[1] = -0.7;
  const Vec bu = b.apply(u, 2);
  CHECK(comp.eval(u, 2).real() == doctest::Approx(p.eval(bu, 2).real()).epsilon(1e-13));
}

TEST_CASE("canonicalization merges duplicate terms") {
  Poly p = Poly::monomial(mi(1), 1.0) + Poly::monomial(mi(1), 2.0);
  CHECK(p.terms().size() == 1);
  CHECK(p.terms()[0].coeff == cplx(3.0, 0.0));
}
