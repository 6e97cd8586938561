#include "doctest.h"

#include <cmath>

#include "support/test_helpers.hpp"

using namespace scalim;
using namespace scalim::testing;

namespace {

Vec vec2(double t, double x) {
  Vec v;
  v[0] = t;
  v[1] = x;
  return v;
}

TestFunction unit_gaussian(SpacetimeDim dim) {
  Vec w;
  for (int i = 0; i < dim.d; ++i) w[i] = 1.0;
  return gaussian(dim, 1.0, Vec(), w);
}

}  // namespace

TEST_CASE("scale: identity, pointwise oracle, group law") {
  const SpacetimeDim d4(4);
  auto rng = make_rng(11);
  const TestFunction f = random_complex_packet(rng, d4);

  const TestFunction id = scale(f, 1.0);
  CHECK(id.terms[0].center == f.terms[0].center);
  CHECK(id.terms[0].width == f.terms[0].width);
  CHECK(id.terms[0].modulation == f.terms[0].modulation);
  CHECK(id.terms[0].amplitude == f.terms[0].amplitude);

  // unit gaussian at lambda = 2: g(2) = f(1) = e^{-1/2}, widths halve
  const TestFunction u = unit_gaussian(SpacetimeDim(2));
  const TestFunction g = scale(u, 2.0);
  CHECK(g.terms[0].width.at(0, 0) == doctest::Approx(0.25));
  CHECK(g.eval(vec2(2.0, 0.0)).real() == doctest::Approx(std::exp(-0.5)).epsilon(1e-14));

  const TestFunction a = scale(scale(f, 0.7), 3.0);
  const TestFunction b = scale(f, 2.1);
  for (int i = 0; i < 4; ++i) {
    CHECK(a.terms[0].center[i] == doctest::Approx(b.terms[0].center[i]).epsilon(1e-14));
    CHECK(a.terms[0].modulation[i] == doctest::Approx(b.terms[0].modulation[i]).epsilon(1e-14));
  }
  for (int i = 0; i < 16; ++i)
    CHECK(a.terms[0].width.a[i] == doctest::Approx(b.terms[0].width.a[i]).epsilon(1e-13));

  CHECK_THROWS_AS(scale(f, 0.0), DomainError);
  CHECK_THROWS_AS(scale(f, -1.0), DomainError);
}

TEST_CASE("translate: identity, inverse, pointwise oracle") {
  const SpacetimeDim d3(3);
  auto rng = make_rng(12);
  const TestFunction f = random_complex_packet(rng, d3);
  const Vec a = random_vec(rng, 3, -2, 2);

  const TestFunction t0 = translate(f, Vec());
  const Vec x0 = random_vec(rng, 3, -1, 1);
  CHECK(std::abs(t0.eval(x0) - f.eval(x0)) < 1e-15);

  const TestFunction back = translate(translate(f, a), a * -1.0);
  for (int k = 0; k < 10; ++k) {
    const Vec x = random_vec(rng, 3, -2, 2);
    CHECK(std::abs(back.eval(x) - f.eval(x)) < 1e-14);
    const Vec xs = random_vec(rng, 3, -2, 2);
    Vec shifted = xs;
    for (int i = 0; i < 3; ++i) shifted[i] -= a[i];
    CHECK(std::abs(translate(f, a).eval(xs) - f.eval(shifted)) < 1e-14);
  }
}

TEST_CASE("boost: identity, inverse, pointwise oracle in d=2") {
  const SpacetimeDim d2(2);
  auto rng = make_rng(13);
  const TestFunction f = random_complex_packet(rng, d2);

  const TestFunction fid = boost(f, Mat::identity(2));
  const Vec probe = vec2(0.3, -0.4);
  CHECK(std::abs(fid.eval(probe) - f.eval(probe)) < 1e-14);

  const Mat fwd = boost_matrix(2, 1, 0.3);
  const Mat bwd = boost_matrix(2, 1, -0.3);
  const TestFunction round = boost(boost(f, fwd), bwd);
  for (int k = 0; k < 10; ++k) {
    const Vec x = random_vec(rng, 2, -2, 2);
    CHECK(std::abs(round.eval(x) - f.eval(x)) < 1e-12);
  }

  const Mat inv = inverse(fwd, 2);
  const TestFunction fb = boost(f, fwd);
  for (int k = 0; k < 10; ++k) {
    const Vec x = random_vec(rng, 2, -2, 2);
    CHECK(std::abs(fb.eval(x) - f.eval(inv.apply(x, 2))) < 1e-12);
  }

  Mat bad = Mat::identity(2);
  bad.at(0, 1) = 0.2;
  CHECK_THROWS_AS(boost(f, bad), DomainError);
}

TEST_CASE("boost keeps full width matrices positive definite in d=4") {
  const SpacetimeDim d4(4);
  auto rng = make_rng(14);
  TestFunction f = random_complex_packet(rng, d4);
  const Mat lam = boost_matrix(4, 2, 0.8).mul(rotation_matrix(4, 1, 3, 0.5), 4);
  REQUIRE(is_lorentz(lam, 4));
  const TestFunction g = boost(f, lam);
  CHECK(spd_min_eigenvalue(g.terms[0].width, 4) > 0);
  const Mat inv = inverse(lam, 4);
  for (int k = 0; k < 5; ++k) {
    const Vec x = random_vec(rng, 4, -1.5, 1.5);
    CHECK(std::abs(g.eval(x) - f.eval(inv.apply(x, 4))) < 1e-12);
  }
}

TEST_CASE("derivative: symbolic coefficient, finite differences, translation") {
  const SpacetimeDim d3(3);
  Vec w;
  w[0] = 1.3;
  w[1] = 0.9;
  w[2] = 1.1;
  const TestFunction f = gaussian(d3, 1.0, Vec(), w);

  // plain gaussian: derivative along nu gives -w_nu^2 u_nu as prefactor
  const TestFunction df = derivative(f, 1);
  const auto& terms = df.terms[0].poly.terms();
  REQUIRE(terms.size() == 1);
  CHECK(terms[0].exp[1] == 1);
  CHECK(terms[0].coeff.real() == doctest::Approx(-w[1] * w[1]));

  auto rng = make_rng(15);
  const TestFunction c = random_complex_packet(rng, d3);
  for (int nu = 0; nu < 3; ++nu) {
    const TestFunction dc = derivative(c, nu);
    const double h = 1e-4;
    for (int k = 0; k < 5; ++k) {
      const Vec x = random_vec(rng, 3, -1, 1);
      Vec xp = x, xm = x;
      xp[nu] += h;
      xm[nu] -= h;
      const cplx fd = (c.eval(xp) - c.eval(xm)) / (2 * h);
      CHECK(std::abs(fd - dc.eval(x)) < 1e-7);
    }
  }

  const Vec a = random_vec(rng, 3, -1, 1);
  const TestFunction lhs = derivative(translate(c, a), 2);
  const TestFunction rhs = translate(derivative(c, 2), a);
  for (int k = 0; k < 5; ++k) {
    const Vec x = random_vec(rng, 3, -2, 2);
    CHECK(std::abs(lhs.eval(x) - rhs.eval(x)) < 1e-13);
  }

  CHECK_THROWS_AS(derivative(f, 3), DomainError);
  CHECK_THROWS_AS(derivative(f, -1), DomainError);
}

TEST_CASE("fourier: zero-momentum value, scaling law, conjugation") {
  const SpacetimeDim d3(3);
  Vec w;
  w[0] = 2.0;
  w[1] = 0.5;
  w[2] = 1.0;
  const TestFunction f = gaussian(d3, cplx(1.2, -0.3), Vec(), w);
  const cplx f0 = fourier(f, Vec());
  const double expected = std::pow(kTwoPi, 1.5) / (2.0 * 0.5 * 1.0);
  CHECK(f0.real() == doctest::Approx(1.2 * expected).epsilon(1e-13));
  CHECK(f0.imag() == doctest::Approx(-0.3 * expected).epsilon(1e-13));

  auto rng = make_rng(16);
  for (int rep = 0; rep < 3; ++rep) {
    const TestFunction g = random_complex_packet(rng, d3);
    const double lam = uniform(rng, 0.3, 2.5);
    for (int k = 0; k < 20; ++k) {
      const Vec p = random_vec(rng, 3, -2, 2);
      const cplx lhs = fourier(scale(g, lam), p);
      const cplx rhs = std::pow(lam, 3) * fourier(g, p * lam);
      CHECK(std::abs(lhs - rhs) <= 1e-12 * (1 + std::abs(rhs)));
    }
    for (int k = 0; k < 10; ++k) {
      const Vec p = random_vec(rng, 3, -2, 2);
      CHECK(std::abs(std::conj(fourier(g, p)) - fourier(conj(g), p * -1.0)) < 1e-12);
    }
  }
}

TEST_CASE("fourier of derivative carries the convention's momentum factor") {
  const SpacetimeDim d2(2);
  auto rng = make_rng(17);
  const TestFunction f = random_complex_packet(rng, d2);
  for (int k = 0; k < 8; ++k) {
    const Vec p = random_vec(rng, 2, -2, 2);
    // with fhat(p) = int e^{i(p0 x0 - p1 x1)} f: d0 -> -i p0, d1 -> +i p1
    const cplx base = fourier(f, p);
    CHECK(std::abs(fourier(derivative(f, 0), p) - cplx(0, -1) * p[0] * base) < 1e-11);
    CHECK(std::abs(fourier(derivative(f, 1), p) - cplx(0, +1) * p[1] * base) < 1e-11);
  }
  // cross-check the closed form against a direct grid integral
  const Vec p = vec2(0.7, -1.1);
  const cplx grid = grid_fourier(derivative(f, 1), p, 9.0, 160);
  CHECK(std::abs(grid - fourier(derivative(f, 1), p)) < 1e-6);
}

TEST_CASE("effective support scales linearly and respects translation") {
  const SpacetimeDim d4(4);
  auto rng = make_rng(18);
  const TestFunction f = random_complex_packet(rng, d4);
  const auto base = f.support_ellipsoids();
  const auto scaled = scale(f, 0.4).support_ellipsoids();
  REQUIRE(base.size() == scaled.size());
  for (size_t i = 0; i < base.size(); ++i)
    for (int nu = 0; nu < 4; ++nu) {
      CHECK(scaled[i].center[nu] == doctest::Approx(0.4 * base[i].center[nu]).epsilon(1e-12));
      CHECK(scaled[i].radii[nu] == doctest::Approx(0.4 * base[i].radii[nu]).epsilon(1e-12));
    }
}

TEST_CASE("real-valuedness predicate") {
  const SpacetimeDim d2(2);
  Vec w;
  w[0] = 1.0;
  w[1] = 1.0;
  CHECK(is_real(gaussian(d2, 1.0, Vec(), w)));
  CHECK(is_real(cosine_packet(d2, 2.0, Vec(), w, vec2(0.5, -1.0))));
  CHECK_FALSE(is_real(gaussian(d2, cplx(0, 1), Vec(), w)));
  CHECK_FALSE(is_real(gaussian(d2, 1.0, Vec(), w, vec2(1.0, 0.0))));
}

TEST_CASE("width validation and degree cap") {
  const SpacetimeDim d2(2);
  Vec bad;
  bad[0] = 1.0;
  bad[1] = 0.0;
  CHECK_THROWS_AS(gaussian(d2, 1.0, Vec(), bad), DomainError);

  Poly deep = Poly::constant(1.0);
  MultiIndex m{};
  m[0] = 1;
  const Poly u0 = Poly::monomial(m, 1.0);
  for (int i = 0; i < 9; ++i) deep = deep * u0;
  Vec w;
  w[0] = 1.0;
  w[1] = 1.0;
  CHECK_THROWS_AS(make_packet(d2, 1.0, Vec(), w, Vec(), deep), DomainError);
}
