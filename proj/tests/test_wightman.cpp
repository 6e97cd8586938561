#include "doctest.h"

#include <cmath>

#include "support/test_helpers.hpp"

using namespace scalim;
using namespace scalim::testing;

namespace {

TestFunction unit_gaussian(SpacetimeDim dim) {
  Vec w;
  for (int i = 0; i < dim.d; ++i) w[i] = 1.0;
  return gaussian(dim, 1.0, Vec(), w);
}

Vec time_shift(double t) {
  Vec v;
  v[0] = t;
  return v;
}

}  // namespace

TEST_CASE("massless closed forms: W(f,f) = pi^2 (d=4) and pi^{5/2}/sqrt(2) (d=3)") {
  const TestFunction f4 = unit_gaussian(SpacetimeDim(4));
  const TwoPointValue v4 = w2_mass(SpacetimeDim(4), 0.0, f4, f4);
  CHECK(std::abs(v4.value.real() - kPi * kPi) < 1e-10 * kPi * kPi);
  CHECK(std::abs(v4.value.imag()) < 1e-12);

  const TestFunction f3 = unit_gaussian(SpacetimeDim(3));
  const TwoPointValue v3 = w2_mass(SpacetimeDim(3), 0.0, f3, f3);
  const double expected = std::pow(kPi, 2.5) / std::sqrt(2.0);
  CHECK(std::abs(v3.value.real() - expected) < 1e-10 * expected);
}

TEST_CASE("positivity and hermiticity for real smearings") {
  auto rng = make_rng(21);
  for (int d = 2; d <= 4; ++d) {
    const SpacetimeDim dim(d);
    const TestFunction f = random_real_packet(rng, dim);
    const TestFunction g = random_real_packet(rng, dim);
    const TwoPointValue ff = w2_mass(dim, 1.0, f, f);
    CHECK(ff.value.real() >= -ff.abs_error);
    CHECK(std::abs(ff.value.imag()) <= ff.abs_error + 1e-12);

    const TwoPointValue fg = w2_mass(dim, 1.0, f, g);
    const TwoPointValue gf = w2_mass(dim, 1.0, g, f);
    CHECK(std::abs(fg.value - std::conj(gf.value)) < 1e-11 * (1 + std::abs(fg.value)));
  }
}

TEST_CASE("translation invariance of the vacuum two-point function") {
  auto rng = make_rng(22);
  const SpacetimeDim dim(3);
  const TestFunction f = random_complex_packet(rng, dim);
  const TestFunction g = random_complex_packet(rng, dim);
  const Vec a = random_vec(rng, 3, -1.5, 1.5);
  const cplx base = w2_mass(dim, 1.0, f, g).value;
  const cplx moved = w2_mass(dim, 1.0, translate(f, a), translate(g, a)).value;
  CHECK(std::abs(base - moved) < 1e-10 * (1 + std::abs(base)));
}

TEST_CASE("independent Cartesian quadrature agrees (d=4, m=1, separated packets)") {
  const SpacetimeDim dim(4);
  Vec w;
  for (int i = 0; i < 4; ++i) w[i] = 1.0;
  Vec c;
  c[1] = 1.5;
  const TestFunction f = gaussian(dim, 1.0, Vec(), w);
  const TestFunction g = gaussian(dim, 1.0, c, w);
  const TwoPointValue ref = w2_mass(dim, 1.0, f, g);
  const cplx brute = cartesian_shell(dim, 1.0, f, g, 7.5, 72);
  CHECK(std::abs(ref.value - brute) < 1e-6 * (1 + std::abs(ref.value)));
}

TEST_CASE("d=2 adaptive axis agrees with a dense reference") {
  const SpacetimeDim dim(2);
  auto rng = make_rng(23);
  const TestFunction f = random_complex_packet(rng, dim);
  const TestFunction g = random_complex_packet(rng, dim);
  const TwoPointValue v = w2_mass(dim, 0.7, f, g);
  // dense trapezoid over the momentum axis as an independent check
  const TestFunction fhat = fourier_transform(f);
  const TestFunction ghat = fourier_transform(g);
  KahanSumC sum;
  const int n = 40000;
  const double lim = 40.0, h = 2 * lim / n;
  for (int i = 0; i <= n; ++i) {
    const double p = -lim + h * i;
    const double omega = std::sqrt(p * p + 0.49);
    Vec kappa;
    kappa[0] = omega;
    kappa[1] = -p;
    const double wgt = (i == 0 || i == n) ? 0.5 : 1.0;
    sum.add(wgt * h * std::conj(fhat.eval(kappa)) * ghat.eval(kappa) / (2 * omega * kTwoPi));
  }
  CHECK(std::abs(v.value - sum.value()) < 1e-9 * (1 + std::abs(v.value)));
}

TEST_CASE("w2 of a single atom reduces to w2_mass; two atoms are linear") {
  const SpacetimeDim dim(3);
  auto rng = make_rng(24);
  const TestFunction f = random_real_packet(rng, dim);
  const TestFunction g = random_real_packet(rng, dim);

  const ModelSpec atom = free_field(dim, 0.8);
  const TwoPointValue direct = w2_mass(dim, 0.8, f, g);
  const TwoPointValue via = w2(atom, f, g);
  CHECK(via.value == direct.value);

  ModelSpec pair = atom;
  pair.measure.atoms = {{0.8, 0.3}, {1.6, 1.1}};
  const cplx combo = w2(pair, f, g).value;
  const cplx expect = 0.3 * w2_mass(dim, 0.8, f, g).value + 1.1 * w2_mass(dim, 1.6, f, g).value;
  CHECK(std::abs(combo - expect) < 1e-12 * (1 + std::abs(expect)));
}

TEST_CASE("commutator and symmetric parts") {
  const SpacetimeDim dim(4);
  auto rng = make_rng(25);
  const TestFunction f = random_real_packet(rng, dim);
  const TestFunction g0 = random_real_packet(rng, dim);
  const TestFunction g = translate(g0, time_shift(0.6));
  const ModelSpec m = free_field(dim, 1.0);

  CHECK(commutator_sigma(m, f, f) == 0.0);
  const double sfg = commutator_sigma(m, f, g);
  const double sgf = commutator_sigma(m, g, f);
  CHECK(std::abs(sfg + sgf) < 1e-12 * (1 + std::abs(sfg)));
  CHECK(std::abs(sfg) > 1e-6);  // timelike-shifted probes see the commutator

  const double mfg = symmetric_mu(m, f, g);
  const double mgf = symmetric_mu(m, g, f);
  CHECK(mfg == doctest::Approx(mgf).epsilon(1e-12));
  const cplx w = w2(m, f, g).value;
  CHECK(std::abs(w - cplx(mfg, 0.5 * sfg)) < 1e-12 * (1 + std::abs(w)));
  CHECK(symmetric_mu(m, f, f) == doctest::Approx(w2(m, f, f).value.real()));

  CHECK_THROWS_AS(commutator_sigma(m, gaussian(dim, cplx(0, 1), Vec(), {{1, 1, 1, 1}}), f),
                  DomainError);
}

TEST_CASE("microcausality: far spacelike probes have tiny commutator") {
  const SpacetimeDim dim(4);
  Vec w;
  for (int i = 0; i < 4; ++i) w[i] = 1.0;
  Vec sep;
  sep[1] = 10.0;
  const TestFunction f = gaussian(dim, 1.0, Vec(), w);
  const TestFunction g = gaussian(dim, 1.0, sep, w);
  const ModelSpec m = free_field(dim, 1.0);
  const double scale = std::sqrt(w2(m, f, f).value.real() * w2(m, g, g).value.real());
  const double sig = commutator_sigma(m, f, g);
  CHECK(std::abs(sig) < 1e-6 * scale);
}

TEST_CASE("positivity of the quadratic form mu") {
  const SpacetimeDim dim(2);
  auto rng = make_rng(26);
  const ModelSpec m = free_field(dim, 1.2);
  std::vector<TestFunction> fs;
  std::vector<double> cs;
  for (int i = 0; i < 4; ++i) {
    fs.push_back(random_real_packet(rng, dim));
    cs.push_back(uniform(rng, -2, 2));
  }
  double q = 0, errs = 0;
  for (size_t i = 0; i < fs.size(); ++i)
    for (size_t j = 0; j < fs.size(); ++j) {
      const TwoPointValue v = w2(m, fs[i], fs[j]);
      q += cs[i] * cs[j] * v.value.real();
      errs += std::abs(cs[i] * cs[j]) * v.abs_error;
    }
  CHECK(q >= -errs);
}

TEST_CASE("Poincare invariance at the two-point level in d=2") {
  const SpacetimeDim dim(2);
  auto rng = make_rng(27);
  const TestFunction f = random_real_packet(rng, dim);
  const TestFunction g = random_real_packet(rng, dim);
  const ModelSpec m = free_field(dim, 1.0);
  const cplx base = w2(m, f, g).value;
  const Mat lam = boost_matrix(2, 1, 0.4);
  const cplx boosted = w2(m, boost(f, lam), boost(g, lam)).value;
  CHECK(std::abs(base - boosted) < 1e-8 * (1 + std::abs(base)));
}

TEST_CASE("Wick n-point functions") {
  const SpacetimeDim dim(2);
  auto rng = make_rng(28);
  const ModelSpec m = free_field(dim, 1.0);
  std::vector<TestFunction> fs;
  for (int i = 0; i < 4; ++i) fs.push_back(random_real_packet(rng, dim));

  CHECK(npoint_wick(m, {}) == cplx(1.0));
  CHECK(npoint_wick(m, {fs[0]}) == cplx(0.0));
  CHECK(npoint_wick(m, {fs[0], fs[1]}) == w2(m, fs[0], fs[1]).value);

  const cplx four = npoint_wick(m, fs);
  auto W = [&](int i, int j) { return w2(m, fs[i], fs[j]).value; };
  const cplx pairs = W(0, 1) * W(2, 3) + W(0, 2) * W(1, 3) + W(0, 3) * W(1, 2);
  CHECK(std::abs(four - pairs) < 1e-12 * (1 + std::abs(pairs)));

  std::vector<TestFunction> many(14, fs[0]);
  CHECK_THROWS_AS(npoint_wick(m, many), DomainError);
  CHECK(npoint_wick(m, many, {}, 14) != cplx(0.0));
}

TEST_CASE("Weyl correlator: normalization, generating function, distance") {
  const SpacetimeDim dim(2);
  auto rng = make_rng(29);
  const ModelSpec m = free_field(dim, 1.0);
  const TestFunction f = random_real_packet(rng, dim);
  const TestFunction g = translate(random_real_packet(rng, dim), time_shift(0.4));

  CHECK(weyl_correlator(m, {}) == cplx(1.0));
  const double muff = symmetric_mu(m, f, f);
  WeylWord single;
  single.factors = {f};
  CHECK(std::abs(weyl_correlator(m, single) - std::exp(-0.5 * muff)) < 1e-12);

  // -d^2/dsdt log omega(W(sf)W(tg)) at 0 equals W(f,g)
  const double h = 1e-3;
  auto corr = [&](double s, double t) {
    WeylWord wrd;
    wrd.factors = {s * f, t * g};
    return weyl_correlator(m, wrd);
  };
  const cplx ll = std::log(corr(h, h)), lr = std::log(corr(h, -h));
  const cplx rl = std::log(corr(-h, h)), rr = std::log(corr(-h, -h));
  const cplx mixed = -(ll - lr - rl + rr) / (4 * h * h);
  const cplx expect = w2(m, f, g).value;
  CHECK(std::abs(mixed - expect) < 1e-5 * (1 + std::abs(expect)));

  CHECK(weyl_vector_distance(m, f, f) == 0.0);

  // small-field expansion: distance^2 -> mu(delta, delta)
  const TestFunction fe = 1e-3 * f;
  const TestFunction ge = 1e-3 * g;
  const double dist = weyl_vector_distance(m, fe, ge);
  const TestFunction delta = fe + (-1.0 * ge);
  const double mudd = symmetric_mu(m, delta, delta);
  CHECK(dist * dist == doctest::Approx(mudd).epsilon(1e-3));

  WeylWord bad;
  bad.factors = {gaussian(dim, cplx(0, 1), Vec(), {{1, 1, 0, 0}})};
  CHECK_THROWS_AS(weyl_correlator(m, bad), DomainError);
}

TEST_CASE("Wick 4-point agrees with Weyl generating-function differences") {
  const SpacetimeDim dim(2);
  auto rng = make_rng(30);
  const ModelSpec m = free_field(dim, 1.0);
  std::vector<TestFunction> fs;
  for (int i = 0; i < 4; ++i) {
    TestFunction f = random_real_packet(rng, dim, false);
    // normalize so mu(f,f) is O(1) and the finite differences are tame
    const double n = std::sqrt(symmetric_mu(m, f, f));
    fs.push_back((1.0 / n) * f);
  }
  const cplx wick = npoint_wick(m, fs);
  auto stencil = [&](double h) {
    cplx sum = 0.0;
    for (int mask = 0; mask < 16; ++mask) {
      double sign = 1.0;
      WeylWord word;
      for (int j = 0; j < 4; ++j) {
        const double s = (mask >> j) & 1 ? h : -h;
        if (s < 0) sign = -sign;
        word.factors.push_back(s * fs[j]);
      }
      sum += sign * weyl_correlator(m, word);
    }
    return sum / std::pow(2 * h, 4);
  };
  // central 4th mixed difference (i^4 = 1), Richardson-extrapolated in h
  const cplx fd = (4.0 * stencil(0.005) - stencil(0.01)) / 3.0;
  CHECK(std::abs(fd - wick) < 1e-5 * (1 + std::abs(wick)));
}

TEST_CASE("quadrature gate reports non-convergence") {
  const SpacetimeDim dim(4);
  Vec w;
  for (int i = 0; i < 4; ++i) w[i] = 1.0;
  Vec sep;
  sep[1] = 9.0;
  const TestFunction f = gaussian(dim, 1.0, Vec(), w);
  const TestFunction g = gaussian(dim, 1.0, sep, w);
  QuadratureSettings q;
  q.angular_order = 3;  // far too coarse for this separation
  q.radial_nodes = 32;
  CHECK_THROWS_AS(w2_mass(dim, 1.0, f, g, q), NumericalError);
}
