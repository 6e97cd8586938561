#ifndef SCALIM_TESTFN_HPP_
#define SCALIM_TESTFN_HPP_

#include <vector>

#include "scalim/common.hpp"
#include "scalim/poly.hpp"
#include "scalim/vecmat.hpp"

namespace scalim {

inline constexpr int kDefaultMaxPolyDegree = 8;
inline constexpr double kDefaultSupportEps = 1e-8;

// Axis-aligned ellipsoid { x : sum_nu ((x_nu - center_nu)/radii_nu)^2 <= 1 }.
struct Ellipsoid {
  Vec center;
  Vec radii;

  Ellipsoid scaled_about_origin(double lambda) const {
    return {center * lambda, radii * lambda};
  }
  // Conservative containment: the bounding box of `inner` must satisfy the
  // gauge of *this.
  bool contains(const Ellipsoid& inner, int d) const {
    double s = 0;
    for (int nu = 0; nu < d; ++nu) {
      if (radii[nu] <= 0) return false;
      const double num = std::abs(inner.center[nu] - center[nu]) + std::abs(inner.radii[nu]);
      s += (num / radii[nu]) * (num / radii[nu]);
    }
    return s <= 1.0 + 1e-12;
  }
};

// One Gaussian wave packet
//   value(x) = amplitude * P(x - center)
//              * exp(-1/2 (x-center)^T W (x-center)) * exp(i modulation . x)
// with W symmetric positive definite and the modulation dot taken
// componentwise (Euclidean).
struct GaussianPacket {
  SpacetimeDim dim{4};
  cplx amplitude{1.0, 0.0};
  Vec center;
  Mat width;  // W
  Vec modulation;
  Poly poly;  // P, empty means the constant 1

  cplx eval(const Vec& x) const;
  // sqrt of diagonal of W^{-1}: per-axis position spread
  Vec sigma() const;
  Ellipsoid effective_support(double eps = kDefaultSupportEps) const;
  // crude upper bound on the packet's L1 norm
  double l1_bound() const;
};

// Makes a packet with diagonal widths w_nu (the quadratic form is
// sum w_nu^2 (x-center)_nu^2).
GaussianPacket make_packet(SpacetimeDim dim, cplx amplitude, const Vec& center,
                           const Vec& widths, const Vec& modulation,
                           Poly poly = Poly());
GaussianPacket make_packet_matrix(SpacetimeDim dim, cplx amplitude, const Vec& center,
                                  const Mat& width, const Vec& modulation,
                                  Poly poly = Poly());

// Finite linear combination of packets, closed under the geometric
// operations below.
struct TestFunction {
  SpacetimeDim dim{4};
  std::vector<GaussianPacket> terms;

  TestFunction() = default;
  explicit TestFunction(GaussianPacket p) : dim(p.dim) { terms.push_back(std::move(p)); }

  cplx eval(const Vec& x) const;
  double l1_bound() const;
  std::vector<Ellipsoid> support_ellipsoids(double eps = kDefaultSupportEps) const;
};

TestFunction operator+(const TestFunction& a, const TestFunction& b);
TestFunction operator*(cplx c, const TestFunction& f);

// g(x) = f(x / lambda)
TestFunction scale(const TestFunction& f, double lambda);
// g(x) = f(x - a)
TestFunction translate(const TestFunction& f, const Vec& a);
// g(x) = f(Lambda^{-1} x); Lambda proper orthochronous to 1e-12
TestFunction boost(const TestFunction& f, const Mat& lambda_matrix);
// closed-form d/dx^nu
TestFunction derivative(const TestFunction& f, int nu,
                        int degree_cap = kDefaultMaxPolyDegree);
TestFunction conj(const TestFunction& f);

// fhat(p) = \int e^{i(p^0 x^0 - pvec . xvec)} f(x) d^d x
cplx fourier(const TestFunction& f, const Vec& p);

// The transform as a packet sum in the variable kappa = (p^0, -pvec);
// fourier(f, p) equals fourier_transform(f).eval(kappa(p)).
TestFunction fourier_transform(const TestFunction& f);
Vec momentum_variable(const SpacetimeDim& dim, const Vec& p);

// f equals conj(f) as a function, decided on canonically merged packets.
bool is_real(const TestFunction& f, double tol = 1e-10);

// Convenience constructors used across the test corpus and CLI.
TestFunction gaussian(SpacetimeDim dim, cplx amplitude, const Vec& center,
                      const Vec& widths, const Vec& modulation = Vec());
// real cos-modulated packet: amplitude * cos(k . x) * gaussian envelope
TestFunction cosine_packet(SpacetimeDim dim, double amplitude, const Vec& center,
                           const Vec& widths, const Vec& k);

}  // namespace scalim

#endif  // SCALIM_TESTFN_HPP_
