#ifndef SCALIM_WIGHTMAN_HPP_
#define SCALIM_WIGHTMAN_HPP_

#include <functional>
#include <string>
#include <vector>

#include "scalim/spectral.hpp"
#include "scalim/testfn.hpp"

namespace scalim {

struct TwoPointValue {
  cplx value{};
  double abs_error = 0.0;
};

// Momentum-shell quadrature controls. d=2 uses an adaptive rule on the
// tanh-mapped axis, d=3,4 a radial tanh-mapped Gauss-Legendre rule times an
// angular rule (uniform circle / Gauss-Legendre-in-cos-theta times uniform
// azimuth). All error estimates come from a doubled companion rule.
struct QuadratureSettings {
  int radial_nodes = 256;
  int angular_order = 0;       // 0: derived from packet geometry
  double sigma_span = 6.0;     // radial reach beyond the packet center, in spreads
  double tail_factor = 1.7;    // map reach relative to the characteristic radius
  double rel_tol = 1e-10;      // d=2 adaptive target
  int max_depth = 30;          // d=2 adaptive subdivision depth
  double nonconv_rel = 1e-3;   // convergence gate on the reported error
  int max_angular_order = 160;
};

// Free-field two-point function at mass m with the module Fourier
// convention:
//   W_m(f,g) = (2 pi)^{-(d-1)} \int d^{d-1}p / (2 w_p)
//              conj(fhat)(w_p, p) ghat(w_p, p),   w_p = sqrt(|p|^2 + m^2).
// Antilinear in f, linear in g.
TwoPointValue w2_mass(SpacetimeDim d, double m, const TestFunction& f,
                      const TestFunction& g, const QuadratureSettings& q = {});

// Mass-shell integral with an extra scalar node weight; used by the
// energy-momentum diagnostics. weight(omega, p) multiplies the integrand.
TwoPointValue shell_integral(SpacetimeDim d, double m, const TestFunction& f,
                             const TestFunction& g,
                             const std::function<double(double, const Vec&)>& weight,
                             const QuadratureSettings& q = {});

// Mass-integrated (generalized free field) two-point function.
TwoPointValue w2(const ModelSpec& model, const TestFunction& f, const TestFunction& g,
                 const QuadratureSettings& q = {});

// sigma(f,g) = -i (W(f,g) - W(g,f)) = 2 Im W(f,g) for real f, g.
double commutator_sigma(const ModelSpec& model, const TestFunction& f,
                        const TestFunction& g, const QuadratureSettings& q = {});
// mu(f,g) = (W(f,g) + W(g,f)) / 2 = Re W(f,g) for real f, g.
double symmetric_mu(const ModelSpec& model, const TestFunction& f, const TestFunction& g,
                    const QuadratureSettings& q = {});

// Quasi-free n-point function: sum over ordered pairings of W values.
cplx npoint_wick(const ModelSpec& model, const std::vector<TestFunction>& fs,
                 const QuadratureSettings& q = {}, int max_n = 12);

// Ordered product of Weyl generators with real-valued arguments.
struct WeylWord {
  std::vector<TestFunction> factors;
  void validate() const;
};

// omega(W(g_1) ... W(g_n)) =
//   exp(-i/2 sum_{j<k} sigma(g_j,g_k)) exp(-1/2 mu(G,G)),  G = sum g_j,
// from W(f)W(g) = e^{-i sigma(f,g)/2} W(f+g) and omega(W(g)) = e^{-mu(g,g)/2}.
cplx weyl_correlator(const ModelSpec& model, const WeylWord& word,
                     const QuadratureSettings& q = {});

// || (W(ga) - W(g)) Omega || computed from two-point data:
//   2 - 2 Re[ e^{i sigma(ga,g)/2} e^{-mu(ga-g,ga-g)/2} ], square-rooted.
double weyl_vector_distance(const ModelSpec& model, const TestFunction& ga,
                            const TestFunction& g, const QuadratureSettings& q = {});

// Surface integral over momentum directions of |fhat(omega_m(r), -r n)|^2
// at fixed radius r (no radial Jacobian). fhat must already be a Fourier
// transform. In d=2 the "surface" is the two points +-r.
double angular_mod2_integral(SpacetimeDim d, double m, const TestFunction& fhat, double r,
                             int angular_order);

// Geometry probes the engine derives from a transformed packet pair.
int suggested_angular_order(SpacetimeDim d, const TestFunction& fhat,
                            const TestFunction& ghat, const QuadratureSettings& q = {});
double momentum_reach(SpacetimeDim d, const TestFunction& fhat,
                      const QuadratureSettings& q = {});

}  // namespace scalim

#endif  // SCALIM_WIGHTMAN_HPP_
