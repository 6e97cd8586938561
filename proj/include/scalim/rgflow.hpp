#ifndef SCALIM_RGFLOW_HPP_
#define SCALIM_RGFLOW_HPP_

#include <string>
#include <variant>
#include <vector>

#include "scalim/wightman.hpp"

namespace scalim {

// Renormalization factor models N_lambda.
struct PowerLawRenorm {
  double c = 1.0;
  double delta = 0.0;  // N_lambda = c * lambda^delta
};
struct AutoNormalizedRenorm {
  TestFunction reference;  // N_lambda = w2(ref_lambda, ref_lambda)^{-1/2}
};
struct TabulatedRenorm {
  std::vector<std::pair<double, double>> points;  // (lambda_i decreasing, N_i)
};

struct RenormModel {
  std::variant<PowerLawRenorm, AutoNormalizedRenorm, TabulatedRenorm> kind;

  void validate() const;
};

double renorm_factor(const ModelSpec& model, const RenormModel& renorm, double lambda,
                     const QuadratureSettings& q = {});

// Evaluate an AutoNormalized factor on a fixed lambda grid once and freeze
// it as an exact-node table (log-log interpolated off the nodes).
RenormModel materialize_renorm(const ModelSpec& model, const RenormModel& renorm,
                               const std::vector<double>& lambdas,
                               const QuadratureSettings& q = {}, int threads = 1);

// A scaling orbit lambda -> N_lambda phi(f_lambda), localized in `region`.
struct ScalingOrbit {
  TestFunction base;
  RenormModel renorm;
  Ellipsoid region;
};

// Validates that the effective support of `base` sits inside `region`.
ScalingOrbit make_orbit(TestFunction base, RenormModel renorm, Ellipsoid region,
                        double eps_supp = kDefaultSupportEps);
// Smallest-effort axis-aligned region holding the support with a margin.
Ellipsoid default_region(const TestFunction& f, double margin = 1.3,
                         double eps_supp = kDefaultSupportEps);

// N^F N^G w2(f_lambda, g_lambda)
TwoPointValue scaled_w2(const ModelSpec& model, const ScalingOrbit& f,
                        const ScalingOrbit& g, double lambda,
                        const QuadratureSettings& q = {});

cplx scaled_npoint(const ModelSpec& model, const std::vector<ScalingOrbit>& orbits,
                   double lambda, const QuadratureSettings& q = {});

// Weyl-carrier lift: the correlator of W(N_lambda f_lambda) factors.
cplx scaled_weyl(const ModelSpec& model, const std::vector<ScalingOrbit>& orbits,
                 double lambda, const QuadratureSettings& q = {});

struct RenormFit {
  double c = 1.0;
  double delta = 0.0;
  double residual = 0.0;  // max |log N - fit| over the grid
};

// Least-squares fit of log N_lambda = log c + delta log lambda with
// N_lambda = w2(f_lambda, f_lambda)^{-1/2}.
RenormFit fit_renorm_exponent(const ModelSpec& model, const TestFunction& f,
                              const std::vector<double>& lambda_grid,
                              const QuadratureSettings& q = {}, int threads = 1);

struct EmtPair {
  double lhs = 0.0;  // | <phi_l(f) Omega, P_nu phi_l(f) Omega> |
  double rhs = 0.0;  // lambda^{-1} | <phi_l(f) Omega, phi_l(d_nu f) Omega> |
};

// Two independent evaluations of the energy-momentum transfer identity;
// single-mass models only.
EmtPair emt_identity(const ModelSpec& model, const ScalingOrbit& orbit, double lambda,
                     int nu, const QuadratureSettings& q = {});

// Radius holding the fraction `quantile` of the one-particle
// energy-momentum density of phi_lambda(f) Omega.
double emt_radius(const ModelSpec& model, const ScalingOrbit& orbit, double lambda,
                  double quantile, const QuadratureSettings& q = {});

struct GammaRow {
  Vec displacement;
  double s = 0.0;  // sup over the grid of the vacuum-vector proxy norm
};

struct OrbitConditionReport {
  double alpha_sup_norm = 1.0;  // Weyl carriers are unitary
  bool beta_ok = false;
  std::vector<double> lambdas;
  std::vector<GammaRow> gamma;
  bool gamma_decreasing = false;
  std::string note;
};

// Checks computable surrogates of uniform boundedness, localization in the
// scaled region and norm continuity of the translated orbit. The gamma
// column uses the GNS vacuum-vector norm, an explicitly weaker proxy for
// the operator norm.
OrbitConditionReport orbit_condition_report(const ModelSpec& model, const ScalingOrbit& orbit,
                                            const std::vector<double>& lambda_grid,
                                            const std::vector<Vec>& displacements,
                                            const QuadratureSettings& q = {}, int threads = 1);

}  // namespace scalim

#endif  // SCALIM_RGFLOW_HPP_
