#ifndef SCALIM_CURVED_HPP_
#define SCALIM_CURVED_HPP_

#include <string>
#include <vector>

#include "scalim/scalinglimit.hpp"

namespace scalim {

enum class SpacetimeKind { Minkowski, PowerLawFRW, DeSitter };

// Conformally flat spacetimes g = a(eta)^2 (Minkowski) in conformal
// coordinates (eta, x), carrying the conformally coupled massless scalar in
// its conformal vacuum.
struct SpacetimeModel {
  SpacetimeKind kind = SpacetimeKind::Minkowski;
  SpacetimeDim dim{4};
  double exponent = 2.0;  // PowerLawFRW: a(eta) = eta^exponent, eta > 0
  double hubble = 1.0;    // DeSitter: a(eta) = -1/(H eta), eta < 0

  void validate() const;
  double scale_factor(double eta) const;
  double dlog_a(double eta) const;  // a'(eta)/a(eta)
  bool eta_in_domain(double eta) const;
};

struct GeodesicSettings {
  double tol = 1e-10;
  double initial_step = 0.05;
  int max_steps = 200000;
};

// Normal chart at `base`: frame columns e_a are g-orthonormal, the
// exponential map sends tangent components to conformal coordinates.
struct NormalChart {
  SpacetimeModel spacetime;
  Vec base;
  Mat frame;
  GeodesicSettings geodesic;
  double validity_radius = 0.0;
};

// Canonical chart: e_a = Lorentz columns / a(eta_p).
NormalChart make_chart(const SpacetimeModel& st, const Vec& base,
                       const Mat& lorentz_frame, GeodesicSettings geo = {});
NormalChart make_chart(const SpacetimeModel& st, const Vec& base, GeodesicSettings geo = {});
// Same point, frame composed with a Lorentz transformation.
NormalChart with_frame_transform(const NormalChart& chart, const Mat& lorentz);

// Geodesic from the base point with initial velocity sum_a v^a e_a,
// evaluated at unit affine parameter. Minkowski charts are exact.
Vec exp_map(const NormalChart& chart, const Vec& v);

// Massless Minkowski vacuum two-point function at spacelike separation.
double minkowski_massless_w0(SpacetimeDim dim, const Vec& dx);

// Conformal-vacuum two-point kernel in conformal coordinates:
//   K(x,y) = W0(x - y) / (a(eta_x) a(eta_y))^{(d-2)/2},
// spacelike pairs only. log_modulation_eps != 0 multiplies the kernel by
// (1 + eps sin(ln q)) with q the conformal separation squared, a synthetic
// scale-breaking seam for negative controls.
struct CurvedTwoPoint {
  SpacetimeModel spacetime;
  double log_modulation_eps = 0.0;

  double kernel(const Vec& x, const Vec& y) const;
};

// lambda^{d-2} K(exp_p(lambda x), exp_p(lambda y)); the pointwise scaled
// correlator at the chart's base point.
double scaled_pointpair_2pt(const CurvedTwoPoint& state, const NormalChart& chart, const Vec& x,
                            const Vec& y, double lambda);

struct PointProbe {
  Vec x;
  Vec y;
  bool has_translate = false;
  Vec shift;
};

struct StabilityProbeRow {
  PointProbe probe;
  LimitEstimate estimate;          // along the primary chart
  double boosted_limit = 0.0;      // same probe through the boosted chart
  double translated_limit = 0.0;   // limit of the shifted pair, if present
  bool translated_converged = true;
  double w0 = 0.0;                 // flat-space reference value
};

struct StabilityReport {
  bool existence_ok = false;
  bool translation_ok = false;
  bool frame_ok = false;
  bool identification_ok = false;
  bool stable = false;
  bool inconclusive = false;
  double existence_residual = 0.0;
  double translation_residual = 0.0;
  double frame_residual = 0.0;
  double identification_residual = 0.0;
  double z = 1.0;
  double tolerance = 1e-2;
  std::vector<StabilityProbeRow> rows;
  std::string notes;
};

// Correlator-level checks behind the local-stability verdict: convergence
// of every probe along the sequence, translation invariance of the limits,
// agreement between boost-related charts, and identification with the flat
// massless two-point function up to one constant.
StabilityReport local_stability_report(const CurvedTwoPoint& state, const NormalChart& chart,
                                       const std::vector<PointProbe>& probes,
                                       const LambdaSequence& seq, double tol = 1e-2,
                                       double frame_rapidity = 0.3, int threads = 1);

}  // namespace scalim

#endif  // SCALIM_CURVED_HPP_
