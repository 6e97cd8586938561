#include "scalim/curved.hpp"

#include <algorithm>
#include <cmath>

#include "scalim/parallel.hpp"

namespace scalim {

void SpacetimeModel::validate() const {
  if (dim.d < 3)
    throw DomainError("curved-state kernels need the massless flat field, absent in d=2");
  if (kind == SpacetimeKind::DeSitter && !(hubble > 0))
    throw DomainError("de Sitter needs H > 0");
}

double SpacetimeModel::scale_factor(double eta) const {
  switch (kind) {
    case SpacetimeKind::Minkowski: return 1.0;
    case SpacetimeKind::PowerLawFRW:
      if (!(eta > 0)) throw DomainError("power-law scale factor needs eta > 0");
      return std::pow(eta, exponent);
    default:
      if (!(eta < 0)) throw DomainError("de Sitter conformal time must be negative");
      return -1.0 / (hubble * eta);
  }
}

double SpacetimeModel::dlog_a(double eta) const {
  switch (kind) {
    case SpacetimeKind::Minkowski: return 0.0;
    case SpacetimeKind::PowerLawFRW: return exponent / eta;
    default: return -1.0 / eta;
  }
}

bool SpacetimeModel::eta_in_domain(double eta) const {
  switch (kind) {
    case SpacetimeKind::Minkowski: return true;
    case SpacetimeKind::PowerLawFRW: return eta > 0;
    default: return eta < 0;
  }
}

NormalChart make_chart(const SpacetimeModel& st, const Vec& base, const Mat& lorentz_frame,
                       GeodesicSettings geo) {
  st.validate();
  const int d = st.dim.d;
  if (!st.eta_in_domain(base[0]))
    throw DomainError("chart base point outside the conformal-time domain");
  if (!is_lorentz(lorentz_frame, d)) throw DomainError("chart frame must be Lorentz");
  NormalChart c;
  c.spacetime = st;
  c.base = base;
  const double ap = st.scale_factor(base[0]);
  Mat f{};
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) f.at(i, j) = lorentz_frame.at(i, j) / ap;
  c.frame = f;
  c.geodesic = geo;
  // stay clear of the conformal-time boundary
  c.validity_radius =
      st.kind == SpacetimeKind::Minkowski ? 1e30 : 0.5 * std::abs(base[0]) * ap;
  return c;
}

NormalChart make_chart(const SpacetimeModel& st, const Vec& base, GeodesicSettings geo) {
  return make_chart(st, base, Mat::identity(st.dim.d), geo);
}

NormalChart with_frame_transform(const NormalChart& chart, const Mat& lorentz) {
  const int d = chart.spacetime.dim.d;
  if (!is_lorentz(lorentz, d)) throw DomainError("frame transform must be Lorentz");
  NormalChart c = chart;
  c.frame = chart.frame.mul(lorentz, d);
  return c;
}

namespace {

struct GeoState {
  Vec x;
  Vec u;
};

GeoState geo_rhs(const SpacetimeModel& st, const GeoState& s, int d) {
  GeoState r;
  r.x = s.u;
  const double c = st.dlog_a(s.x[0]);
  double usq = s.u[0] * s.u[0];
  for (int i = 1; i < d; ++i) usq += s.u[i] * s.u[i];
  r.u[0] = -c * usq;
  for (int i = 1; i < d; ++i) r.u[i] = -2.0 * c * s.u[0] * s.u[i];
  return r;
}

GeoState rk4_step(const SpacetimeModel& st, const GeoState& s, double h, int d) {
  auto add = [d](const GeoState& a, const GeoState& b, double w) {
    GeoState r;
    for (int i = 0; i < d; ++i) {
      r.x[i] = a.x[i] + w * b.x[i];
      r.u[i] = a.u[i] + w * b.u[i];
    }
    return r;
  };
  const GeoState k1 = geo_rhs(st, s, d);
  const GeoState k2 = geo_rhs(st, add(s, k1, 0.5 * h), d);
  const GeoState k3 = geo_rhs(st, add(s, k2, 0.5 * h), d);
  const GeoState k4 = geo_rhs(st, add(s, k3, h), d);
  GeoState r = s;
  for (int i = 0; i < d; ++i) {
    r.x[i] += h / 6.0 * (k1.x[i] + 2 * k2.x[i] + 2 * k3.x[i] + k4.x[i]);
    r.u[i] += h / 6.0 * (k1.u[i] + 2 * k2.u[i] + 2 * k3.u[i] + k4.u[i]);
  }
  return r;
}

double state_diff(const GeoState& a, const GeoState& b, int d) {
  double m = 0;
  for (int i = 0; i < d; ++i) {
    m = std::max(m, std::abs(a.x[i] - b.x[i]));
    m = std::max(m, std::abs(a.u[i] - b.u[i]));
  }
  return m;
}

}  // namespace

Vec exp_map(const NormalChart& chart, const Vec& v) {
  const SpacetimeModel& st = chart.spacetime;
  const int d = st.dim.d;
  if (v.norm() > chart.validity_radius)
    throw DomainError("exp_map argument outside the chart validity bound");
  const Vec v0 = chart.frame.apply(v, d);
  if (st.kind == SpacetimeKind::Minkowski) return chart.base + v0;

  GeoState s{chart.base, v0};
  double tau = 0.0;
  double h = chart.geodesic.initial_step;
  int steps = 0;
  while (tau < 1.0) {
    if (++steps > chart.geodesic.max_steps)
      throw NumericalError("geodesic integrator exceeded the step budget");
    h = std::min(h, 1.0 - tau);
    // step doubling: one h-step against two h/2-steps
    const GeoState full = rk4_step(st, s, h, d);
    const GeoState half = rk4_step(st, rk4_step(st, s, 0.5 * h, d), 0.5 * h, d);
    const double err = state_diff(full, half, d) / 15.0;
    const double scale = chart.geodesic.tol * (1.0 + std::abs(s.x[0]) + v0.norm());
    if (err <= scale || h <= 1e-12) {
      s = half;
      tau += h;
      if (!st.eta_in_domain(s.x[0]))
        throw DomainError("geodesic left the conformal-time domain of the chart");
      if (err < 0.03 * scale) h *= 2.0;
    } else {
      h *= 0.5;
    }
  }
  return s.x;
}

double minkowski_massless_w0(SpacetimeDim dim, const Vec& dx) {
  const int d = dim.d;
  if (d < 3) throw DomainError("no massless two-point function in d=2");
  double q = -dx[0] * dx[0];
  for (int i = 1; i < d; ++i) q += dx[i] * dx[i];
  if (!(q > 0)) throw DomainError("two-point kernel evaluated at non-spacelike separation");
  const double cd = std::tgamma(0.5 * d - 1.0) / (4.0 * std::pow(kPi, 0.5 * d));
  return cd * std::pow(q, -0.5 * (d - 2));
}

double CurvedTwoPoint::kernel(const Vec& x, const Vec& y) const {
  spacetime.validate();
  const int d = spacetime.dim.d;
  const Vec dx = x - y;
  double w0 = minkowski_massless_w0(spacetime.dim, dx);
  const double ax = spacetime.scale_factor(x[0]);
  const double ay = spacetime.scale_factor(y[0]);
  double k = w0 * std::pow(ax * ay, -0.5 * (d - 2));
  if (log_modulation_eps != 0.0) {
    double q = -dx[0] * dx[0];
    for (int i = 1; i < d; ++i) q += dx[i] * dx[i];
    k *= 1.0 + log_modulation_eps * std::sin(std::log(q));
  }
  return k;
}

double scaled_pointpair_2pt(const CurvedTwoPoint& state, const NormalChart& chart, const Vec& x,
                            const Vec& y, double lambda) {
  if (!(lambda > 0)) throw DomainError("scaled_pointpair_2pt needs lambda > 0");
  const int d = chart.spacetime.dim.d;
  const Vec dx = x - y;
  double q = -dx[0] * dx[0];
  for (int i = 1; i < d; ++i) q += dx[i] * dx[i];
  if (!(q > 0)) throw DomainError("point pair must be spacelike in the chart's flat metric");
  const Vec px = exp_map(chart, x * lambda);
  const Vec py = exp_map(chart, y * lambda);
  return std::pow(lambda, d - 2) * state.kernel(px, py);
}

StabilityReport local_stability_report(const CurvedTwoPoint& state, const NormalChart& chart,
                                       const std::vector<PointProbe>& probes,
                                       const LambdaSequence& seq, double tol,
                                       double frame_rapidity, int threads) {
  if (probes.size() < 5) throw DomainError("stability report needs at least 5 point pairs");
  bool any_translate = false;
  for (const auto& p : probes) any_translate = any_translate || p.has_translate;
  if (!any_translate)
    throw DomainError("stability report needs at least one translated duplicate pair");
  seq.validate();
  const std::vector<double> lambdas = seq.values();
  const NormalChart boosted =
      with_frame_transform(chart, boost_matrix(chart.spacetime.dim.d, 1, frame_rapidity));

  StabilityReport rep;
  rep.tolerance = tol;
  rep.rows.resize(probes.size());

  auto limit_of = [&](const NormalChart& ch, const Vec& x, const Vec& y) {
    std::vector<cplx> vals(lambdas.size());
    std::vector<double> errs(lambdas.size(), 0.0);
    for (size_t k = 0; k < lambdas.size(); ++k)
      vals[k] = scaled_pointpair_2pt(state, ch, x, y, lambdas[k]);
    return extrapolate(vals, errs, 1e-4);
  };

  parallel_for(probes.size(), threads, [&](size_t i) {
    StabilityProbeRow row;
    row.probe = probes[i];
    row.estimate = limit_of(chart, probes[i].x, probes[i].y);
    row.boosted_limit = limit_of(boosted, probes[i].x, probes[i].y).limit.real();
    if (probes[i].has_translate) {
      const LimitEstimate t =
          limit_of(chart, probes[i].x + probes[i].shift, probes[i].y + probes[i].shift);
      row.translated_limit = t.limit.real();
      row.translated_converged = t.converged;
    }
    row.w0 = minkowski_massless_w0(chart.spacetime.dim, probes[i].x - probes[i].y);
    rep.rows[i] = row;
  });

  double scale = 0.0;
  for (const auto& r : rep.rows) scale = std::max(scale, std::abs(r.estimate.limit.real()));
  if (scale == 0.0) scale = 1.0;

  rep.existence_ok = true;
  for (const auto& r : rep.rows) {
    rep.existence_ok = rep.existence_ok && r.estimate.converged &&
                       (!r.probe.has_translate || r.translated_converged);
    rep.existence_residual = std::max(rep.existence_residual, r.estimate.error / scale);
  }
  rep.inconclusive = !rep.existence_ok;

  for (const auto& r : rep.rows) {
    if (r.probe.has_translate)
      rep.translation_residual = std::max(
          rep.translation_residual, std::abs(r.translated_limit - r.estimate.limit.real()) / scale);
    rep.frame_residual =
        std::max(rep.frame_residual, std::abs(r.boosted_limit - r.estimate.limit.real()) / scale);
  }
  rep.translation_ok = rep.existence_ok && rep.translation_residual <= tol;
  rep.frame_ok = rep.existence_ok && rep.frame_residual <= tol;

  // single-constant identification with the flat massless kernel
  double denom = 0.0, cross = 0.0, w0max = 0.0;
  for (const auto& r : rep.rows) {
    denom += r.w0 * r.w0;
    cross += r.w0 * r.estimate.limit.real();
    w0max = std::max(w0max, std::abs(r.w0));
  }
  rep.z = denom > 0 ? cross / denom : 0.0;
  if (rep.z > 0 && w0max > 0) {
    for (const auto& r : rep.rows)
      rep.identification_residual =
          std::max(rep.identification_residual,
                   std::abs(r.estimate.limit.real() - rep.z * r.w0) / (rep.z * w0max));
    rep.identification_ok = rep.existence_ok && rep.identification_residual <= tol;
  } else {
    rep.identification_ok = false;
    rep.identification_residual = 1.0;
  }

  rep.stable =
      rep.existence_ok && rep.translation_ok && rep.frame_ok && rep.identification_ok;
  rep.notes =
      "pointwise (unsmeared, off-diagonal) correlators at spacelike separation stand in for "
      "smeared ones; dynamics content limited to translation invariance of the limits; "
      "irreducibility and representation-kernel invariance are not visible at two-point level "
      "and are not claimed";
  return rep;
}

}  // namespace scalim
