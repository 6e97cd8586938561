#include "scalim/rgflow.hpp"

#include <algorithm>
#include <cmath>

#include "scalim/parallel.hpp"
#include "scalim/quadrature.hpp"

namespace scalim {

void RenormModel::validate() const {
  if (const auto* p = std::get_if<PowerLawRenorm>(&kind)) {
    if (!(p->c > 0)) throw DomainError("power-law renormalization needs c > 0");
  } else if (const auto* t = std::get_if<TabulatedRenorm>(&kind)) {
    if (t->points.size() < 2) throw DomainError("tabulated renormalization needs >= 2 points");
    for (size_t i = 0; i < t->points.size(); ++i) {
      if (!(t->points[i].first > 0) || !(t->points[i].second > 0))
        throw DomainError("tabulated renormalization needs positive (lambda, N)");
      if (i > 0 && !(t->points[i].first < t->points[i - 1].first))
        throw DomainError("tabulated lambdas must be strictly decreasing");
    }
  }
}

double renorm_factor(const ModelSpec& model, const RenormModel& renorm, double lambda,
                     const QuadratureSettings& q) {
  if (!(lambda > 0)) throw DomainError("renormalization factor needs lambda > 0");
  renorm.validate();
  if (const auto* p = std::get_if<PowerLawRenorm>(&renorm.kind))
    return p->c * std::pow(lambda, p->delta);
  if (const auto* a = std::get_if<AutoNormalizedRenorm>(&renorm.kind)) {
    const TestFunction ref = scale(a->reference, lambda);
    const TwoPointValue v = w2(model, ref, ref, q);
    if (!(v.value.real() > 0))
      throw NumericalError("auto-normalization reference has non-positive norm at lambda = " +
                           format_g12(lambda));
    return 1.0 / std::sqrt(v.value.real());
  }
  const auto& tab = std::get<TabulatedRenorm>(renorm.kind);
  // exact node match first, log-log interpolation otherwise
  for (const auto& [l, n] : tab.points)
    if (std::abs(l - lambda) <= 1e-12 * std::max(l, lambda)) return n;
  const double x = std::log(lambda);
  size_t hi = tab.points.size() - 1;
  for (size_t i = 1; i < tab.points.size(); ++i) {
    if (lambda >= tab.points[i].first) {
      hi = i;
      break;
    }
  }
  const size_t lo = hi - 1;
  const double x0 = std::log(tab.points[lo].first), x1 = std::log(tab.points[hi].first);
  const double y0 = std::log(tab.points[lo].second), y1 = std::log(tab.points[hi].second);
  const double t = (x - x0) / (x1 - x0);
  return std::exp(y0 + t * (y1 - y0));
}

RenormModel materialize_renorm(const ModelSpec& model, const RenormModel& renorm,
                               const std::vector<double>& lambdas,
                               const QuadratureSettings& q, int threads) {
  if (!std::holds_alternative<AutoNormalizedRenorm>(renorm.kind)) return renorm;
  std::vector<double> sorted = lambdas;
  std::sort(sorted.begin(), sorted.end(), std::greater<double>());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::vector<double> ns(sorted.size());
  parallel_for(sorted.size(), threads,
               [&](size_t i) { ns[i] = renorm_factor(model, renorm, sorted[i], q); });
  TabulatedRenorm tab;
  for (size_t i = 0; i < sorted.size(); ++i) tab.points.emplace_back(sorted[i], ns[i]);
  RenormModel out;
  out.kind = tab;
  out.validate();
  return out;
}

Ellipsoid default_region(const TestFunction& f, double margin, double eps_supp) {
  const int d = f.dim.d;
  const auto supports = f.support_ellipsoids(eps_supp);
  if (supports.empty()) throw DomainError("cannot build a region for an empty test function");
  Vec center;
  for (const auto& e : supports) center = center + e.center;
  center = center * (1.0 / double(supports.size()));
  Vec reach;
  for (const auto& e : supports)
    for (int nu = 0; nu < d; ++nu)
      reach[nu] = std::max(reach[nu], std::abs(e.center[nu] - center[nu]) + e.radii[nu]);
  Ellipsoid region;
  region.center = center;
  region.radii = reach * (std::sqrt(double(d)) * margin);
  return region;
}

ScalingOrbit make_orbit(TestFunction base, RenormModel renorm, Ellipsoid region,
                        double eps_supp) {
  renorm.validate();
  const int d = base.dim.d;
  for (const auto& e : base.support_ellipsoids(eps_supp))
    if (!region.contains(e, d))
      throw DomainError("orbit base function is not effectively supported in the region");
  return ScalingOrbit{std::move(base), std::move(renorm), region};
}

TwoPointValue scaled_w2(const ModelSpec& model, const ScalingOrbit& f,
                        const ScalingOrbit& g, double lambda, const QuadratureSettings& q) {
  if (!(lambda > 0)) throw DomainError("scaled_w2 needs lambda > 0");
  const double nf = renorm_factor(model, f.renorm, lambda, q);
  const double ng = renorm_factor(model, g.renorm, lambda, q);
  TwoPointValue v = w2(model, scale(f.base, lambda), scale(g.base, lambda), q);
  v.value *= nf * ng;
  v.abs_error *= nf * ng;
  return v;
}

cplx scaled_npoint(const ModelSpec& model, const std::vector<ScalingOrbit>& orbits,
                   double lambda, const QuadratureSettings& q) {
  if (orbits.size() % 2 == 1) return 0.0;
  double nprod = 1.0;
  std::vector<TestFunction> fs;
  fs.reserve(orbits.size());
  for (const auto& o : orbits) {
    nprod *= renorm_factor(model, o.renorm, lambda, q);
    fs.push_back(scale(o.base, lambda));
  }
  return nprod * npoint_wick(model, fs, q);
}

cplx scaled_weyl(const ModelSpec& model, const std::vector<ScalingOrbit>& orbits,
                 double lambda, const QuadratureSettings& q) {
  WeylWord word;
  for (const auto& o : orbits) {
    const double n = renorm_factor(model, o.renorm, lambda, q);
    word.factors.push_back(n * scale(o.base, lambda));
  }
  return weyl_correlator(model, word, q);
}

RenormFit fit_renorm_exponent(const ModelSpec& model, const TestFunction& f,
                              const std::vector<double>& lambda_grid,
                              const QuadratureSettings& q, int threads) {
  if (lambda_grid.size() < 4) throw DomainError("renormalization fit needs >= 4 grid points");
  const auto [mn, mx] = std::minmax_element(lambda_grid.begin(), lambda_grid.end());
  if (!(*mn > 0)) throw DomainError("renormalization fit needs positive lambdas");
  if (*mx / *mn < 99.99) throw DomainError("renormalization fit grid must span >= 2 decades");

  std::vector<double> logn(lambda_grid.size());
  parallel_for(lambda_grid.size(), threads, [&](size_t i) {
    const TestFunction fl = scale(f, lambda_grid[i]);
    const double v = w2(model, fl, fl, q).value.real();
    if (!(v > 0))
      throw NumericalError("non-positive norm in renormalization fit at lambda = " +
                           format_g12(lambda_grid[i]));
    logn[i] = -0.5 * std::log(v);
  });
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = double(lambda_grid.size());
  for (size_t i = 0; i < lambda_grid.size(); ++i) {
    const double x = std::log(lambda_grid[i]);
    sx += x;
    sy += logn[i];
    sxx += x * x;
    sxy += x * logn[i];
  }
  RenormFit fit;
  fit.delta = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double intercept = (sy - fit.delta * sx) / n;
  fit.c = std::exp(intercept);
  for (size_t i = 0; i < lambda_grid.size(); ++i)
    fit.residual = std::max(fit.residual,
                            std::abs(logn[i] - (intercept + fit.delta * std::log(lambda_grid[i]))));
  return fit;
}

namespace {

double single_atom_mass(const ModelSpec& model, const char* who) {
  if (model.measure.atoms.size() != 1 || model.measure.density)
    throw DomainError(std::string(who) + " requires a single-mass model");
  return model.measure.atoms[0].mass;
}

}  // namespace

EmtPair emt_identity(const ModelSpec& model, const ScalingOrbit& orbit, double lambda,
                     int nu, const QuadratureSettings& q) {
  const int d = model.dim.d;
  if (nu < 0 || nu >= d) throw DomainError("emt_identity axis out of range");
  const double m = single_atom_mass(model, "emt_identity");
  const double wgt = model.measure.atoms[0].weight;
  if (!is_real(orbit.base)) throw DomainError("emt_identity requires a real orbit base");
  const double n = renorm_factor(model, orbit.renorm, lambda, q);
  const TestFunction fl = scale(orbit.base, lambda);

  EmtPair out;
  // direct path: p_nu-weighted one-particle density
  const TwoPointValue lhs = shell_integral(
      model.dim, m, fl, fl, [nu](double omega, const Vec& p) { return nu == 0 ? omega : p[nu]; },
      q);
  out.lhs = n * n * wgt * std::abs(lhs.value);
  // derivative-packet path through the generic two-point machinery
  const TestFunction dfl = scale(derivative(orbit.base, nu), lambda);
  const TwoPointValue rhs = w2(model, fl, dfl, q);
  out.rhs = n * n / lambda * std::abs(rhs.value);
  return out;
}

double emt_radius(const ModelSpec& model, const ScalingOrbit& orbit, double lambda,
                  double quantile, const QuadratureSettings& q) {
  if (!(quantile > 0 && quantile < 1)) throw DomainError("emt_radius quantile must be in (0,1)");
  if (!is_real(orbit.base)) throw DomainError("emt_radius requires a real orbit base");
  const int d = model.dim.d;
  const TestFunction fhat = fourier_transform(scale(orbit.base, lambda));
  const int order = suggested_angular_order(model.dim, fhat, fhat, q);
  const double reach = q.tail_factor * momentum_reach(model.dim, fhat, q);

  auto radial_density = [&](double r) {
    auto kernel = [&](double m) -> cplx {
      const double omega = std::sqrt(r * r + m * m);
      return angular_mod2_integral(model.dim, m, fhat, r, order) / (2.0 * omega);
    };
    return std::pow(r, d - 2) * integrate_mass(model.measure, kernel).value.real();
  };
  auto cumulative = [&](double upto, int nodes) {
    const QuadRule g = gauss_legendre_on(nodes, 0.0, upto);
    KahanSum s;
    for (size_t i = 0; i < g.nodes.size(); ++i) s.add(g.weights[i] * radial_density(g.nodes[i]));
    return s.value();
  };

  const double total = cumulative(reach, 2 * q.radial_nodes);
  if (!(total > 0)) throw NumericalError("emt_radius: vanishing energy-momentum density");
  double lo = 0.0, hi = reach;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (cumulative(mid, 192) / total < quantile)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

OrbitConditionReport orbit_condition_report(const ModelSpec& model, const ScalingOrbit& orbit,
                                            const std::vector<double>& lambda_grid,
                                            const std::vector<Vec>& displacements,
                                            const QuadratureSettings& q, int threads) {
  if (lambda_grid.empty()) throw DomainError("orbit report needs a lambda grid");
  if (!is_real(orbit.base)) throw DomainError("orbit report requires a real (Weyl) orbit base");
  OrbitConditionReport rep;
  rep.lambdas = lambda_grid;
  rep.alpha_sup_norm = 1.0;  // ||W(h) Omega|| = 1 for every Weyl generator

  rep.beta_ok = true;
  const int d = model.dim.d;
  for (double l : lambda_grid) {
    const Ellipsoid scaled_region = orbit.region.scaled_about_origin(l);
    for (const auto& e : scale(orbit.base, l).support_ellipsoids())
      if (!scaled_region.contains(e, d)) rep.beta_ok = false;
  }

  // gamma proxy: s(a) = sup_lambda || (W(h_l translated by l a) - W(h_l)) Omega ||
  const RenormModel frozen = materialize_renorm(model, orbit.renorm, lambda_grid, q, threads);
  std::vector<double> table(displacements.size() * lambda_grid.size());
  parallel_for(table.size(), threads, [&](size_t idx) {
    const size_t ia = idx / lambda_grid.size();
    const size_t il = idx % lambda_grid.size();
    const double l = lambda_grid[il];
    const double n = renorm_factor(model, frozen, l, q);
    const TestFunction h = n * scale(orbit.base, l);
    const TestFunction ha = translate(h, displacements[ia] * l);
    table[idx] = weyl_vector_distance(model, ha, h, q);
  });
  for (size_t ia = 0; ia < displacements.size(); ++ia) {
    double s = 0;
    for (size_t il = 0; il < lambda_grid.size(); ++il)
      s = std::max(s, table[ia * lambda_grid.size() + il]);
    rep.gamma.push_back({displacements[ia], s});
  }
  rep.gamma_decreasing = true;
  for (size_t ia = 1; ia < rep.gamma.size(); ++ia)
    if (rep.gamma[ia].s > rep.gamma[ia - 1].s + 1e-12) rep.gamma_decreasing = false;
  rep.note =
      "gamma column uses the GNS vacuum-vector norm of Weyl differences, a proxy weaker than "
      "the operator norm; Lorentz part of the continuity condition not checked";
  return rep;
}

}  // namespace scalim
