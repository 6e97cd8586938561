#include "scalim/wightman.hpp"

#include <algorithm>
#include <cmath>

#include "scalim/quadrature.hpp"

namespace scalim {

namespace {

struct ShellGeometry {
  double r_char = 1.0;       // spatial momentum reach of the packet pair
  int angular = 8;           // Gauss order in cos(theta) (d=4) / bandwidth (d=3)
  double bandwidth = 0.0;    // angular oscillation scale at r = r_char
};

double spatial_norm(const Vec& v, int d) {
  double s = 0;
  for (int i = 1; i < d; ++i) s += v[i] * v[i];
  return std::sqrt(s);
}

ShellGeometry analyze(const SpacetimeDim& dim, const TestFunction& fhat,
                      const TestFunction& ghat, const QuadratureSettings& q) {
  const int d = dim.d;
  ShellGeometry g;
  double r_char = 0.0, bw = 0.0;
  auto scan = [&](const TestFunction& h) {
    for (const auto& p : h.terms) {
      const double sig = std::sqrt(1.0 / spd_min_eigenvalue(p.width, d));
      r_char = std::max(r_char, spatial_norm(p.center, d) + q.sigma_span * sig);
    }
  };
  scan(fhat);
  scan(ghat);
  r_char = std::max(r_char, 1e-6);
  auto scan_bw = [&](const TestFunction& h) {
    for (const auto& p : h.terms) {
      // linear-in-direction phase and envelope terms at radius r_char
      const Vec wc = p.width.apply(p.center, d);
      double lin = spatial_norm(p.modulation, d) + spatial_norm(wc, d);
      // anisotropy of the spatial block of the quadratic form
      Mat sp{};
      for (int i = 1; i < d; ++i)
        for (int j = 1; j < d; ++j) sp.at(i - 1, j - 1) = p.width.at(i, j);
      double spread = 0.0;
      if (d >= 3)
        spread = spd_max_eigenvalue(sp, d - 1) - spd_min_eigenvalue(sp, d - 1);
      bw = std::max(bw, r_char * lin + 0.5 * r_char * r_char * spread);
    }
  };
  scan_bw(fhat);
  scan_bw(ghat);
  g.r_char = r_char;
  g.bandwidth = bw;
  const int order = int(std::ceil(0.75 * bw)) + 8;
  g.angular = std::min(order, q.max_angular_order);
  if (q.angular_order > 0) g.angular = q.angular_order;
  return g;
}

using NodeWeight = std::function<double(double, const Vec&)>;

// One pass of the mass-shell quadrature for d = 3, 4. Returns the full
// integral including the (2 pi)^{-(d-1)} normalization; abs_sum collects
// sum of |integrand| * weight for the convergence gate.
cplx shell_pass(const SpacetimeDim& dim, double m, const TestFunction& fhat,
                const TestFunction& ghat, const NodeWeight& weight, int n_radial,
                int angular, const ShellGeometry& geom, const QuadratureSettings& q,
                double* abs_sum) {
  const int d = dim.d;
  // choose the map scale so the outermost node reaches tail_factor * r_char
  const QuadRule& base = gauss_legendre(n_radial);
  const double t_max = 0.5 * (base.nodes[n_radial - 1] + 1.0);
  const double reach = std::atanh(t_max);
  const double scale = std::max(q.tail_factor * geom.r_char, 1e-8) / reach;
  const QuadRule radial = tanh_halfline(n_radial, scale);

  KahanSumC total;
  KahanSum asum;
  const double norm = std::pow(kTwoPi, -(d - 1));

  if (d == 3) {
    const int n_phi = std::max(16, 2 * angular + 1);
    const double dphi = kTwoPi / n_phi;
    for (int ir = 0; ir < n_radial; ++ir) {
      const double r = radial.nodes[ir];
      const double omega = std::sqrt(r * r + m * m);
      const double wr = radial.weights[ir] * r / (2.0 * omega) * dphi * norm;
      KahanSumC ang;
      KahanSum aang;
      for (int ip = 0; ip < n_phi; ++ip) {
        const double phi = dphi * ip;
        Vec kappa;
        kappa[0] = omega;
        kappa[1] = -r * std::cos(phi);
        kappa[2] = -r * std::sin(phi);
        cplx val = std::conj(fhat.eval(kappa)) * ghat.eval(kappa);
        if (weight) {
          Vec p;
          p[0] = omega;
          p[1] = -kappa[1];
          p[2] = -kappa[2];
          val *= weight(omega, p);
        }
        ang.add(val);
        aang.add(std::abs(val));
      }
      total.add(wr * ang.value());
      asum.add(std::abs(wr) * aang.value());
    }
  } else {  // d == 4
    const int n_theta = std::max(4, angular);
    const int n_phi = 2 * n_theta + 1;
    const QuadRule& cth = gauss_legendre(n_theta);
    const double dphi = kTwoPi / n_phi;
    for (int ir = 0; ir < n_radial; ++ir) {
      const double r = radial.nodes[ir];
      const double omega = std::sqrt(r * r + m * m);
      const double wr = radial.weights[ir] * r * r / (2.0 * omega) * dphi * norm;
      KahanSumC ang;
      KahanSum aang;
      for (int iu = 0; iu < n_theta; ++iu) {
        const double u = cth.nodes[iu];  // cos(theta)
        const double su = std::sqrt(std::max(0.0, 1.0 - u * u));
        for (int ip = 0; ip < n_phi; ++ip) {
          const double phi = dphi * ip;
          Vec kappa;
          kappa[0] = omega;
          kappa[1] = -r * su * std::cos(phi);
          kappa[2] = -r * su * std::sin(phi);
          kappa[3] = -r * u;
          cplx val = std::conj(fhat.eval(kappa)) * ghat.eval(kappa);
          if (weight) {
            Vec p;
            p[0] = omega;
            for (int i = 1; i < 4; ++i) p[i] = -kappa[i];
            val *= weight(omega, p);
          }
          ang.add(cth.weights[iu] * val);
          aang.add(cth.weights[iu] * std::abs(val));
        }
      }
      total.add(wr * ang.value());
      asum.add(std::abs(wr) * aang.value());
    }
  }
  if (abs_sum) *abs_sum = asum.value();
  return total.value();
}

TwoPointValue shell_d2(double m, const TestFunction& fhat, const TestFunction& ghat,
                       const NodeWeight& weight, const ShellGeometry& geom,
                       const QuadratureSettings& q) {
  if (!(m > 0)) throw DomainError("d=2 requires strictly positive mass");
  const double scale = std::max(0.5 * geom.r_char, 1e-8);
  const double p_cut = q.tail_factor * (geom.r_char + 2.0);
  const double t_cut = std::tanh(p_cut / scale);
  auto integrand = [&](double t) -> cplx {
    const double p = scale * std::atanh(t);
    const double jac = scale / (1.0 - t * t);
    const double omega = std::sqrt(p * p + m * m);
    Vec kappa;
    kappa[0] = omega;
    kappa[1] = -p;
    cplx val = std::conj(fhat.eval(kappa)) * ghat.eval(kappa);
    if (weight) {
      Vec pv;
      pv[0] = omega;
      pv[1] = p;
      val *= weight(omega, pv);
    }
    return val * (jac / (2.0 * omega * kTwoPi));
  };
  const AdaptiveResult res =
      adaptive_gauss(integrand, -t_cut, t_cut, 0.0, q.rel_tol, q.max_depth);
  // L1 scale for the convergence gate
  const QuadRule grid = tanh_fullline(128, scale);
  KahanSum asum;
  for (size_t i = 0; i < grid.nodes.size(); ++i) {
    if (std::abs(grid.nodes[i]) > p_cut) continue;
    const double p = grid.nodes[i];
    const double omega = std::sqrt(p * p + m * m);
    Vec kappa;
    kappa[0] = omega;
    kappa[1] = -p;
    double v = std::abs(std::conj(fhat.eval(kappa)) * ghat.eval(kappa));
    if (weight) {
      Vec pv;
      pv[0] = omega;
      pv[1] = p;
      v *= std::abs(weight(omega, pv));
    }
    asum.add(grid.weights[i] * v / (2.0 * omega * kTwoPi));
  }
  TwoPointValue out;
  out.value = res.value;
  out.abs_error = res.abs_error;
  const double gate = q.nonconv_rel * (std::abs(out.value) + 1e-3 * asum.value()) + 1e-300;
  if (out.abs_error > gate)
    throw NumericalError("momentum quadrature did not converge (d=2, m=" + format_g12(m) +
                         ", err=" + format_g12(out.abs_error) +
                         ", value=" + format_g12(std::abs(out.value)) + ")");
  return out;
}

TwoPointValue shell_any(const SpacetimeDim& dim, double m, const TestFunction& f,
                        const TestFunction& g, const NodeWeight& weight,
                        const QuadratureSettings& q) {
  if (f.dim != dim || g.dim != dim)
    throw DomainError("two-point arguments and model dimension disagree");
  if (m < 0) throw DomainError("negative mass");
  const TestFunction fhat = fourier_transform(f);
  const TestFunction ghat = fourier_transform(g);
  if (fhat.terms.empty() || ghat.terms.empty()) return {};
  const ShellGeometry geom = analyze(dim, fhat, ghat, q);
  if (dim.d == 2) return shell_d2(m, fhat, ghat, weight, geom, q);

  const int fine_angular =
      std::min(int(std::ceil(1.4 * geom.angular)) + 2, q.max_angular_order);
  double abs_fine = 0;
  const cplx fine = shell_pass(dim, m, fhat, ghat, weight, 2 * q.radial_nodes,
                               fine_angular, geom, q, &abs_fine);
  const cplx coarse =
      shell_pass(dim, m, fhat, ghat, weight, q.radial_nodes, geom.angular, geom, q, nullptr);
  TwoPointValue out;
  out.value = fine;
  out.abs_error = std::abs(fine - coarse);
  const double gate = q.nonconv_rel * (std::abs(out.value) + 1e-3 * abs_fine) + 1e-300;
  if (out.abs_error > gate)
    throw NumericalError("momentum quadrature did not converge (d=" + std::to_string(dim.d) +
                         ", m=" + format_g12(m) + ", radial=" + std::to_string(q.radial_nodes) +
                         ", angular=" + std::to_string(geom.angular) +
                         ", err=" + format_g12(out.abs_error) +
                         ", value=" + format_g12(std::abs(out.value)) + ")");
  return out;
}

}  // namespace

TwoPointValue w2_mass(SpacetimeDim d, double m, const TestFunction& f,
                      const TestFunction& g, const QuadratureSettings& q) {
  if (d.d == 2 && m == 0.0)
    throw DomainError("w2_mass: massless two-point function undefined in d=2");
  return shell_any(d, m, f, g, nullptr, q);
}

TwoPointValue shell_integral(SpacetimeDim d, double m, const TestFunction& f,
                             const TestFunction& g,
                             const std::function<double(double, const Vec&)>& weight,
                             const QuadratureSettings& q) {
  return shell_any(d, m, f, g, weight, q);
}

TwoPointValue w2(const ModelSpec& model, const TestFunction& f, const TestFunction& g,
                 const QuadratureSettings& q) {
  model.validate();
  const auto& meas = model.measure;
  if (meas.atoms.size() == 1 && !meas.density) {
    TwoPointValue v = w2_mass(model.dim, meas.atoms[0].mass, f, g, q);
    v.value *= meas.atoms[0].weight;
    v.abs_error *= meas.atoms[0].weight;
    return v;
  }
  auto kernel = [&](double m) -> KernelValue {
    const TwoPointValue v = w2_mass(model.dim, m, f, g, q);
    return {v.value, v.abs_error};
  };
  const MassIntegral mi = integrate_mass_with_error(meas, kernel);
  TwoPointValue out;
  out.value = mi.value;
  out.abs_error = mi.abs_error;
  return out;
}

double commutator_sigma(const ModelSpec& model, const TestFunction& f,
                        const TestFunction& g, const QuadratureSettings& q) {
  if (!is_real(f) || !is_real(g))
    throw DomainError("commutator_sigma requires real-valued test functions");
  return 2.0 * w2(model, f, g, q).value.imag();
}

double symmetric_mu(const ModelSpec& model, const TestFunction& f, const TestFunction& g,
                    const QuadratureSettings& q) {
  if (!is_real(f) || !is_real(g))
    throw DomainError("symmetric_mu requires real-valued test functions");
  return w2(model, f, g, q).value.real();
}

cplx npoint_wick(const ModelSpec& model, const std::vector<TestFunction>& fs,
                 const QuadratureSettings& q, int max_n) {
  const int n = int(fs.size());
  if (n == 0) return 1.0;
  if (n % 2 == 1) return 0.0;
  if (n > max_n)
    throw DomainError("npoint_wick: n = " + std::to_string(n) + " exceeds the pairing cap " +
                      std::to_string(max_n));
  std::vector<std::vector<cplx>> wv(n, std::vector<cplx>(n));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) wv[i][j] = w2(model, fs[i], fs[j], q).value;
  // sum over perfect pairings, first free index paired in turn
  std::vector<int> avail(n);
  for (int i = 0; i < n; ++i) avail[i] = i;
  std::function<cplx(std::vector<int>&)> rec = [&](std::vector<int>& idx) -> cplx {
    if (idx.empty()) return 1.0;
    const int i = idx.front();
    cplx sum = 0.0;
    for (size_t k = 1; k < idx.size(); ++k) {
      const int j = idx[k];
      std::vector<int> rest;
      rest.reserve(idx.size() - 2);
      for (size_t t = 1; t < idx.size(); ++t)
        if (t != k) rest.push_back(idx[t]);
      sum += wv[i][j] * rec(rest);
    }
    return sum;
  };
  return rec(avail);
}

void WeylWord::validate() const {
  for (const auto& g : factors)
    if (!is_real(g)) throw DomainError("Weyl word arguments must be real-valued");
}

cplx weyl_correlator(const ModelSpec& model, const WeylWord& word,
                     const QuadratureSettings& q) {
  word.validate();
  const int n = int(word.factors.size());
  if (n == 0) return 1.0;
  double phase = 0.0;
  for (int j = 0; j < n; ++j)
    for (int k = j + 1; k < n; ++k)
      phase += commutator_sigma(model, word.factors[j], word.factors[k], q);
  TestFunction total = word.factors[0];
  for (int j = 1; j < n; ++j) total = total + word.factors[j];
  const double mu = symmetric_mu(model, total, total, q);
  return std::exp(cplx(0.0, -0.5 * phase)) * std::exp(-0.5 * mu);
}

double weyl_vector_distance(const ModelSpec& model, const TestFunction& ga,
                            const TestFunction& g, const QuadratureSettings& q) {
  const double sig = commutator_sigma(model, ga, g, q);
  const TestFunction diff = ga + (-1.0 * g);
  const double mu = symmetric_mu(model, diff, diff, q);
  const cplx overlap = std::exp(cplx(0.0, 0.5 * sig)) * std::exp(-0.5 * mu);
  const double d2 = 2.0 - 2.0 * overlap.real();
  return std::sqrt(std::max(0.0, d2));
}

double angular_mod2_integral(SpacetimeDim dim, double m, const TestFunction& fhat, double r,
                             int angular_order) {
  const int d = dim.d;
  const double omega = std::sqrt(r * r + m * m);
  KahanSum sum;
  if (d == 2) {
    for (double s : {-1.0, 1.0}) {
      Vec kappa;
      kappa[0] = omega;
      kappa[1] = -s * r;
      sum.add(std::norm(fhat.eval(kappa)));
    }
  } else if (d == 3) {
    const int n_phi = std::max(16, 2 * angular_order + 1);
    const double dphi = kTwoPi / n_phi;
    for (int ip = 0; ip < n_phi; ++ip) {
      const double phi = dphi * ip;
      Vec kappa;
      kappa[0] = omega;
      kappa[1] = -r * std::cos(phi);
      kappa[2] = -r * std::sin(phi);
      sum.add(dphi * std::norm(fhat.eval(kappa)));
    }
  } else {
    const int n_theta = std::max(4, angular_order);
    const int n_phi = 2 * n_theta + 1;
    const QuadRule& cth = gauss_legendre(n_theta);
    const double dphi = kTwoPi / n_phi;
    for (int iu = 0; iu < n_theta; ++iu) {
      const double u = cth.nodes[iu];
      const double su = std::sqrt(std::max(0.0, 1.0 - u * u));
      for (int ip = 0; ip < n_phi; ++ip) {
        const double phi = dphi * ip;
        Vec kappa;
        kappa[0] = omega;
        kappa[1] = -r * su * std::cos(phi);
        kappa[2] = -r * su * std::sin(phi);
        kappa[3] = -r * u;
        sum.add(cth.weights[iu] * dphi * std::norm(fhat.eval(kappa)));
      }
    }
  }
  return sum.value();
}

int suggested_angular_order(SpacetimeDim d, const TestFunction& fhat,
                            const TestFunction& ghat, const QuadratureSettings& q) {
  return analyze(d, fhat, ghat, q).angular;
}

double momentum_reach(SpacetimeDim d, const TestFunction& fhat, const QuadratureSettings& q) {
  return analyze(d, fhat, fhat, q).r_char;
}

}  // namespace scalim
