#include "scalim/spectral.hpp"

#include <cmath>

#include "scalim/quadrature.hpp"

namespace scalim {

double DensityDescriptor::eval(double m) const {
  if (m <= 0.0 && exponent_2a < 0.0) throw DomainError("density evaluated at m <= 0 with negative exponent");
  double v = scale * std::pow(m, exponent_2a);
  if (log_periodic) v *= 1.0 + eps * std::sin(kTwoPi * std::log(m / m_ref) / std::log(tau));
  if (cutoff) v /= 1.0 + std::exp((m - cutoff_mass) / cutoff_width);
  return v;
}

void SpectralMeasure::validate() const {
  for (const auto& a : atoms) {
    if (a.mass < 0) throw DomainError("spectral atom with negative mass");
    if (!(a.weight > 0)) throw DomainError("spectral atom with non-positive weight");
    if (dim.d == 2 && a.mass == 0.0)
      throw DomainError("massless atom in d=2: the massless scalar does not exist as a Wightman field in two dimensions");
  }
  if (density) {
    const auto& rho = *density;
    if (!(rho.lo >= 0 && rho.lo < rho.hi)) throw DomainError("density support must satisfy 0 <= lo < hi");
    if (dim.d == 2 && rho.lo <= 0.0)
      throw DomainError("density support must stay away from m=0 in d=2");
    if (rho.log_periodic && !(rho.eps > -1 && rho.eps < 1))
      throw DomainError("log-periodic amplitude must lie in (-1, 1)");
    if (rho.log_periodic && !(rho.tau > 1)) throw DomainError("log-periodic period base must exceed 1");
    if (rho.nodes < 4) throw DomainError("density quadrature needs at least 4 nodes");
    if (rho.log_axis && rho.lo <= 0) throw DomainError("log-axis mass quadrature requires lo > 0");
    // spot-check nonnegativity at the quadrature nodes
    const QuadRule r = rho.log_axis
                           ? gauss_legendre_on(rho.nodes, std::log(rho.lo), std::log(rho.hi))
                           : gauss_legendre_on(rho.nodes, rho.lo, rho.hi);
    for (double u : r.nodes) {
      const double m = rho.log_axis ? std::exp(u) : u;
      if (rho.eval(m) < 0) throw DomainError("density negative at m = " + format_g12(m));
    }
  }
  if (atoms.empty() && !density) throw DomainError("spectral measure is empty");
}

double SpectralMeasure::total_mass() const {
  double t = 0;
  for (const auto& a : atoms) t += a.weight;
  if (density) {
    auto one = [](double) -> cplx { return 1.0; };
    SpectralMeasure cont;
    cont.dim = dim;
    cont.density = density;
    t += integrate_mass(cont, one).value.real();
  }
  return t;
}

void ModelSpec::validate() const {
  measure.validate();
  if (measure.dim != dim) throw DomainError("model and measure dimensions disagree");
}

ModelSpec free_field(SpacetimeDim d, double mass) {
  if (mass < 0) throw DomainError("free field mass must be nonnegative");
  if (d.d == 2 && mass == 0.0)
    throw DomainError("free_field(2, 0): the massless scalar does not exist as a Wightman field in two dimensions");
  ModelSpec m;
  m.dim = d;
  m.measure.dim = d;
  m.measure.atoms.push_back({mass, 1.0});
  m.label = "free_m" + format_g12(mass) + "_d" + std::to_string(d.d);
  m.validate();
  return m;
}

ModelSpec log_periodic_gff(SpacetimeDim d, double a, double eps, double tau,
                           double m_ref, double lo, double hi) {
  if (!(eps >= 0 && eps < 1)) throw DomainError("log_periodic_gff: eps must lie in [0, 1)");
  if (!(tau > 1)) throw DomainError("log_periodic_gff: tau must exceed 1");
  if (!(m_ref > 0)) throw DomainError("log_periodic_gff: reference mass must be positive");
  if (!(lo >= 0 && lo < hi)) throw DomainError("log_periodic_gff: need 0 <= lo < hi");
  ModelSpec m;
  m.dim = d;
  m.measure.dim = d;
  DensityDescriptor rho;
  rho.lo = lo;
  rho.hi = hi;
  rho.exponent_2a = 2 * a;
  rho.log_periodic = eps > 0;
  rho.eps = eps;
  rho.tau = tau;
  rho.m_ref = m_ref;
  rho.log_axis = lo > 0 && hi / lo > 50.0;
  rho.nodes = rho.log_axis ? 256 : 128;
  m.measure.density = rho;
  m.label = "logper_gff_d" + std::to_string(d.d);
  m.validate();
  return m;
}

MassIntegral integrate_mass_with_error(const SpectralMeasure& measure,
                                       const std::function<KernelValue(double)>& kernel) {
  MassIntegral out;
  KahanSumC sum;
  KahanSum kerr;
  auto checked = [&kernel](double m) {
    const KernelValue v = kernel(m);
    if (!std::isfinite(v.value.real()) || !std::isfinite(v.value.imag()))
      throw NumericalError("mass kernel non-finite at m = " + format_g12(m));
    return v;
  };
  for (const auto& a : measure.atoms) {
    const KernelValue v = checked(a.mass);
    sum.add(double(a.weight) * v.value);
    kerr.add(a.weight * v.abs_error);
  }
  if (measure.density) {
    const auto& rho = *measure.density;
    auto integrate = [&](int n, bool track) {
      const QuadRule r = rho.log_axis
                             ? gauss_legendre_on(n, std::log(rho.lo), std::log(rho.hi))
                             : gauss_legendre_on(n, rho.lo, rho.hi);
      KahanSumC s;
      for (size_t i = 0; i < r.nodes.size(); ++i) {
        const double m = rho.log_axis ? std::exp(r.nodes[i]) : r.nodes[i];
        const double jac = rho.log_axis ? m : 1.0;
        const KernelValue v = checked(m);
        const double w = r.weights[i] * jac * rho.eval(m);
        s.add(w * v.value);
        if (track) kerr.add(std::abs(w) * v.abs_error);
      }
      return s.value();
    };
    const cplx fine = integrate(rho.nodes, true);
    const cplx coarse = integrate(rho.nodes / 2, false);
    sum.add(fine);
    out.abs_error += std::abs(fine - coarse);
  }
  out.value = sum.value();
  out.abs_error += kerr.value();
  return out;
}

MassIntegral integrate_mass(const SpectralMeasure& measure,
                            const std::function<cplx(double)>& kernel) {
  return integrate_mass_with_error(
      measure, [&kernel](double m) { return KernelValue{kernel(m), 0.0}; });
}

}  // namespace scalim
