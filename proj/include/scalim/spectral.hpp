#ifndef SCALIM_SPECTRAL_HPP_
#define SCALIM_SPECTRAL_HPP_

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "scalim/common.hpp"
#include "scalim/vecmat.hpp"

namespace scalim {

struct MassAtom {
  double mass = 0.0;
  double weight = 1.0;
};

// Serializable density descriptor on [lo, hi]:
//   rho(m) = scale * m^{exponent_2a}
//            * (1 + eps * sin(2 pi ln(m/m_ref) / ln tau))   [if log_periodic]
//            * 1 / (1 + exp((m - cutoff_mass)/cutoff_width)) [if cutoff]
struct DensityDescriptor {
  double lo = 0.0;
  double hi = 1.0;
  double exponent_2a = 0.0;
  double scale = 1.0;
  bool log_periodic = false;
  double eps = 0.0;
  double tau = 2.0;
  double m_ref = 1.0;
  bool cutoff = false;
  double cutoff_mass = 0.0;
  double cutoff_width = 1.0;
  int nodes = 128;      // Gauss-Legendre; the error estimate uses nodes/2
  bool log_axis = false;  // integrate in ln m (requires lo > 0)

  double eval(double m) const;
};

// Kallen-Lehmann measure: point masses plus an optional continuous part.
struct SpectralMeasure {
  SpacetimeDim dim{4};
  std::vector<MassAtom> atoms;
  std::optional<DensityDescriptor> density;

  void validate() const;
  double total_mass() const;  // atoms' weights + integral of the density
};

struct ModelSpec {
  SpacetimeDim dim{4};
  SpectralMeasure measure;
  std::string label;

  void validate() const;
};

ModelSpec free_field(SpacetimeDim d, double mass);

// Power-law density with log-periodic modulation, engineered so that
// scaled correlators sampled along geometric lambda sequences with ratio
// 1/tau depend on the sequence phase.
ModelSpec log_periodic_gff(SpacetimeDim d, double a, double eps, double tau,
                           double m_ref, double lo, double hi);

struct MassIntegral {
  cplx value{};
  double abs_error = 0.0;
};

// sum_j w_j K(m_j) + \int rho(m) K(m) dm
MassIntegral integrate_mass(const SpectralMeasure& measure,
                            const std::function<cplx(double)>& kernel);

// Same integral for kernels that carry their own error bar; the kernel
// errors enter the estimate weighted by the measure.
struct KernelValue {
  cplx value{};
  double abs_error = 0.0;
};
MassIntegral integrate_mass_with_error(const SpectralMeasure& measure,
                                       const std::function<KernelValue(double)>& kernel);

}  // namespace scalim

#endif  // SCALIM_SPECTRAL_HPP_
