#ifndef SCALIM_SCALINGLIMIT_HPP_
#define SCALIM_SCALINGLIMIT_HPP_

#include <string>
#include <utility>
#include <vector>

#include "scalim/rgflow.hpp"

namespace scalim {

// Geometric lambda sequence lambda_k = lambda0 * ratio^{k + phase}.
struct LambdaSequence {
  double lambda0 = 0.1;
  double ratio = 0.5;
  int length = 8;
  double phase = 0.0;

  void validate() const;
  std::vector<double> values() const;
  std::string id() const;
};

struct LimitEstimate {
  std::vector<cplx> raw;
  std::vector<double> raw_errors;
  cplx limit{};
  double error = 0.0;
  bool converged = false;
};

// Aitken-accelerated limit of a finite sequence. The convergence flag asks
// the last three accelerated values to agree within tau_conv (relative),
// and the reported error always covers |v_last - limit| / 3.
LimitEstimate extrapolate(const std::vector<cplx>& values, const std::vector<double>& errors,
                          double tau_conv);

LimitEstimate limit_correlator(const ModelSpec& model, const ScalingOrbit& f,
                               const ScalingOrbit& g, const LambdaSequence& seq,
                               const QuadratureSettings& q = {}, double tau_conv = 1e-4,
                               int threads = 1);

struct Tolerances {
  double tau_conv = 1e-4;  // relative convergence of the accelerated tail
  double tau_triv = 1e-3;  // triviality threshold, relative to the lambda=1 magnitude
  double tau_deg = 1e-2;   // inter-sequence gap threshold, relative to the limit scale
};

enum class LimitClass { Classical, Quantum, Degenerate, Inconclusive };
const char* to_string(LimitClass c);

struct EvidenceRow {
  int probe = 0;
  int sequence = 0;
  LimitEstimate estimate;
  double commutator_limit = 0.0;   // 2 Im of the limit (real probe bases)
  double lambda1_magnitude = 0.0;  // |scaled correlator| at lambda = 1
};

struct Verdict {
  LimitClass cls = LimitClass::Inconclusive;
  std::vector<EvidenceRow> evidence;
  Tolerances tol;
  std::string rationale;
  int n_probes = 0;
  int n_sequences = 0;
};

using ProbePair = std::pair<ScalingOrbit, ScalingOrbit>;

// Decision rule: Inconclusive if any probe fails to converge; Degenerate if
// some probe's limits across sequences differ by more than tau_deg relative
// to the limit scale; Classical if every limit and commutator limit is
// below tau_triv relative to its lambda=1 magnitude; Quantum otherwise.
Verdict classify(const ModelSpec& model, const std::vector<ProbePair>& probes,
                 const std::vector<LambdaSequence>& sequences,
                 const QuadratureSettings& q = {}, const Tolerances& tol = {},
                 int threads = 1);

struct MasslessFit {
  double z = 1.0;
  double residual = 0.0;  // max |L_i - z W0_i| / max |z W0_i|
};

// Fits one positive constant z with limits ~ z * W0(f_i, g_i) against the
// massless free field in the model's dimension.
MasslessFit compare_to_massless(const ModelSpec& model, const std::vector<ProbePair>& probes,
                                const std::vector<cplx>& limits,
                                const QuadratureSettings& q = {});

struct DilationRow {
  double mu = 1.0;
  cplx base_limit{};
  cplx scaled_limit{};
  double rel_dev = 0.0;  // |L_mu - mu^{d+2} L| / |mu^{d+2} L|
};

struct DilationReport {
  std::vector<DilationRow> rows;
  double max_rel_dev = 0.0;
  bool converged = false;
};

// Limits of orbits built from mu-scaled base functions must follow the
// mu^{d+2} covariance law forced by f_lambda(x) = f(x/lambda).
DilationReport dilation_check(const ModelSpec& model, const ScalingOrbit& f,
                              const ScalingOrbit& g, const LambdaSequence& seq,
                              const std::vector<double>& mus = {0.5, 2.0},
                              const QuadratureSettings& q = {}, double tau_conv = 1e-4,
                              int threads = 1);

struct TranslationFamily {
  std::vector<double> ts;
  std::vector<cplx> limits;
  bool all_converged = true;
  double max_error = 0.0;
};

// Limits of (f, g translated by t e_0) along one sequence; the probe family
// feeding the spectrum-condition fit.
TranslationFamily limit_translation_family(const ModelSpec& model, const ScalingOrbit& f,
                                           const ScalingOrbit& g, const std::vector<double>& ts,
                                           const LambdaSequence& seq,
                                           const QuadratureSettings& q = {},
                                           double tau_conv = 1e-4, int threads = 1);

struct SpectrumReport {
  bool inconclusive = false;
  double condition_number = 0.0;
  double residual = 0.0;    // relative l2 misfit of the nonnegative fit
  double min_weight = 0.0;  // most negative unconstrained weight (diagnostic)
  double max_weight = 0.0;
  std::vector<double> omegas;
  std::vector<double> weights;  // nonnegative fitted spectral weights

  bool passed(double tol) const {
    return !inconclusive && residual <= tol && min_weight >= -0.05 * std::max(1e-300, max_weight);
  }
};

// Fits L(t) ~ sum_j c_j e^{i omega_j t} with c_j >= 0 on a nonnegative
// frequency grid (positive-energy mode integral).
SpectrumReport spectrum_condition_check(const std::vector<double>& ts,
                                        const std::vector<cplx>& limits, double omega_max,
                                        int n_omega = 64);

}  // namespace scalim

#endif  // SCALIM_SCALINGLIMIT_HPP_
