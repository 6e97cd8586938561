#include "scalim/scalinglimit.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Dense>

#include "scalim/parallel.hpp"

namespace scalim {

void LambdaSequence::validate() const {
  if (!(lambda0 > 0)) throw DomainError("lambda sequence needs lambda0 > 0");
  if (!(ratio > 0 && ratio < 1)) throw DomainError("lambda sequence needs ratio in (0,1)");
  if (length < 6) throw DomainError("lambda sequence needs length >= 6");
  if (!(phase >= 0 && phase < 1)) throw DomainError("lambda sequence needs phase in [0,1)");
}

std::vector<double> LambdaSequence::values() const {
  validate();
  std::vector<double> v(length);
  for (int k = 0; k < length; ++k) v[k] = lambda0 * std::pow(ratio, k + phase);
  return v;
}

std::string LambdaSequence::id() const {
  return "l0=" + format_g12(lambda0) + ",q=" + format_g12(ratio) +
         ",K=" + std::to_string(length) + ",phi=" + format_g12(phase);
}

const char* to_string(LimitClass c) {
  switch (c) {
    case LimitClass::Classical: return "Classical";
    case LimitClass::Quantum: return "Quantum";
    case LimitClass::Degenerate: return "Degenerate";
    default: return "Inconclusive";
  }
}

LimitEstimate extrapolate(const std::vector<cplx>& values, const std::vector<double>& errors,
                          double tau_conv) {
  if (values.empty()) throw DomainError("extrapolate: empty sequence");
  LimitEstimate est;
  est.raw = values;
  est.raw_errors = errors;

  double vmax = 0.0, qerr = 0.0;
  for (const auto& v : values) vmax = std::max(vmax, std::abs(v));
  for (double e : errors) qerr = std::max(qerr, e);

  const size_t n = values.size();
  if (n < 3) {
    est.limit = values.back();
    est.error = qerr + (n == 2 ? std::abs(values[1] - values[0]) : 0.0);
    est.converged = false;
    return est;
  }
  // one Aitken pass; tiny second differences fall back to the raw value
  std::vector<cplx> accel(n - 2);
  for (size_t k = 0; k + 2 < n; ++k) {
    const cplx d2 = values[k + 2] - 2.0 * values[k + 1] + values[k];
    const cplx dlast = values[k + 2] - values[k + 1];
    accel[k] = std::abs(d2) > 1e-14 * std::max(vmax, 1e-300)
                   ? values[k + 2] - dlast * dlast / d2
                   : values[k + 2];
  }
  est.limit = accel.back();
  double spread = 0.0;
  if (accel.size() >= 3) {
    spread = std::max(std::abs(accel[accel.size() - 1] - accel[accel.size() - 2]),
                      std::abs(accel[accel.size() - 2] - accel[accel.size() - 3]));
  } else {
    spread = std::abs(accel.back() - accel.front());
  }
  const double raw_tail = std::abs(values.back() - est.limit);
  est.error = std::max({spread, raw_tail / 3.0, qerr});
  const double scale = std::max(std::abs(est.limit), 1e-3 * vmax);
  est.converged = accel.size() >= 3 && spread <= tau_conv * std::max(scale, 1e-300);
  return est;
}

LimitEstimate limit_correlator(const ModelSpec& model, const ScalingOrbit& f,
                               const ScalingOrbit& g, const LambdaSequence& seq,
                               const QuadratureSettings& q, double tau_conv, int threads) {
  const std::vector<double> lambdas = seq.values();
  const ScalingOrbit ff{f.base, materialize_renorm(model, f.renorm, lambdas, q, threads),
                        f.region};
  const ScalingOrbit gg{g.base, materialize_renorm(model, g.renorm, lambdas, q, threads),
                        g.region};
  std::vector<cplx> vals(lambdas.size());
  std::vector<double> errs(lambdas.size());
  std::vector<std::string> failures(lambdas.size());
  parallel_for(lambdas.size(), threads, [&](size_t i) {
    try {
      const TwoPointValue v = scaled_w2(model, ff, gg, lambdas[i], q);
      vals[i] = v.value;
      errs[i] = v.abs_error;
    } catch (const NumericalError& e) {
      vals[i] = cplx(std::nan(""), std::nan(""));
      errs[i] = std::numeric_limits<double>::infinity();
      failures[i] = e.what();
    }
  });
  size_t valid = 0;
  while (valid < vals.size() && std::isfinite(vals[valid].real())) ++valid;
  if (valid == 0)
    throw NumericalError("limit_correlator: every sequence point failed; first: " + failures[0]);
  if (valid < vals.size()) {
    LimitEstimate est = extrapolate({vals.begin(), vals.begin() + valid},
                                    {errs.begin(), errs.begin() + valid}, tau_conv);
    est.raw = vals;
    est.raw_errors = errs;
    est.converged = false;
    return est;
  }
  return extrapolate(vals, errs, tau_conv);
}

namespace {

struct ProbeEvaluation {
  std::vector<LimitEstimate> per_seq;
  double lambda1_magnitude = 0.0;
  double lambda1_commutator = 0.0;
};

}  // namespace

Verdict classify(const ModelSpec& model, const std::vector<ProbePair>& probes,
                 const std::vector<LambdaSequence>& sequences, const QuadratureSettings& q,
                 const Tolerances& tol, int threads) {
  if (probes.empty()) throw DomainError("classify needs at least one probe pair");
  if (sequences.empty()) throw DomainError("classify needs at least one lambda sequence");
  for (const auto& s : sequences) s.validate();
  for (const auto& p : probes)
    if (!is_real(p.first.base) || !is_real(p.second.base))
      throw DomainError("classify probes must have real-valued bases");

  std::vector<double> all_lambdas{1.0};
  for (const auto& s : sequences)
    for (double l : s.values()) all_lambdas.push_back(l);

  std::vector<ProbeEvaluation> evals(probes.size());
  for (size_t ip = 0; ip < probes.size(); ++ip) {
    const ScalingOrbit f{probes[ip].first.base,
                         materialize_renorm(model, probes[ip].first.renorm, all_lambdas, q, threads),
                         probes[ip].first.region};
    const ScalingOrbit g{probes[ip].second.base,
                         materialize_renorm(model, probes[ip].second.renorm, all_lambdas, q, threads),
                         probes[ip].second.region};
    const TwoPointValue at_one = scaled_w2(model, f, g, 1.0, q);
    evals[ip].lambda1_magnitude = std::abs(at_one.value);
    evals[ip].lambda1_commutator = 2.0 * at_one.value.imag();
    for (const auto& s : sequences)
      evals[ip].per_seq.push_back(limit_correlator(model, f, g, s, q, tol.tau_conv, threads));
  }

  bool any_commutator = false;
  for (const auto& e : evals)
    if (std::abs(e.lambda1_commutator) > 1e-10 * std::max(e.lambda1_magnitude, 1e-300))
      any_commutator = true;
  if (!any_commutator)
    throw DomainError("classify needs at least one probe pair with nonvanishing commutator");

  Verdict v;
  v.tol = tol;
  v.n_probes = int(probes.size());
  v.n_sequences = int(sequences.size());
  std::ostringstream why;
  for (size_t ip = 0; ip < probes.size(); ++ip)
    for (size_t is = 0; is < sequences.size(); ++is) {
      EvidenceRow row;
      row.probe = int(ip);
      row.sequence = int(is);
      row.estimate = evals[ip].per_seq[is];
      row.commutator_limit = 2.0 * row.estimate.limit.imag();
      row.lambda1_magnitude = evals[ip].lambda1_magnitude;
      v.evidence.push_back(std::move(row));
    }

  for (size_t ip = 0; ip < probes.size(); ++ip)
    for (size_t is = 0; is < sequences.size(); ++is)
      if (!evals[ip].per_seq[is].converged) {
        v.cls = LimitClass::Inconclusive;
        why << "probe " << ip << " did not converge along sequence " << is << "; ";
        v.rationale = why.str();
        return v;
      }

  // sequence dependence first
  for (size_t ip = 0; ip < probes.size(); ++ip) {
    double gap = 0.0, mag = 0.0;
    for (size_t a = 0; a < sequences.size(); ++a) {
      mag = std::max(mag, std::abs(evals[ip].per_seq[a].limit));
      for (size_t b = a + 1; b < sequences.size(); ++b)
        gap = std::max(gap,
                       std::abs(evals[ip].per_seq[a].limit - evals[ip].per_seq[b].limit));
    }
    const double scale = std::max(mag, tol.tau_triv * evals[ip].lambda1_magnitude);
    if (gap > tol.tau_deg * scale) {
      v.cls = LimitClass::Degenerate;
      why << "probe " << ip << " limits differ across sequences by " << format_g12(gap)
          << " against scale " << format_g12(scale) << "; ";
      v.rationale = why.str();
      return v;
    }
  }

  bool all_trivial = true;
  for (size_t ip = 0; ip < probes.size(); ++ip) {
    const double floor = tol.tau_triv * evals[ip].lambda1_magnitude;
    for (const auto& est : evals[ip].per_seq) {
      if (std::abs(est.limit) > floor) all_trivial = false;
      if (std::abs(2.0 * est.limit.imag()) > floor) all_trivial = false;
    }
  }
  if (all_trivial) {
    v.cls = LimitClass::Classical;
    why << "all limit two-point values and commutators below tau_triv relative to their "
           "lambda=1 magnitudes; ";
  } else {
    v.cls = LimitClass::Quantum;
    why << "nontrivial sequence-independent limits with nonvanishing commutator; ";
  }
  v.rationale = why.str();
  return v;
}

MasslessFit compare_to_massless(const ModelSpec& model, const std::vector<ProbePair>& probes,
                                const std::vector<cplx>& limits, const QuadratureSettings& q) {
  if (probes.size() != limits.size() || probes.empty())
    throw DomainError("compare_to_massless needs matching probe and limit lists");
  if (model.dim.d < 3)
    throw DomainError("no massless reference field exists in d=2");
  const ModelSpec massless = free_field(model.dim, 0.0);
  std::vector<cplx> w0(probes.size());
  double denom = 0.0;
  cplx cross = 0.0;
  for (size_t i = 0; i < probes.size(); ++i) {
    w0[i] = w2(massless, probes[i].first.base, probes[i].second.base, q).value;
    denom += std::norm(w0[i]);
    cross += std::conj(w0[i]) * limits[i];
  }
  double w0max = 0.0;
  for (const auto& w : w0) w0max = std::max(w0max, std::abs(w));
  if (!(denom > 1e-24 * w0max * w0max) || w0max == 0.0)
    throw NumericalError("compare_to_massless: degenerate fit, massless values vanish");
  MasslessFit fit;
  fit.z = cross.real() / denom;
  if (!(fit.z > 0)) throw NumericalError("compare_to_massless: fitted constant is not positive");
  double resid = 0.0;
  for (size_t i = 0; i < probes.size(); ++i)
    resid = std::max(resid, std::abs(limits[i] - fit.z * w0[i]));
  fit.residual = resid / (fit.z * w0max);
  return fit;
}

DilationReport dilation_check(const ModelSpec& model, const ScalingOrbit& f,
                              const ScalingOrbit& g, const LambdaSequence& seq,
                              const std::vector<double>& mus, const QuadratureSettings& q,
                              double tau_conv, int threads) {
  const int d = model.dim.d;
  DilationReport rep;
  const LimitEstimate base = limit_correlator(model, f, g, seq, q, tau_conv, threads);
  rep.converged = base.converged;
  for (double mu : mus) {
    if (!(mu > 0)) throw DomainError("dilation_check needs mu > 0");
    const ScalingOrbit fm{scale(f.base, mu), f.renorm, f.region.scaled_about_origin(mu)};
    const ScalingOrbit gm{scale(g.base, mu), g.renorm, g.region.scaled_about_origin(mu)};
    const LimitEstimate lm = limit_correlator(model, fm, gm, seq, q, tau_conv, threads);
    rep.converged = rep.converged && lm.converged;
    DilationRow row;
    row.mu = mu;
    row.base_limit = base.limit;
    row.scaled_limit = lm.limit;
    const cplx expect = std::pow(mu, d + 2) * base.limit;
    row.rel_dev = std::abs(lm.limit - expect) / std::max(std::abs(expect), 1e-300);
    rep.max_rel_dev = std::max(rep.max_rel_dev, row.rel_dev);
    rep.rows.push_back(row);
  }
  return rep;
}

TranslationFamily limit_translation_family(const ModelSpec& model, const ScalingOrbit& f,
                                           const ScalingOrbit& g, const std::vector<double>& ts,
                                           const LambdaSequence& seq, const QuadratureSettings& q,
                                           double tau_conv, int threads) {
  TranslationFamily fam;
  fam.ts = ts;
  fam.limits.resize(ts.size());
  const std::vector<double> lambdas = seq.values();
  const ScalingOrbit ff{f.base, materialize_renorm(model, f.renorm, lambdas, q, threads), f.region};
  const ScalingOrbit g0{g.base, materialize_renorm(model, g.renorm, lambdas, q, threads), g.region};
  std::vector<LimitEstimate> ests(ts.size());
  parallel_for(ts.size(), threads, [&](size_t i) {
    Vec shift;
    shift[0] = ts[i];
    ScalingOrbit gt = g0;
    gt.base = translate(g0.base, shift);
    gt.region.center = gt.region.center + shift;
    ests[i] = limit_correlator(model, ff, gt, seq, q, tau_conv, 1);
  });
  for (size_t i = 0; i < ts.size(); ++i) {
    fam.limits[i] = ests[i].limit;
    fam.all_converged = fam.all_converged && ests[i].converged;
    fam.max_error = std::max(fam.max_error, ests[i].error);
  }
  return fam;
}

namespace {

// Lawson-Hanson nonnegative least squares.
Eigen::VectorXd nnls(const Eigen::MatrixXd& e, const Eigen::VectorXd& y, double* cond_out) {
  const int n = int(e.cols());
  Eigen::VectorXd c = Eigen::VectorXd::Zero(n);
  std::vector<bool> passive(n, false);
  const double tol = 1e-12 * e.colwise().norm().maxCoeff() * y.norm();
  Eigen::VectorXd w = e.transpose() * (y - e * c);
  int outer = 0;
  while (outer++ < 3 * n) {
    int best = -1;
    double bestw = tol;
    for (int j = 0; j < n; ++j)
      if (!passive[j] && w[j] > bestw) {
        bestw = w[j];
        best = j;
      }
    if (best < 0) break;
    passive[best] = true;
    for (int inner = 0; inner < 3 * n; ++inner) {
      std::vector<int> idx;
      for (int j = 0; j < n; ++j)
        if (passive[j]) idx.push_back(j);
      Eigen::MatrixXd ep(e.rows(), idx.size());
      for (size_t k = 0; k < idx.size(); ++k) ep.col(k) = e.col(idx[k]);
      const Eigen::VectorXd z = ep.colPivHouseholderQr().solve(y);
      bool feasible = true;
      for (int k = 0; k < z.size(); ++k)
        if (z[k] <= 0) feasible = false;
      if (feasible) {
        c.setZero();
        for (size_t k = 0; k < idx.size(); ++k) c[idx[k]] = z[k];
        break;
      }
      double alpha = 1.0;
      for (size_t k = 0; k < idx.size(); ++k)
        if (z[k] <= 0) {
          const double ck = c[idx[k]];
          alpha = std::min(alpha, ck / (ck - z[k]));
        }
      for (size_t k = 0; k < idx.size(); ++k) {
        c[idx[k]] += alpha * (z[k] - c[idx[k]]);
        if (c[idx[k]] <= 1e-14) {
          c[idx[k]] = 0.0;
          passive[idx[k]] = false;
        }
      }
    }
    w = e.transpose() * (y - e * c);
  }
  if (cond_out) {
    std::vector<int> idx;
    for (int j = 0; j < n; ++j)
      if (passive[j]) idx.push_back(j);
    if (idx.empty()) {
      *cond_out = 1.0;
    } else {
      Eigen::MatrixXd ep(e.rows(), idx.size());
      for (size_t k = 0; k < idx.size(); ++k) ep.col(k) = e.col(idx[k]);
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(ep);
      const auto& sv = svd.singularValues();
      *cond_out = sv[sv.size() - 1] > 0 ? sv[0] / sv[sv.size() - 1] : 1e300;
    }
  }
  return c;
}

}  // namespace

SpectrumReport spectrum_condition_check(const std::vector<double>& ts,
                                        const std::vector<cplx>& limits, double omega_max,
                                        int n_omega) {
  if (ts.size() != limits.size() || ts.size() < 5)
    throw DomainError("spectrum check needs matching t/limit lists with >= 5 points");
  if (!(omega_max > 0) || n_omega < 4) throw DomainError("spectrum check needs a frequency grid");
  const int m = int(ts.size());
  Eigen::MatrixXd e(2 * m, n_omega);
  Eigen::VectorXd y(2 * m);
  SpectrumReport rep;
  rep.omegas.resize(n_omega);
  for (int j = 0; j < n_omega; ++j) rep.omegas[j] = (j + 0.5) * omega_max / n_omega;
  for (int i = 0; i < m; ++i) {
    y[2 * i] = limits[i].real();
    y[2 * i + 1] = limits[i].imag();
    for (int j = 0; j < n_omega; ++j) {
      e(2 * i, j) = std::cos(rep.omegas[j] * ts[i]);
      e(2 * i + 1, j) = std::sin(rep.omegas[j] * ts[i]);
    }
  }
  double cond = 1.0;
  const Eigen::VectorXd c = nnls(e, y, &cond);
  rep.condition_number = cond;
  rep.inconclusive = cond > 1e12;
  rep.weights.assign(c.data(), c.data() + c.size());
  const double ynorm = y.norm();
  rep.residual = ynorm > 0 ? (e * c - y).norm() / ynorm : 0.0;

  // unconstrained ridge diagnostic for the sign of the fitted weights
  Eigen::MatrixXd gram = e.transpose() * e;
  const double ridge = 1e-10 * gram.trace() / n_omega;
  gram.diagonal().array() += ridge;
  const Eigen::VectorXd cu = gram.ldlt().solve(e.transpose() * y);
  rep.min_weight = cu.minCoeff();
  rep.max_weight = std::max(std::abs(cu.maxCoeff()), std::abs(cu.minCoeff()));
  return rep;
}

}  // namespace scalim
