#include "scalim/poly.hpp"

#include <algorithm>
#include <cmath>

namespace scalim {

namespace {

bool multi_less(const MultiIndex& a, const MultiIndex& b) {
  const int da = multi_degree(a), db = multi_degree(b);
  if (da != db) return da < db;
  return a < b;
}

}  // namespace

Poly Poly::constant(cplx c) {
  Poly p;
  if (c != 0.0) p.terms_.push_back({MultiIndex{}, c});
  return p;
}

Poly Poly::monomial(const MultiIndex& m, cplx c) {
  Poly p;
  if (c != 0.0) p.terms_.push_back({m, c});
  return p;
}

bool Poly::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && multi_degree(terms_[0].exp) == 0);
}

int Poly::degree() const {
  int d = 0;
  for (const auto& t : terms_) d = std::max(d, multi_degree(t.exp));
  return d;
}

void Poly::canonicalize(double drop_tol) {
  std::sort(terms_.begin(), terms_.end(),
            [](const Term& a, const Term& b) { return multi_less(a.exp, b.exp); });
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (const auto& t : terms_) {
    if (!out.empty() && out.back().exp == t.exp)
      out.back().coeff += t.coeff;
    else
      out.push_back(t);
  }
  double scale = 0.0;
  for (const auto& t : out) scale = std::max(scale, std::abs(t.coeff));
  std::vector<Term> kept;
  for (const auto& t : out)
    if (std::abs(t.coeff) > drop_tol * scale && t.coeff != 0.0) kept.push_back(t);
  terms_ = std::move(kept);
}

Poly Poly::operator+(const Poly& o) const {
  Poly r;
  r.terms_ = terms_;
  r.terms_.insert(r.terms_.end(), o.terms_.begin(), o.terms_.end());
  r.canonicalize();
  return r;
}

Poly Poly::operator-(const Poly& o) const { return *this + o.scaled(-1.0); }

Poly Poly::operator*(const Poly& o) const {
  Poly r;
  r.terms_.reserve(terms_.size() * o.terms_.size());
  for (const auto& a : terms_)
    for (const auto& b : o.terms_) {
      Term t;
      for (int i = 0; i < kMaxDim; ++i) t.exp[i] = uint8_t(a.exp[i] + b.exp[i]);
      t.coeff = a.coeff * b.coeff;
      r.terms_.push_back(t);
    }
  r.canonicalize();
  return r;
}

Poly Poly::scaled(cplx c) const {
  Poly r;
  if (c == 0.0) return r;
  r.terms_ = terms_;
  for (auto& t : r.terms_) t.coeff *= c;
  return r;
}

Poly Poly::derivative(int nu) const {
  Poly r;
  for (const auto& t : terms_) {
    if (t.exp[nu] == 0) continue;
    Term d = t;
    d.coeff *= double(t.exp[nu]);
    d.exp[nu] -= 1;
    r.terms_.push_back(d);
  }
  r.canonicalize();
  return r;
}

Poly Poly::arg_scaled(double inv_lambda) const {
  Poly r;
  r.terms_ = terms_;
  for (auto& t : r.terms_) t.coeff *= std::pow(inv_lambda, multi_degree(t.exp));
  return r;
}

Poly Poly::compose_linear(const Mat& b, int d) const {
  Poly result;
  // linear forms L_nu(u) = sum_mu B[nu][mu] u_mu
  std::array<Poly, kMaxDim> lin;
  for (int nu = 0; nu < d; ++nu) {
    Poly l;
    for (int mu = 0; mu < d; ++mu) {
      if (b.at(nu, mu) != 0.0) {
        MultiIndex m{};
        m[mu] = 1;
        l = l + Poly::monomial(m, b.at(nu, mu));
      }
    }
    lin[nu] = l;
  }
  for (const auto& t : terms_) {
    Poly term = Poly::constant(t.coeff);
    for (int nu = 0; nu < d; ++nu)
      for (int k = 0; k < t.exp[nu]; ++k) term = term * lin[nu];
    result = result + term;
  }
  result.canonicalize();
  return result;
}

Poly Poly::conjugated() const {
  Poly r;
  r.terms_ = terms_;
  for (auto& t : r.terms_) t.coeff = std::conj(t.coeff);
  return r;
}

cplx Poly::eval(const Vec& u, int d) const {
  cplx s = 0.0;
  for (const auto& t : terms_) {
    double m = 1.0;
    for (int nu = 0; nu < d; ++nu)
      for (int k = 0; k < t.exp[nu]; ++k) m *= u[nu];
    s += t.coeff * m;
  }
  return s;
}

double Poly::coeff_scale(const Vec& sigma, int d) const {
  double s = 0.0;
  for (const auto& t : terms_) {
    double m = std::abs(t.coeff);
    for (int nu = 0; nu < d; ++nu)
      for (int k = 0; k < t.exp[nu]; ++k) m *= sigma[nu];
    s += m;
  }
  return s;
}

double Poly::max_abs_coeff() const {
  double s = 0.0;
  for (const auto& t : terms_) s = std::max(s, std::abs(t.coeff));
  return s;
}

}  // namespace scalim
