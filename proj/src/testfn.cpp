#include "scalim/testfn.hpp"

#include <algorithm>
#include <cmath>

namespace scalim {

namespace {

Poly poly_or_one(const Poly& p) { return p.is_zero() ? Poly::constant(1.0) : p; }

void check_spd(const Mat& w, int d) {
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j)
      if (std::abs(w.at(i, j) - w.at(j, i)) > 1e-12 * (1 + std::abs(w.at(i, j))))
        throw DomainError("width matrix must be symmetric");
  if (spd_min_eigenvalue(w, d) <= 0) throw DomainError("width matrix must be positive definite");
}

bool near(double a, double b, double tol) {
  return std::abs(a - b) <= tol * (1.0 + std::max(std::abs(a), std::abs(b)));
}

bool same_shape(const GaussianPacket& a, const GaussianPacket& b, double tol) {
  const int d = a.dim.d;
  for (int i = 0; i < d; ++i) {
    if (!near(a.center[i], b.center[i], tol)) return false;
    if (!near(a.modulation[i], b.modulation[i], tol)) return false;
    for (int j = 0; j < d; ++j)
      if (!near(a.width.at(i, j), b.width.at(i, j), tol)) return false;
  }
  return true;
}

}  // namespace

cplx GaussianPacket::eval(const Vec& x) const {
  const int d = dim.d;
  const Vec u = x - center;
  const double q = width.quad(u, d);
  const double phase = modulation.dot(x);
  cplx pval(1.0, 0.0);
  if (!poly.is_zero()) pval = poly.eval(u, d);
  const double env = std::exp(-0.5 * q);
  return amplitude * pval * env * cplx(std::cos(phase), std::sin(phase));
}

Vec GaussianPacket::sigma() const {
  const Mat m = inverse(width, dim.d);
  Vec s;
  for (int nu = 0; nu < dim.d; ++nu) s[nu] = std::sqrt(m.at(nu, nu));
  return s;
}

Ellipsoid GaussianPacket::effective_support(double eps) const {
  if (!(eps > 0 && eps < 1)) throw DomainError("support tolerance must lie in (0,1)");
  const int d = dim.d;
  const int deg = poly.degree();
  // Radial tail bound in whitened coordinates: mass outside radius s is
  // Q((d+deg)/2, s^2/2) for a degree-deg polynomial profile; solve for s.
  const int two_a = d + deg;
  double lo = 0.0, hi = 60.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (upper_gamma_regularized_half(two_a, 0.5 * mid * mid) > eps)
      lo = mid;
    else
      hi = mid;
  }
  const double s = hi;
  Ellipsoid e;
  e.center = center;
  e.radii = sigma() * s;
  return e;
}

double GaussianPacket::l1_bound() const {
  const int d = dim.d;
  double det = 0;
  inverse(width, d, &det);
  const double vol = std::pow(kTwoPi, 0.5 * d) / std::sqrt(det);
  if (poly.is_zero()) return std::abs(amplitude) * vol;
  // bound |P| by its coefficient sums against per-axis absolute moments
  const Vec sg = sigma();
  double c = 0;
  for (const auto& t : poly.terms()) {
    double m = std::abs(t.coeff);
    for (int nu = 0; nu < d; ++nu) {
      const int k = t.exp[nu];
      if (k > 0)
        m *= std::pow(sg[nu], k) * std::pow(2.0, 0.5 * k) *
             std::exp(std::lgamma(0.5 * (k + 1))) / std::sqrt(kPi);
    }
    c += m;
  }
  // correlated widths make the moment product only a heuristic; pad it
  return std::abs(amplitude) * vol * c * (1 << std::min(8, poly.degree()));
}

GaussianPacket make_packet(SpacetimeDim dim, cplx amplitude, const Vec& center,
                           const Vec& widths, const Vec& modulation, Poly poly) {
  Vec w2;
  for (int nu = 0; nu < dim.d; ++nu) {
    if (!(widths[nu] > 0)) throw DomainError("packet widths must be strictly positive");
    w2[nu] = widths[nu] * widths[nu];
  }
  return make_packet_matrix(dim, amplitude, center, Mat::diag(dim.d, w2), modulation,
                            std::move(poly));
}

GaussianPacket make_packet_matrix(SpacetimeDim dim, cplx amplitude, const Vec& center,
                                  const Mat& width, const Vec& modulation, Poly poly) {
  check_spd(width, dim.d);
  GaussianPacket p;
  p.dim = dim;
  p.amplitude = amplitude;
  p.center = center;
  p.width = width;
  p.modulation = modulation;
  p.poly = poly_or_one(poly);
  if (p.poly.degree() > kDefaultMaxPolyDegree)
    throw DomainError("packet polynomial degree exceeds the cap (" +
                      std::to_string(kDefaultMaxPolyDegree) + ")");
  return p;
}

cplx TestFunction::eval(const Vec& x) const {
  KahanSumC s;
  for (const auto& p : terms) s.add(p.eval(x));
  return s.value();
}

double TestFunction::l1_bound() const {
  double s = 0;
  for (const auto& p : terms) s += p.l1_bound();
  return s;
}

std::vector<Ellipsoid> TestFunction::support_ellipsoids(double eps) const {
  std::vector<Ellipsoid> out;
  out.reserve(terms.size());
  for (const auto& p : terms) out.push_back(p.effective_support(eps));
  return out;
}

TestFunction operator+(const TestFunction& a, const TestFunction& b) {
  if (a.terms.empty()) return b;
  if (b.terms.empty()) return a;
  if (a.dim != b.dim) throw DomainError("adding test functions of different dimension");
  TestFunction r = a;
  r.terms.insert(r.terms.end(), b.terms.begin(), b.terms.end());
  return r;
}

TestFunction operator*(cplx c, const TestFunction& f) {
  TestFunction r = f;
  for (auto& p : r.terms) p.amplitude *= c;
  return r;
}

TestFunction scale(const TestFunction& f, double lambda) {
  if (!(lambda > 0)) throw DomainError("scale factor must be positive");
  TestFunction r = f;
  for (auto& p : r.terms) {
    p.center = p.center * lambda;
    for (auto& w : p.width.a) w /= lambda * lambda;
    p.modulation = p.modulation * (1.0 / lambda);
    p.poly = p.poly.arg_scaled(1.0 / lambda);
  }
  return r;
}

TestFunction translate(const TestFunction& f, const Vec& a) {
  TestFunction r = f;
  for (auto& p : r.terms) {
    p.center = p.center + a;
    const double phase = -p.modulation.dot(a);
    p.amplitude *= cplx(std::cos(phase), std::sin(phase));
  }
  return r;
}

TestFunction boost(const TestFunction& f, const Mat& lam) {
  const int d = f.dim.d;
  if (!is_lorentz(lam, d)) throw DomainError("boost matrix is not proper orthochronous Lorentz");
  const Mat inv = inverse(lam, d);
  const Mat inv_t = inv.transposed(d);
  TestFunction r = f;
  for (auto& p : r.terms) {
    p.center = lam.apply(p.center, d);
    p.width = inv_t.mul(p.width, d).mul(inv, d);
    p.modulation = inv_t.apply(p.modulation, d);
    p.poly = p.poly.compose_linear(inv, d);
  }
  return r;
}

TestFunction derivative(const TestFunction& f, int nu, int degree_cap) {
  const int d = f.dim.d;
  if (nu < 0 || nu >= d) throw DomainError("derivative axis out of range");
  TestFunction r = f;
  for (auto& p : r.terms) {
    const Poly base = poly_or_one(p.poly);
    // d/dx^nu [P e^{-q/2} e^{ik.x}] = [dP - (Wu)_nu P + i k_nu P] e^{-q/2} e^{ik.x}
    Poly lin;
    for (int mu = 0; mu < d; ++mu) {
      if (p.width.at(nu, mu) != 0.0) {
        MultiIndex m{};
        m[mu] = 1;
        lin = lin + Poly::monomial(m, p.width.at(nu, mu));
      }
    }
    Poly out = base.derivative(nu) - lin * base + base.scaled(cplx(0.0, p.modulation[nu]));
    if (out.degree() > degree_cap)
      throw DomainError("derivative would exceed the polynomial degree cap (" +
                        std::to_string(degree_cap) + ")");
    p.poly = out;
  }
  return r;
}

TestFunction conj(const TestFunction& f) {
  TestFunction r = f;
  for (auto& p : r.terms) {
    p.amplitude = std::conj(p.amplitude);
    p.poly = p.poly.conjugated();
    p.modulation = p.modulation * -1.0;
  }
  return r;
}

Vec momentum_variable(const SpacetimeDim& dim, const Vec& p) {
  Vec kappa;
  for (int nu = 0; nu < dim.d; ++nu) kappa[nu] = dim.sign(nu) * p[nu];
  return kappa;
}

TestFunction fourier_transform(const TestFunction& f) {
  const int d = f.dim.d;
  TestFunction r;
  r.dim = f.dim;
  for (const auto& p : f.terms) {
    double det = 0;
    const Mat m = inverse(p.width, d, &det);
    // linear forms (M kappa)_nu used by the Hermite recursion
    std::array<Poly, kMaxDim> lin;
    for (int nu = 0; nu < d; ++nu) {
      Poly l;
      for (int mu = 0; mu < d; ++mu) {
        if (m.at(nu, mu) != 0.0) {
          MultiIndex mi{};
          mi[mu] = 1;
          l = l + Poly::monomial(mi, m.at(nu, mu));
        }
      }
      lin[nu] = l;
    }
    // P(-i d/dk) applied to e^{-1/2 k^T M k}: per source monomial, iterate
    // q <- -i (dq/dk_nu - (Mk)_nu q)
    Poly q_total;
    const Poly source = poly_or_one(p.poly);
    for (const auto& t : source.terms()) {
      Poly q = Poly::constant(t.coeff);
      for (int nu = 0; nu < d; ++nu)
        for (int rep = 0; rep < t.exp[nu]; ++rep)
          q = (q.derivative(nu) - lin[nu] * q).scaled(cplx(0.0, -1.0));
      q_total = q_total + q;
    }
    if (q_total.is_zero()) continue;
    const double phase = p.modulation.dot(p.center);
    const cplx base = p.amplitude * std::pow(kTwoPi, 0.5 * d) / std::sqrt(det) *
                      cplx(std::cos(phase), std::sin(phase));
    GaussianPacket out;
    out.dim = p.dim;
    out.amplitude = base;
    out.center = p.modulation * -1.0;
    out.width = m;
    out.modulation = p.center;
    out.poly = q_total;
    r.terms.push_back(std::move(out));
  }
  return r;
}

cplx fourier(const TestFunction& f, const Vec& p) {
  return fourier_transform(f).eval(momentum_variable(f.dim, p));
}

bool is_real(const TestFunction& f, double tol) {
  if (f.terms.empty()) return true;
  const TestFunction h = f + (-1.0 * conj(f));
  // fold amplitudes into the polynomials and merge packets of equal shape
  struct Group {
    const GaussianPacket* key;
    Poly sum;
  };
  std::vector<Group> groups;
  for (const auto& p : h.terms) {
    const Poly folded = poly_or_one(p.poly).scaled(p.amplitude);
    bool merged = false;
    for (auto& g : groups) {
      if (same_shape(*g.key, p, 1e-9)) {
        g.sum = g.sum + folded;
        merged = true;
        break;
      }
    }
    if (!merged) groups.push_back({&p, folded});
  }
  double scale = 0;
  for (const auto& p : f.terms)
    scale = std::max(scale, std::abs(p.amplitude) * std::max(1.0, poly_or_one(p.poly).max_abs_coeff()));
  if (scale == 0) return true;
  for (const auto& g : groups)
    if (g.sum.max_abs_coeff() > tol * scale) return false;
  return true;
}

TestFunction gaussian(SpacetimeDim dim, cplx amplitude, const Vec& center,
                      const Vec& widths, const Vec& modulation) {
  return TestFunction(make_packet(dim, amplitude, center, widths, modulation));
}

TestFunction cosine_packet(SpacetimeDim dim, double amplitude, const Vec& center,
                           const Vec& widths, const Vec& k) {
  TestFunction f = gaussian(dim, 0.5 * amplitude, center, widths, k);
  return f + gaussian(dim, 0.5 * amplitude, center, widths, k * -1.0);
}

}  // namespace scalim
