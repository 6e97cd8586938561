#include "scalim/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace scalim {

static QuadRule compute_gauss_legendre(int n) {
  QuadRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  // Newton iteration on P_n, symmetric nodes.
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * pp * pp);
    r.nodes[i] = -x;
    r.weights[i] = w;
    r.nodes[n - 1 - i] = x;
    r.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) r.nodes[n / 2] = 0.0;
  return r;
}

const QuadRule& gauss_legendre(int n) {
  if (n < 1) throw DomainError("gauss_legendre: n must be >= 1");
  static std::map<int, QuadRule> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_gauss_legendre(n)).first;
  return it->second;
}

QuadRule gauss_legendre_on(int n, double a, double b) {
  const QuadRule& base = gauss_legendre(n);
  QuadRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  for (int i = 0; i < n; ++i) {
    r.nodes[i] = mid + half * base.nodes[i];
    r.weights[i] = half * base.weights[i];
  }
  return r;
}

QuadRule tanh_halfline(int n, double scale) {
  if (scale <= 0) throw DomainError("tanh_halfline: scale must be positive");
  const QuadRule& base = gauss_legendre(n);
  QuadRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    const double t = 0.5 * (base.nodes[i] + 1.0);  // (0, 1)
    r.nodes[i] = scale * std::atanh(t);
    r.weights[i] = 0.5 * base.weights[i] * scale / (1.0 - t * t);
  }
  return r;
}

QuadRule tanh_fullline(int n, double scale) {
  if (scale <= 0) throw DomainError("tanh_fullline: scale must be positive");
  const QuadRule& base = gauss_legendre(n);
  QuadRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    const double t = base.nodes[i];
    r.nodes[i] = scale * std::atanh(t);
    r.weights[i] = base.weights[i] * scale / (1.0 - t * t);
  }
  return r;
}

namespace {

struct Panel {
  double a, b;
  int depth;
};

void eval_panel(const std::function<cplx(double)>& f, double a, double b, cplx* fine,
                cplx* coarse, double* local_abs, int* evals) {
  const QuadRule& g15 = gauss_legendre(15);
  const QuadRule& g7 = gauss_legendre(7);
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  KahanSumC s15, s7;
  KahanSum sa;
  for (int i = 0; i < 15; ++i) {
    const cplx v = f(mid + half * g15.nodes[i]);
    s15.add(v * (half * g15.weights[i]));
    sa.add(std::abs(v) * (half * g15.weights[i]));
  }
  for (int i = 0; i < 7; ++i) s7.add(f(mid + half * g7.nodes[i]) * (half * g7.weights[i]));
  *fine = s15.value();
  *coarse = s7.value();
  *local_abs = sa.value();
  *evals += 22;
}

}  // namespace

AdaptiveResult adaptive_gauss(const std::function<cplx(double)>& f, double a, double b,
                              double abs_tol, double rel_tol, int max_depth) {
  AdaptiveResult out;
  KahanSumC total;
  KahanSum err;
  // Depth-first, left-to-right: the summation order is input-determined.
  std::vector<Panel> stack;
  stack.push_back({a, b, 0});
  // First pass estimate of the overall scale for the relative tolerance.
  cplx f0, c0;
  double a0 = 0;
  eval_panel(f, a, b, &f0, &c0, &a0, &out.evaluations);
  double scale = std::max(std::abs(f0), a0);
  while (!stack.empty()) {
    Panel p = stack.back();
    stack.pop_back();
    cplx fine, coarse;
    double local_abs = 0;
    eval_panel(f, p.a, p.b, &fine, &coarse, &local_abs, &out.evaluations);
    const double e = std::abs(fine - coarse);
    const double tol_here =
        std::max(abs_tol, rel_tol * scale) * (p.b - p.a) / (b - a);
    // a panel at machine-precision relative to its own mass cannot improve
    const bool at_floor = e <= 1e-15 * local_abs;
    if (e <= tol_here || at_floor || p.depth >= max_depth) {
      total.add(fine);
      err.add(e);
      if (p.depth >= max_depth && e > tol_here && !at_floor) out.converged = false;
    } else {
      const double m = 0.5 * (p.a + p.b);
      // push right first so the left half is processed next (ordered sum)
      stack.push_back({m, p.b, p.depth + 1});
      stack.push_back({p.a, m, p.depth + 1});
    }
  }
  out.value = total.value();
  out.abs_error = err.value();
  return out;
}

}  // namespace scalim
