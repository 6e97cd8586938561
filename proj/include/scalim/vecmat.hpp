#ifndef SCALIM_VECMAT_HPP_
#define SCALIM_VECMAT_HPP_

#include <array>
#include <cmath>
#include <cstring>

#include "scalim/common.hpp"

namespace scalim {

inline constexpr int kMaxDim = 4;

// Spacetime dimension, signature (+,-,...,-). All objects participating in
// one computation carry the same d.
struct SpacetimeDim {
  int d = 4;

  explicit SpacetimeDim(int dim = 4) : d(dim) {
    if (d < 2 || d > kMaxDim) throw DomainError("spacetime dimension must be 2, 3 or 4");
  }
  bool operator==(const SpacetimeDim& o) const { return d == o.d; }
  bool operator!=(const SpacetimeDim& o) const { return d != o.d; }
  // metric signs: +1 for axis 0, -1 otherwise
  double sign(int nu) const { return nu == 0 ? 1.0 : -1.0; }
};

// Fixed-capacity vector over the active dimension. Unused trailing
// components stay zero, so arithmetic can run over kMaxDim unconditionally.
struct Vec {
  std::array<double, kMaxDim> c{0.0, 0.0, 0.0, 0.0};

  static Vec zero() { return Vec{}; }
  static Vec axis(int nu, double v = 1.0) {
    Vec a;
    a.c[nu] = v;
    return a;
  }
  double& operator[](int i) { return c[i]; }
  double operator[](int i) const { return c[i]; }

  Vec operator+(const Vec& o) const {
    Vec r;
    for (int i = 0; i < kMaxDim; ++i) r.c[i] = c[i] + o.c[i];
    return r;
  }
  Vec operator-(const Vec& o) const {
    Vec r;
    for (int i = 0; i < kMaxDim; ++i) r.c[i] = c[i] - o.c[i];
    return r;
  }
  Vec operator*(double s) const {
    Vec r;
    for (int i = 0; i < kMaxDim; ++i) r.c[i] = c[i] * s;
    return r;
  }
  double dot(const Vec& o) const {  // Euclidean dot on components
    double s = 0;
    for (int i = 0; i < kMaxDim; ++i) s += c[i] * o.c[i];
    return s;
  }
  double norm() const { return std::sqrt(dot(*this)); }
  bool operator==(const Vec& o) const { return c == o.c; }
};

// Symmetric (or general) d x d matrix, stored row-major at full capacity.
struct Mat {
  std::array<double, kMaxDim * kMaxDim> a{};

  double& at(int i, int j) { return a[i * kMaxDim + j]; }
  double at(int i, int j) const { return a[i * kMaxDim + j]; }

  static Mat identity(int d) {
    Mat m;
    for (int i = 0; i < d; ++i) m.at(i, i) = 1.0;
    return m;
  }
  static Mat diag(int d, const Vec& v) {
    Mat m;
    for (int i = 0; i < d; ++i) m.at(i, i) = v[i];
    return m;
  }

  Vec apply(const Vec& x, int d) const {
    Vec r;
    for (int i = 0; i < d; ++i) {
      double s = 0;
      for (int j = 0; j < d; ++j) s += at(i, j) * x[j];
      r[i] = s;
    }
    return r;
  }
  Mat mul(const Mat& o, int d) const {
    Mat r;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        double s = 0;
        for (int k = 0; k < d; ++k) s += at(i, k) * o.at(k, j);
        r.at(i, j) = s;
      }
    return r;
  }
  Mat transposed(int d) const {
    Mat r;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) r.at(i, j) = at(j, i);
    return r;
  }
  double quad(const Vec& x, int d) const {  // x^T A x
    double s = 0;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) s += x[i] * at(i, j) * x[j];
    return s;
  }
  bool operator==(const Mat& o) const { return a == o.a; }
};

// Inverse and determinant of the d x d leading block (Gaussian elimination
// with partial pivoting; d <= 4).
Mat inverse(const Mat& m, int d, double* det = nullptr);

// Largest/smallest eigenvalue of a symmetric positive definite d x d block.
double spd_max_eigenvalue(const Mat& m, int d);
double spd_min_eigenvalue(const Mat& m, int d);

// Lorentz-group helpers for signature (+,-,...,-).
bool is_lorentz(const Mat& lam, int d, double tol = 1e-12);
Mat boost_matrix(int d, int spatial_axis, double rapidity);
Mat rotation_matrix(int d, int axis_i, int axis_j, double angle);

}  // namespace scalim

#endif  // SCALIM_VECMAT_HPP_
