#include "scalim/vecmat.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

namespace scalim {

Mat inverse(const Mat& m, int d, double* det) {
  Eigen::Matrix4d e = Eigen::Matrix4d::Identity();
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) e(i, j) = m.at(i, j);
  const Eigen::Matrix4d block = e;
  Eigen::FullPivLU<Eigen::Matrix4d> lu(block);
  if (det) {
    // determinant of the active block only; padding identity contributes 1
    *det = lu.determinant();
  }
  if (!lu.isInvertible()) throw NumericalError("singular matrix in inverse()");
  const Eigen::Matrix4d inv = lu.inverse();
  Mat r;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) r.at(i, j) = inv(i, j);
  return r;
}

static Eigen::Matrix4d to_eigen_padded(const Mat& m, int d, double pad) {
  Eigen::Matrix4d e = Eigen::Matrix4d::Identity() * pad;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) e(i, j) = m.at(i, j);
  return e;
}

double spd_max_eigenvalue(const Mat& m, int d) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(to_eigen_padded(m, d, 0.0));
  double mx = 0;
  for (int i = 0; i < 4; ++i) mx = std::max(mx, es.eigenvalues()[i]);
  return mx;
}

double spd_min_eigenvalue(const Mat& m, int d) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(to_eigen_padded(m, d, 1e30));
  double mn = 1e30;
  for (int i = 0; i < 4; ++i) mn = std::min(mn, es.eigenvalues()[i]);
  return mn;
}

bool is_lorentz(const Mat& lam, int d, double tol) {
  if (lam.at(0, 0) <= 0) return false;
  // Lambda^T eta Lambda == eta
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      double s = 0;
      for (int k = 0; k < d; ++k) {
        const double eta = (k == 0) ? 1.0 : -1.0;
        s += lam.at(k, i) * eta * lam.at(k, j);
      }
      const double target = (i == j) ? (i == 0 ? 1.0 : -1.0) : 0.0;
      if (std::abs(s - target) > tol) return false;
    }
  return true;
}

Mat boost_matrix(int d, int spatial_axis, double rapidity) {
  if (spatial_axis < 1 || spatial_axis >= d) throw DomainError("boost axis out of range");
  Mat m = Mat::identity(d);
  const double ch = std::cosh(rapidity), sh = std::sinh(rapidity);
  m.at(0, 0) = ch;
  m.at(0, spatial_axis) = -sh;
  m.at(spatial_axis, 0) = -sh;
  m.at(spatial_axis, spatial_axis) = ch;
  return m;
}

Mat rotation_matrix(int d, int axis_i, int axis_j, double angle) {
  if (axis_i < 1 || axis_j < 1 || axis_i >= d || axis_j >= d || axis_i == axis_j)
    throw DomainError("rotation axes out of range");
  Mat m = Mat::identity(d);
  const double c = std::cos(angle), s = std::sin(angle);
  m.at(axis_i, axis_i) = c;
  m.at(axis_j, axis_j) = c;
  m.at(axis_i, axis_j) = -s;
  m.at(axis_j, axis_i) = s;
  return m;
}

}  // namespace scalim
