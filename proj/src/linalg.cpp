// SPDX-License-Identifier: Apache-2.0
#include "ganeval/linalg.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

namespace ganeval {

SymmetricEigen symmetric_eigen(const Matrix& sym, bool want_vectors) {
  SymmetricEigen out;
  if (sym.rows() == 0) return out;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(
      sym, want_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  out.ok = solver.info() == Eigen::Success;
  out.values = solver.eigenvalues();
  if (want_vectors) out.vectors = solver.eigenvectors();
  return out;
}

double eigen_noise_floor(const Vector& eigenvalues) {
  if (eigenvalues.size() == 0) return 0.0;
  return static_cast<double>(eigenvalues.size()) * std::numeric_limits<double>::epsilon() *
         eigenvalues.cwiseAbs().maxCoeff();
}

Matrix psd_sqrt(const SymmetricEigen& eig) {
  const double floor = eigen_noise_floor(eig.values);
  const Vector root = eig.values.unaryExpr([floor](double v) { return v > floor ? std::sqrt(v) : 0.0; });
  Matrix scaled = eig.vectors * root.asDiagonal();
  return scaled * eig.vectors.transpose();
}

double condition_number(const Vector& eigenvalues) {
  if (eigenvalues.size() == 0) return 1.0;
  const double hi = eigenvalues.cwiseAbs().maxCoeff();
  const double lo = eigenvalues.cwiseAbs().minCoeff();
  if (lo == 0.0 || !std::isfinite(lo)) return std::numeric_limits<double>::infinity();
  return hi / lo;
}

}  // namespace ganeval
