#pragma once

// Second, independent eigensolver route for cross-checking the in-tree
// Jacobi implementation. Tests only.

#include <Eigen/Dense>
#include <vector>

#include "ghzsep/linalg.hpp"

namespace testutil {

inline std::vector<double> eigen_eigenvalues(const ghzsep::ComplexMatrix& m) {
  const int n = m.dim();
  Eigen::MatrixXcd em(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) em(i, j) = m.at(i, j);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(em, Eigen::EigenvaluesOnly);
  std::vector<double> ev(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) ev[static_cast<size_t>(i)] = solver.eigenvalues()(i);
  return ev;
}

}  // namespace testutil
