#pragma once

#include <vector>

#include <Eigen/Dense>

#include "proxres/numerics/complex.hpp"

namespace proxres::numerics {

inline constexpr int kMaxDenseEigenSize = 16;

struct EigenPair {
  Complex value;
  Eigen::VectorXcd vector;  // unit norm, first nonzero component real positive
};

struct EigenDecomposition {
  std::vector<EigenPair> pairs;  // ascending Re, then ascending Im
  // Set when the eigenvector basis is numerically singular (near-defective input).
  bool ill_conditioned = false;
};

/// Eigenpairs of a general complex matrix with N <= 16.
EigenDecomposition eig_complex_dense(const Eigen::MatrixXcd& matrix);

}  // namespace proxres::numerics
