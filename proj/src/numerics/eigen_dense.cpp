#include "proxres/numerics/eigen_dense.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "proxres/error.hpp"

namespace proxres::numerics {
namespace {

void normalize_phase(Eigen::VectorXcd& v) {
  const double norm = v.norm();
  if (norm == 0.0) return;
  v /= norm;
  const double floor = 1e-10 * v.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) > floor) {
      v *= std::conj(v[i]) / std::abs(v[i]);
      v[i] = Complex(v[i].real(), 0.0);
      return;
    }
  }
}

}  // namespace

EigenDecomposition eig_complex_dense(const Eigen::MatrixXcd& matrix) {
  const Eigen::Index n = matrix.rows();
  if (n != matrix.cols()) throw DomainError("eig_complex_dense: matrix is not square");
  if (n < 1 || n > kMaxDenseEigenSize) {
    throw DomainError("eig_complex_dense: size " + std::to_string(n) + " outside [1, " +
                      std::to_string(kMaxDenseEigenSize) + "]");
  }
  if (!matrix.allFinite()) throw DomainError("eig_complex_dense: non-finite entry");

  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(matrix, /*computeEigenvectors=*/true);
  if (solver.info() != Eigen::Success) {
    throw ConvergenceError("eig_complex_dense: QR iteration failed", Complex{},
                           std::numeric_limits<double>::infinity());
  }

  EigenDecomposition out;
  out.pairs.reserve(static_cast<size_t>(n));
  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::VectorXcd v = solver.eigenvectors().col(k);
    normalize_phase(v);
    out.pairs.push_back({solver.eigenvalues()[k], std::move(v)});
  }
  std::sort(out.pairs.begin(), out.pairs.end(), [](const EigenPair& a, const EigenPair& b) {
    if (a.value.real() != b.value.real()) return a.value.real() < b.value.real();
    return a.value.imag() < b.value.imag();
  });

  const double hnorm = std::max(matrix.norm(), std::numeric_limits<double>::min());
  for (const auto& pair : out.pairs) {
    const double residual = (matrix * pair.vector - pair.value * pair.vector).norm();
    if (!(residual <= 1e-10 * hnorm)) {
      throw ConvergenceError("eig_complex_dense: eigenpair residual above contract", pair.value,
                             residual);
    }
  }

  Eigen::MatrixXcd basis(n, n);
  for (Eigen::Index k = 0; k < n; ++k) basis.col(k) = out.pairs[static_cast<size_t>(k)].vector;
  const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXcd>(basis).singularValues();
  out.ill_conditioned = sv[n - 1] <= 1e-8 * sv[0];
  return out;
}

}  // namespace proxres::numerics
