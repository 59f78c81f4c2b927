// superop.cpp -- superoperator algebra and norms.
#include "qprep/superop.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <random>

namespace qprep {

Eigen::VectorXcd sop_vec(const Eigen::MatrixXcd& X) {
  const int n = static_cast<int>(X.rows());
  Eigen::VectorXcd v(n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) v(so_index(i, j, n)) = X(i, j);
  return v;
}

Eigen::MatrixXcd sop_unvec(const Eigen::VectorXcd& v, int n) {
  Eigen::MatrixXcd X(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) X(i, j) = v(so_index(i, j, n));
  return X;
}

SuperOp sop_kron(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B) {
  const int ar = static_cast<int>(A.rows()), ac = static_cast<int>(A.cols());
  const int br = static_cast<int>(B.rows()), bc = static_cast<int>(B.cols());
  SuperOp K(ar * br, ac * bc);
  for (int i = 0; i < ar; ++i)
    for (int j = 0; j < ac; ++j) K.block(i * br, j * bc, br, bc) = A(i, j) * B;
  return K;
}

SuperOp left_mult(const Eigen::MatrixXcd& A) {
  const int n = static_cast<int>(A.rows());
  return sop_kron(A, Eigen::MatrixXcd::Identity(n, n));
}

SuperOp right_mult_star(const Eigen::MatrixXcd& A) {
  const int n = static_cast<int>(A.rows());
  // vec(X A^dagger) = (I (x) conj(A)) vec(X)
  return sop_kron(Eigen::MatrixXcd::Identity(n, n), A.conjugate());
}

SuperOp sandwich(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B) {
  return sop_kron(A, B.transpose());
}

cd hs_inner(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B) {
  return (A.adjoint() * B).trace();
}

double op_norm_2(const SuperOp& S) {
  Eigen::JacobiSVD<SuperOp> svd(S);
  return svd.singularValues()(0);
}

namespace {

double spec_norm(const Eigen::MatrixXcd& X) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(X);
  return svd.singularValues()(0);
}

// Unitary polar factor: argmax_{||X||_spec <= 1} Re tr(M^dagger X).
Eigen::MatrixXcd polar_unitary(const Eigen::MatrixXcd& M) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(
      M, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

}  // namespace

InfNormEstimate op_norm_inf(const SuperOp& S, int restarts, int iters,
                            unsigned seed) {
  const int n2 = static_cast<int>(S.rows());
  const int n = static_cast<int>(std::lround(std::sqrt(double(n2))));
  std::mt19937 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const SuperOp Sadj = S.adjoint();

  double best = 0.0;
  for (int r = 0; r < restarts; ++r) {
    Eigen::MatrixXcd X(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) X(i, j) = cd(gauss(rng), gauss(rng));
    X /= spec_norm(X);
    double cur = 0.0;
    for (int it = 0; it < iters; ++it) {
      Eigen::MatrixXcd Y = sop_unvec(S * sop_vec(X), n);
      Eigen::JacobiSVD<Eigen::MatrixXcd> svd(
          Y, Eigen::ComputeFullU | Eigen::ComputeFullV);
      double val = svd.singularValues()(0);
      if (val <= cur * (1.0 + 1e-12)) {
        cur = std::max(cur, val);
        break;
      }
      cur = val;
      // Ascent direction: S^dagger applied to the top singular dyad of S(X),
      // then the best feasible point for the linearized objective.
      Eigen::MatrixXcd dyad =
          svd.matrixU().col(0) * svd.matrixV().col(0).adjoint();
      Eigen::MatrixXcd grad = sop_unvec(Sadj * sop_vec(dyad), n);
      X = polar_unitary(grad);
    }
    best = std::max(best, cur);
  }
  InfNormEstimate e;
  double s2 = op_norm_2(S);
  double sq = std::sqrt(double(n));
  e.estimate = best;
  e.lower = std::max(best, s2 / sq);
  e.upper = sq * s2;
  return e;
}

SuperOp sop_expm(const SuperOp& S) { return S.exp(); }

}  // namespace qprep
