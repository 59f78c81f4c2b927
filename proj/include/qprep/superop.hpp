// superop.hpp -- linear maps on n x n matrices, stored as n^2 x n^2 matrices.
//
// Vectorization is row-major over the matrix-unit basis Pi_ij = |i><j|,
// index(i,j) = i*n + j.  With this choice vec(A X B) = (A (x) B^T) vec(X).
#pragma once

#include "qprep/quadrature.hpp"

#include <Eigen/Dense>

namespace qprep {

using SuperOp = Eigen::MatrixXcd;

inline int so_index(int i, int j, int n) { return i * n + j; }

// vec / unvec in the row-major matrix-unit basis.
Eigen::VectorXcd sop_vec(const Eigen::MatrixXcd& X);
Eigen::MatrixXcd sop_unvec(const Eigen::VectorXcd& v, int n);

// Kronecker product (row-major vectorization convention).
SuperOp sop_kron(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B);

// X -> A X.
SuperOp left_mult(const Eigen::MatrixXcd& A);
// X -> X A^dagger  (antilinear in A by design).
SuperOp right_mult_star(const Eigen::MatrixXcd& A);
// X -> A X B.
SuperOp sandwich(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B);

// Hilbert-Schmidt inner product <A, B> = tr(A^dagger B).
cd hs_inner(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B);

// Operator norm of S as a map on (C^{n^2}, Frobenius): largest singular value.
double op_norm_2(const SuperOp& S);

struct InfNormEstimate {
  double estimate = 0.0;  // best lower bound found by local search
  double lower = 0.0;     // certified: max(estimate, s2/sqrt(n))
  double upper = 0.0;     // certified: sqrt(n) * s2
};

// Operator norm of S with respect to the spectral norm on matrices,
// sup{ ||S(X)||_spec : ||X||_spec <= 1 }.  Estimated by conditional-gradient
// ascent from random starts; bracketed via norm equivalence with op_norm_2.
InfNormEstimate op_norm_inf(const SuperOp& S, int restarts = 12,
                            int iters = 60, unsigned seed = 12345);

// Matrix exponential (scaling-and-squaring Pade via Eigen).
SuperOp sop_expm(const SuperOp& S);

}  // namespace qprep
