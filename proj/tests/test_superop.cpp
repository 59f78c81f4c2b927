// test_superop.cpp -- superoperator algebra, norms, exponentials.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "qprep/superop.hpp"

#include <random>

using namespace qprep;

namespace {

Eigen::MatrixXcd random_mat(int n, std::mt19937& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXcd A(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = cd(g(rng), g(rng));
  return A;
}

double spec_norm(const Eigen::MatrixXcd& X) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(X);
  return svd.singularValues()(0);
}

}  // namespace

TEST_CASE("vectorization and multiplication maps") {
  std::mt19937 rng(7);
  const int n = 3;
  auto A = random_mat(n, rng), X = random_mat(n, rng), B = random_mat(n, rng);

  CHECK((sop_unvec(sop_vec(X), n) - X).norm() == doctest::Approx(0.0));
  CHECK((sop_unvec(left_mult(A) * sop_vec(X), n) - A * X).norm() < 1e-12);
  CHECK((sop_unvec(right_mult_star(A) * sop_vec(X), n) - X * A.adjoint()).norm() <
        1e-12);
  CHECK((sop_unvec(sandwich(A, B) * sop_vec(X), n) - A * X * B).norm() < 1e-12);

  // right_mult_star is antilinear in its operator argument.
  cd cc(0.3, -1.7);
  CHECK((right_mult_star(cc * A) - std::conj(cc) * right_mult_star(A)).norm() <
        1e-12);

  // L and R commute.
  CHECK((left_mult(A) * right_mult_star(B) - right_mult_star(B) * left_mult(A))
            .norm() < 1e-12);
}

TEST_CASE("Hilbert-Schmidt inner product") {
  std::mt19937 rng(8);
  auto A = random_mat(2, rng), B = random_mat(2, rng);
  cd direct(0.0, 0.0);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) direct += std::conj(A(i, j)) * B(i, j);
  CHECK(std::abs(hs_inner(A, B) - direct) < 1e-12);
  // matches the vectorized inner product
  CHECK(std::abs(hs_inner(A, B) - sop_vec(A).dot(sop_vec(B))) < 1e-12);
}

TEST_CASE("operator norms") {
  std::mt19937 rng(9);
  const int n = 3;
  auto A = random_mat(n, rng), B = random_mat(n, rng);

  // ||L(A)||_2 on Frobenius space equals the spectral norm of A.
  CHECK(op_norm_2(left_mult(A)) == doctest::Approx(spec_norm(A)).epsilon(1e-10));

  // For the sandwich X -> A X B the spectral-norm operator norm is known.
  SuperOp S = sandwich(A, B);
  InfNormEstimate e = op_norm_inf(S);
  double exact = spec_norm(A) * spec_norm(B);
  CHECK(e.estimate == doctest::Approx(exact).epsilon(1e-6));
  CHECK(e.lower <= exact * (1 + 1e-9));
  CHECK(e.upper >= exact * (1 - 1e-9));

  // The estimate is always a valid lower bound within the bracket.
  for (int trial = 0; trial < 5; ++trial) {
    SuperOp T = SuperOp::Random(n * n, n * n);
    InfNormEstimate t = op_norm_inf(T);
    CHECK(t.lower <= t.estimate * (1 + 1e-12) + 1e-12);
    CHECK(t.estimate <= t.upper * (1 + 1e-12));
    // norm-equivalence bracket
    double s2 = op_norm_2(T);
    CHECK(t.upper == doctest::Approx(std::sqrt(double(n)) * s2));
  }
}

TEST_CASE("matrix exponential") {
  std::mt19937 rng(10);
  const int n = 2;
  auto A = random_mat(n, rng);
  // exp(L(A)) = L(exp(A))
  SuperOp E = sop_expm(left_mult(A));
  Eigen::MatrixXcd eA = sop_unvec(E * sop_vec(Eigen::MatrixXcd::Identity(n, n)), n);
  Eigen::MatrixXcd direct = sop_unvec(
      sop_expm(left_mult(A)) * sop_vec(Eigen::MatrixXcd::Identity(n, n)), n);
  // independent reference: Taylor series for exp(A)
  Eigen::MatrixXcd taylor = Eigen::MatrixXcd::Identity(n, n);
  Eigen::MatrixXcd term = Eigen::MatrixXcd::Identity(n, n);
  for (int k = 1; k < 40; ++k) {
    term = term * A / double(k);
    taylor += term;
  }
  direct = taylor;
  CHECK((eA - direct).norm() < 1e-10);
  CHECK((E - left_mult(direct)).norm() < 1e-10);
}
