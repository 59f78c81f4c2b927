// test_dyson.cpp -- pairing expansion, comparison lemma, Riesz split.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "qprep/dyson.hpp"
#include "qprep/lindblad.hpp"
#include "test_util.hpp"

#include <cmath>

using namespace qprep;

namespace {

AtomModel two_level_sx() {
  AtomModel m;
  m.energies = Eigen::VectorXd(2);
  m.energies << 0.0, 1.0;
  m.coupling = Eigen::MatrixXcd(2, 2);
  m.coupling << 0.0, 1.0, 1.0, 0.0;
  return m;
}

AtomModel one_level(double g) {
  AtomModel m;
  m.energies = Eigen::VectorXd::Zero(1);
  m.coupling = Eigen::MatrixXcd(1, 1);
  m.coupling(0, 0) = g;
  return m;
}

}  // namespace

TEST_CASE("zeroth order is the free conjugation") {
  AtomModel m = two_level_sx();
  Correlation c(FormFactor::exponential());
  SuperOp Z = dyson_Z0(m, c, 0.3, 1.0, 3.5, 0);
  // X -> e^{i dt H} X e^{-i dt H}: diagonal phases e^{i dt eps_ij}
  double dt = 2.5;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      int idx = so_index(i, j, 2);
      CHECK(std::abs(Z(idx, idx) - std::exp(cd(0.0, dt * m.bohr(i, j)))) <
            1e-12);
    }
  CHECK((Z - SuperOp(Z.diagonal().asDiagonal())).norm() < 1e-12);

  // lambda = 0 gives the same at any order
  SuperOp Z2 = dyson_Z0(m, c, 0.0, 1.0, 3.5, 2);
  CHECK((Z - Z2).norm() < 1e-14);
}

TEST_CASE("single-level atom: all pairing orders cancel") {
  // For a one-dimensional atom the branch signs cancel pairwise, so the
  // propagator is the identity order by order.
  AtomModel m = one_level(1.7);
  Correlation c(FormFactor::exponential());
  for (int k = 1; k <= 2; ++k) {
    SuperOp Z = dyson_Z0(m, c, 0.4, 0.0, 2.0, k);
    CHECK(std::abs(Z(0, 0) - 1.0) < 1e-12);
  }
}

TEST_CASE("order-k term scales as lambda^(2k)") {
  AtomModel m = two_level_sx();
  Correlation c(FormFactor::exponential());
  const double s = 0.0, t = 1.5, l = 0.07;

  SuperOp d1a = dyson_Z0(m, c, l, s, t, 1) - dyson_Z0(m, c, l, s, t, 0);
  SuperOp d1b = dyson_Z0(m, c, 2 * l, s, t, 1) - dyson_Z0(m, c, 2 * l, s, t, 0);
  CHECK((d1b - 4.0 * d1a).norm() < 1e-10 * d1b.norm());

  SuperOp d2a = dyson_Z0(m, c, l, s, t, 2) - dyson_Z0(m, c, l, s, t, 1);
  SuperOp d2b = dyson_Z0(m, c, 2 * l, s, t, 2) - dyson_Z0(m, c, 2 * l, s, t, 1);
  CHECK((d2b - 16.0 * d2a).norm() < 1e-10 * d2b.norm());
}

TEST_CASE("constant schedule matches the frozen-coupling expansion") {
  AtomModel m = two_level_sx();
  Correlation c(FormFactor::exponential());
  CouplingSchedule sched = CouplingSchedule::constant(0.06);
  SuperOp A = dyson_Z(m, c, sched, 0.5, 2.5, 2);
  SuperOp B = dyson_Z0(m, c, 0.06, 0.5, 2.5, 2);
  CHECK((A - B).norm() < 1e-12);
}

TEST_CASE("unit observable is preserved order by order") {
  AtomModel m = two_level_sx();
  Correlation c(FormFactor::exponential());
  Eigen::MatrixXcd I2 = Eigen::MatrixXcd::Identity(2, 2);
  SuperOp Z = dyson_Z0(m, c, 0.1, 0.0, 3.0, 2);
  CHECK((sop_unvec(Z * sop_vec(I2), 2) - I2).norm() < 1e-10);
}

TEST_CASE("Hermitian observables map to Hermitian observables") {
  std::mt19937 rng(5);
  AtomModel m = testutil::random_model(2, rng);
  Correlation c(FormFactor::exponential());
  SuperOp Z = dyson_Z0(m, c, 0.08, 0.0, 2.0, 2);
  Eigen::MatrixXcd O(2, 2);
  O << 0.4, cd(0.2, -0.7), cd(0.2, 0.7), -1.1;
  Eigen::MatrixXcd ZO = sop_unvec(Z * sop_vec(O), 2);
  CHECK((ZO - ZO.adjoint().eval()).norm() < 1e-9);
}

TEST_CASE("truncated expansion tracks the weak-coupling semigroup") {
  AtomModel m = two_level_sx();
  Correlation c(FormFactor::exponential());
  SuperOp M = lindblad_closed_form(m, vacuum_view(c));
  const double s = 0.0, t = 2.0;

  SuperOp Za = dyson_Z0(m, c, 0.05, s, t, 2);
  CompareReport ra = compare_Z0_lindblad(m, M, Za, 0.05, s, t);
  CHECK(ra.lhs_norm < 0.05);

  SuperOp Zb = dyson_Z0(m, c, 0.025, s, t, 2);
  CompareReport rb = compare_Z0_lindblad(m, M, Zb, 0.025, s, t);
  CHECK(rb.lhs_norm < ra.lhs_norm);
  CHECK(rb.paper_rhs_shape < ra.paper_rhs_shape);
}

TEST_CASE("norm and tail bounds") {
  AtomModel m = two_level_sx();
  Correlation c(FormFactor::exponential());
  // ||f||_L1 = 2 pi, ||G|| = 1
  CHECK(dyson_norm_bound(m, c, 0.1, 0.0, 5.0) ==
        doctest::Approx(std::exp(4.0 * 5.0 * 2.0 * M_PI * 0.01))
            .epsilon(1e-10));
  double x = 4.0 * 5.0 * 2.0 * M_PI * 0.01;
  CHECK(dyson_tail_bound(m, c, 0.1, 0.0, 5.0, 2) ==
        doctest::Approx(x * x * x / 6.0 * std::exp(x)).epsilon(1e-10));
  // the truncated norm stays below the a-priori bound
  SuperOp Z = dyson_Z0(m, c, 0.1, 0.0, 5.0, 2);
  CHECK(op_norm_2(Z) <= std::sqrt(2.0) * dyson_norm_bound(m, c, 0.1, 0.0, 5.0));
}

TEST_CASE("Riesz split of semigroup inputs") {
  AtomModel m = two_level_sx();
  Correlation c(FormFactor::exponential());
  SuperOp M = lindblad_closed_form(m, vacuum_view(c));
  const double tau = 8.0, lambda = 0.08;
  SuperOp Z = semigroup(m, M, lambda, tau / (lambda * lambda));

  RieszSplit split = riesz_decomposition(Z);
  // P = |1_S><Pi_11|
  Eigen::MatrixXcd I2 = Eigen::MatrixXcd::Identity(2, 2);
  Eigen::MatrixXcd P11 = Eigen::MatrixXcd::Zero(2, 2);
  P11(0, 0) = 1.0;
  SuperOp Pref = sop_vec(I2) * sop_vec(P11).adjoint();
  CHECK((split.P - Pref).norm() < 1e-10);
  CHECK((split.Pi - P11).norm() < 1e-10);
  // projector algebra
  CHECK((split.P * split.P - split.P).norm() < 1e-10);
  CHECK((split.P * split.R).norm() < 1e-10);
  CHECK((split.R * split.P).norm() < 1e-10);
  // contraction: tau chosen so e^{tau * gap / 2} < 0.25
  CHECK(split.norm_R < 0.5);

  SUBCASE("identity input fails (whole spectrum at 1)") {
    CHECK_THROWS(riesz_decomposition(SuperOp::Identity(4, 4)));
  }
  SUBCASE("shifted spectrum fails the eigenvalue-at-1 gate") {
    CHECK_THROWS(riesz_decomposition(0.5 * SuperOp::Identity(4, 4)));
  }
}

TEST_CASE("contraction profile with the semigroup surrogate") {
  AtomModel m = two_level_sx();
  Correlation c(FormFactor::exponential());
  SuperOp M = lindblad_closed_form(m, vacuum_view(c));
  CouplingSchedule sched = CouplingSchedule::decaying(0.08, -0.25);

  auto window = [&](double s, double t) {
    return semigroup(m, M, sched.at(s), t - s);
  };
  ContractionProfile prof =
      vanhove_contraction_profile(m, sched, 8.0, 3, window);
  REQUIRE(prof.grid.size() == 3);
  for (double d : prof.pi_dist) CHECK(d < 1e-8);  // surrogate is exact
  for (double r : prof.norm_R) CHECK(r < 0.5);
}
