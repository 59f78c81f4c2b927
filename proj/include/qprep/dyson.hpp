// dyson.hpp -- truncated interaction expansion of the reduced propagator.
//
// The reduced Heisenberg propagator over a window [s, t] expands into a sum
// over pair configurations: at order k there are k anchor times
// u_1 < ... < u_k, free partner times v_i > u_i, and a branch assignment for
// each time (forward or backward).  Each pair carries an amplitude f(u-v) or
// f(v-u) depending on the anchor's branch, and the coupling operator enters
// in the interaction picture, multiplied in time order along each branch.
#pragma once

#include "qprep/correlation.hpp"
#include "qprep/model.hpp"
#include "qprep/superop.hpp"

#include <functional>
#include <vector>

namespace qprep {

// Slow part of the window propagator (free evolution stripped off both
// ends): identity plus pairing terms of orders 1..k_max, constant coupling.
// Quadrature: Gauss product rules at orders 1-2, scrambled quasi-random
// simplex sampling at order 3.  Requires 0 <= k_max <= 3.
SuperOp dyson_Z0(const AtomModel& m, const Correlation& c, double lambda,
                 double s, double t, int k_max);

// Full window propagator with a time-dependent schedule: free rotations at
// both ends around the slow part, lambda(u) lambda(v) inside the integrand.
SuperOp dyson_Z(const AtomModel& m, const Correlation& c,
                const CouplingSchedule& lam, double s, double t, int k_max);

// A-priori norm bound exp(4 |t-s| ||f||_L1 ||G||^2 lambda(s)^2), valid for
// non-increasing schedules.
double dyson_norm_bound(const AtomModel& m, const Correlation& c,
                        double lambda_at_s, double s, double t);

// Size of the first omitted order in the exponential majorant:
// (4 |t-s| ||f|| ||G||^2 lambda^2)^(k+1) / (k+1)!.
double dyson_tail_bound(const AtomModel& m, const Correlation& c,
                        double lambda_at_s, double s, double t, int k_max);

struct CompareReport {
  double lhs_norm = 0.0;         // || Z0 - exp(i(t-s)L_S + (t-s) lambda^2 M) ||_2
  double paper_rhs_shape = 0.0;  // lambda^2 |ln lambda|
};

// Compares a window propagator (supplied by the caller: truncated expansion
// on short horizons, exact-oracle output on Van Hove horizons) against the
// weak-coupling semigroup surrogate at constant coupling lambda.
CompareReport compare_Z0_lindblad(const AtomModel& m, const SuperOp& M,
                                  const SuperOp& Z0, double lambda, double s,
                                  double t);

struct RieszSplit {
  SuperOp P;                    // rank-one peripheral projector |1_S><Pi|
  SuperOp R;                    // complement Z - P
  Eigen::MatrixXcd Pi;          // trace-one left fixed functional
  double norm_R = 0.0;          // certified-bracket estimate of ||R||_inf
  double spectral_sep = 0.0;    // |second eigenvalue - 1|
  Eigen::VectorXcd eigenvalues;
};

// Splits a window propagator around the isolated eigenvalue nearest 1:
// P = |right><left| normalized so that Tr(Pi) = 1 and <left|right> = 1.
// Throws if no eigenvalue lies within 1e-6 of 1 or a second eigenvalue
// falls inside the disk of the given radius around 1.
RieszSplit riesz_decomposition(const SuperOp& Z, double disk_radius = 0.5);

struct ContractionProfile {
  std::vector<double> grid;       // window left endpoints s_0..s_{N-1}
  std::vector<double> norm_R;     // ||R(s_i)||
  std::vector<double> pi_dist;    // ||Pi(s_i) - ground projector||_F
};

// Walks the slow grid t_{i+1} = t_i + tau lambda(t_i)^-2 and Riesz-splits
// each window propagator.  The window provider maps (s, t) to Z; pass the
// semigroup surrogate or an exact-oracle wrapper.
ContractionProfile vanhove_contraction_profile(
    const AtomModel& m, const CouplingSchedule& lam, double tau, int n_steps,
    const std::function<SuperOp(double, double)>& window, double t0 = 0.0);

}  // namespace qprep
