// lindblad.hpp -- weak-coupling generators for the reduced atom dynamics.
//
// Heisenberg-picture generator M acting on n x n observables, built two ways:
//  * closed form: golden-rule real parts from the spectral density
//    rho(eps) = 4 pi eps^2 |phi(eps)|^2 (delta reduced analytically) plus
//    level-shift imaginary parts from half-line transforms;
//  * direct: numerical integration of
//    sum_eps int_0^smax exp(-i s eps) P_eps K_s P_eps ds with the spectral
//    projections P_eps of the free Liouvillian, tail corrected.
// Structure: block diagonal; the population block has zero row sums (unit
// preserved) and a zero first row (ground-state functional is stationary).
#pragma once

#include "qprep/correlation.hpp"
#include "qprep/superop.hpp"

namespace qprep {

// Abstract scalar data a generator construction needs from a reservoir state.
struct CorrelationView {
  std::function<double(double)> rho;  // spectral density at eps
  std::function<cd(double)> hl;       // half-line transform H(eps)
};

CorrelationView vacuum_view(const Correlation& c);
CorrelationView thermal_view(const ThermalCorrelation& c);

// Free Liouvillian L_S(X) = H_S X - X H_S: diagonal with Bohr entries eps_ij.
SuperOp liouvillian(const AtomModel& m);

// Diagonal of L_S as a vector (Bohr frequency per matrix-unit index).
Eigen::VectorXd bohr_diagonal(const AtomModel& m);

struct GoldenRuleReport {
  Eigen::VectorXd rates;                 // decay rate per level (sum over j<i)
  Eigen::MatrixXd transition;            // transition(i,j) = rho(eps_ij)|G_ij|^2
};

// Fermi golden rule with the delta function reduced analytically:
// rate_i = sum_{j<i} 4 pi eps_ij^2 |phi(eps_ij)|^2 |G_ij|^2.
GoldenRuleReport fermi_golden_rule(const AtomModel& m, const Correlation& c);

// Closed-form generator (vacuum or thermal via the view).
SuperOp lindblad_closed_form(const AtomModel& m, const CorrelationView& view);

// Direct kernel integration (closed-form form factors only, for the tail).
SuperOp lindblad_direct(const AtomModel& m, const Correlation& c,
                        double s_max = 500.0, double tol = 1e-9);

struct SpectralCheckReport {
  Eigen::VectorXcd eigenvalues;
  double spectral_gap = 0.0;        // max Re over nonzero eigenvalues (< 0 good)
  int zero_multiplicity = 0;
  double unit_residual = 0.0;       // ||M vec(1)||
  double block_leakage = 0.0;       // entries coupling different Bohr classes
  double ground_row_residual = 0.0; // ||<Pi_11| M|| (vacuum) -- stationarity
};

SpectralCheckReport spectral_check(const AtomModel& m, const SuperOp& M,
                                   double zero_tol = 1e-8);

// Trace-one density matrix rho with M^dagger(rho) = 0 (stationary state of the
// dual/state-picture semigroup).
Eigen::MatrixXcd stationary_state(const SuperOp& M, int n);

// Heisenberg semigroup over an interval: exp(i dt L_S + dt lambda^2 M).
SuperOp semigroup(const AtomModel& m, const SuperOp& M, double lambda,
                  double dt);

// Smallest eigenvalue of the Choi matrix of the state-picture generator,
// projected off the maximally entangled vector (conditional complete
// positivity diagnostic; >= -tol for a Lindblad generator).
double choi_diagnostic(const AtomModel& m, const SuperOp& M, double lambda = 1.0);

}  // namespace qprep
