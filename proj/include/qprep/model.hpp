// model.hpp -- problem data: n-level atom, radial form factor, coupling schedule.
//
// Conventions: the field dispersion is omega(k) = |k|; rotation-invariant form
// factors phi(k) = phi(|k|) reduce all mode integrals to the half line with the
// radial weight 4*pi*r^2.  The interaction is G (x) (a(phi) + a*(phi)) scaled by
// the time-dependent coupling lambda(t).
#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace qprep {

// n-level atom: ascending energies E_1 < ... < E_n and a Hermitian coupling
// operator G in that eigenbasis.
struct AtomModel {
  Eigen::VectorXd energies;
  Eigen::MatrixXcd coupling;

  int levels() const { return static_cast<int>(energies.size()); }
  // Bohr frequency eps_ij = E_i - E_j (1-based math indices, 0-based here).
  double bohr(int i, int j) const { return energies(i) - energies(j); }
};

// Checks: ascending energies, Hermitian G, non-degenerate Bohr gaps where
// required.  Returns a list of human-readable violations (empty == valid).
std::vector<std::string> validate_atom(const AtomModel& m,
                                       bool require_distinct_gaps = false);

// Radial form factor families.  All carry an analytic |phi(r)|^2 and, except
// for tabulated data, a closed-form correlation function of the shape
// f(t) = amp / (pole + i t)^power.
struct FormFactor {
  enum class Kind { Exponential, PowerCutoff, Tabulated };
  Kind kind = Kind::Exponential;

  // exponential: phi(r) = c * exp(-a r)
  // power-cutoff: phi(r) = c * r^mu * exp(-r / K)   (infrared exponent mu >= 0,
  //               soft ultraviolet scale K; a hard cutoff would spoil the
  //               |f(t)| ~ t^-(3+2mu) decay with a boundary 1/t term)
  double c = 1.0;
  double a = 1.0;
  double mu = 0.0;
  double K = 1.0;

  // tabulated: piecewise-linear phi on r_nodes (ascending, r >= 0)
  std::vector<double> r_nodes;
  std::vector<double> phi_vals;

  double phi(double r) const;           // phi(r)
  double weight(double r) const;        // 4*pi*r^2*|phi(r)|^2
  double support_radius() const;        // quadrature upper limit
  bool closed_form() const { return kind != Kind::Tabulated; }

  // Closed-form family parameters: f(t) = amp / (pole + i t)^power.
  double cf_amp() const;
  double cf_pole() const;
  double cf_power() const;

  static FormFactor exponential(double c = 1.0, double a = 1.0);
  static FormFactor power_cutoff(double c, double mu, double K);
  static FormFactor tabulated(std::vector<double> r, std::vector<double> phi);
};

std::vector<std::string> validate_form_factor(const FormFactor& ff);

// Coupling schedule lambda(t).  The decaying family is
//   lambda(t) = (lambda0^(1/gamma) + t)^gamma,  gamma in (-1/2, 0),
// so lambda(0) = lambda0 and lambda decreases slowly (square non-integrable).
struct CouplingSchedule {
  enum class Kind { Constant, Decaying };
  Kind kind = Kind::Decaying;
  double lambda0 = 0.1;
  double gamma = -0.25;

  double at(double t) const;

  static CouplingSchedule constant(double lambda);
  static CouplingSchedule decaying(double lambda0, double gamma);
};

std::vector<std::string> validate_schedule(const CouplingSchedule& s);

}  // namespace qprep
