// correlation.hpp -- field two-point functions and their half-line transforms.
//
// Vacuum:   f(t) = int d^3k |phi(k)|^2 exp(-i t |k|)
//                = int_0^inf 4 pi r^2 |phi(r)|^2 exp(-i t r) dr.
// Thermal:  f_beta(t) adds Bose occupation factors at inverse temperature beta:
//           weight (1 + nbar) on exp(-i t r) and nbar on exp(+i t r).
//
// The half-line transform H(eps) = int_0^inf f(s) exp(i s eps) ds carries the
// golden-rule real part pi * (spectral density at eps) plus an imaginary
// (level-shift) part.
#pragma once

#include "qprep/model.hpp"
#include "qprep/quadrature.hpp"

#include <complex>
#include <optional>

namespace qprep {

struct DecayFit {
  double exponent = 0.0;      // alpha in |f(t)| ~ (1+t)^(-alpha)
  double log_residual = 0.0;  // rms residual of the log-log fit
  bool ok = false;            // false if window hit the noise floor
};

class Correlation {
 public:
  explicit Correlation(FormFactor ff);

  const FormFactor& form_factor() const { return ff_; }

  // f(t); closed form amp/(pole + i t)^power when available, else quadrature.
  cd f(double t) const;
  double abs_f(double t) const;
  double f0() const { return f(0.0).real(); }

  // One-sided norms: int_0^inf |f|, int_0^inf s |f(s)| ds.
  double l1_norm() const;
  double first_moment() const;

  // Least-squares exponent of log|f| against log(1+t) over [t_lo, t_hi].
  DecayFit decay_exponent(double t_lo = 10.0, double t_hi = 1000.0,
                          int samples = 80) const;

  // Spectral density rho(eps) = 4 pi eps^2 |phi(eps)|^2 for eps > 0, else 0.
  double spectral_density(double eps) const;

  // H(eps) = int_0^inf f(s) exp(i s eps) ds, adaptive quadrature on [0, s_max]
  // plus an analytic power-law tail (closed-form families).  Re H = pi*rho(eps).
  cd half_line(double eps, double s_max = 200.0) const;

  // <f_probe, phi_t> overlap used in scattering-in checks; angular_l > 0 makes
  // the overlap vanish identically (angular orthogonality).
  cd probe_overlap(const FormFactor& probe, double t, int angular_l = 0) const;

 private:
  FormFactor ff_;
};

class ThermalCorrelation {
 public:
  ThermalCorrelation(FormFactor ff, double beta);

  double beta() const { return beta_; }
  cd f(double t) const;  // time-domain quadrature

  // Thermal spectral density: rho(|eps|)*(1+nbar) for eps > 0,
  // rho(|eps|)*nbar for eps < 0; detailed balance rho_b(eps)/rho_b(-eps)=e^{beta eps}.
  double spectral_density(double eps) const;

  // H_beta(eps) via the frequency-domain identity: pi*rho_beta(eps) + i * PV part.
  cd half_line(double eps) const;

 private:
  double bose(double r) const;  // nbar(r) = 1/(exp(beta r)-1)
  FormFactor ff_;
  double beta_;
};

}  // namespace qprep
