// correlation.cpp -- two-point functions, transforms, and decay diagnostics.
#include "qprep/correlation.hpp"

#include <cmath>
#include <stdexcept>

namespace qprep {

namespace {

const cd kI(0.0, 1.0);

// Breakpoints spaced by the oscillation period to seed adaptive quadrature.
std::vector<double> osc_breakpoints(double a, double b, double freq,
                                    int max_pts = 4000) {
  std::vector<double> pts;
  if (freq <= 0.0) return pts;
  double step = M_PI / freq;
  if ((b - a) / step > max_pts) step = (b - a) / max_pts;
  for (double x = a + step; x < b; x += step) pts.push_back(x);
  return pts;
}

// Principal-value integral  PV int_0^R w(r) / (eps - r) dr  for smooth w.
double pv_integral(const std::function<double(double)>& w, double eps,
                   double R) {
  if (eps <= 0.0 || eps >= R) {
    return integrate_real([&](double r) { return w(r) / (eps - r); }, 0.0, R,
                          1e-11, 1e-11);
  }
  double delta = 0.5 * std::min({eps, R - eps, 1.0});
  double weps = w(eps);
  double outer =
      integrate_real([&](double r) { return w(r) / (eps - r); }, 0.0,
                     eps - delta, 1e-11, 1e-11) +
      integrate_real([&](double r) { return w(r) / (eps - r); }, eps + delta, R,
                     1e-11, 1e-11);
  // Symmetric window: the constant part of w integrates to zero.
  double inner = integrate_real(
      [&](double r) {
        double d = eps - r;
        if (std::abs(d) < 1e-14) return 0.0;  // removable (w smooth)
        return (w(r) - weps) / d;
      },
      eps - delta, eps + delta, 1e-11, 1e-11);
  return outer + inner;
}

}  // namespace

Correlation::Correlation(FormFactor ff) : ff_(std::move(ff)) {
  auto bad = validate_form_factor(ff_);
  if (!bad.empty()) throw std::invalid_argument("form factor: " + bad.front());
}

cd Correlation::f(double t) const {
  if (ff_.closed_form()) {
    return ff_.cf_amp() *
           std::pow(cd(ff_.cf_pole(), t), -ff_.cf_power());
  }
  double R = ff_.support_radius();
  auto integrand = [&](double r) {
    return ff_.weight(r) * std::exp(-kI * t * r);
  };
  return integrate(integrand, 0.0, R, 1e-11, 1e-11, 4000,
                   osc_breakpoints(0.0, R, std::abs(t)))
      .value;
}

double Correlation::abs_f(double t) const {
  if (ff_.closed_form()) {
    double b = ff_.cf_pole();
    return ff_.cf_amp() * std::pow(b * b + t * t, -0.5 * ff_.cf_power());
  }
  return std::abs(f(t));
}

double Correlation::l1_norm() const {
  if (ff_.closed_form()) {
    double A = ff_.cf_amp(), b = ff_.cf_pole(), p = ff_.cf_power();
    // int_0^inf (b^2+t^2)^(-p/2) dt = (sqrt(pi)/2) G((p-1)/2)/G(p/2) b^(1-p)
    return A * 0.5 * std::sqrt(M_PI) * std::tgamma(0.5 * (p - 1.0)) /
           std::tgamma(0.5 * p) * std::pow(b, 1.0 - p);
  }
  const double T = 400.0;
  double head =
      integrate_real([&](double t) { return std::abs(f(t)); }, 0.0, T, 1e-8, 1e-8);
  DecayFit fit = decay_exponent(T / 4.0, T);
  if (!fit.ok || fit.exponent <= 1.0)
    throw std::runtime_error("l1 norm: tail not integrable or unresolved");
  // |f(t)| ~ C t^-alpha for t > T  =>  tail = |f(T)| T / (alpha - 1)
  return head + std::abs(f(T)) * T / (fit.exponent - 1.0);
}

double Correlation::first_moment() const {
  if (ff_.closed_form()) {
    double A = ff_.cf_amp(), b = ff_.cf_pole(), p = ff_.cf_power();
    return A * std::pow(b, 2.0 - p) / (p - 2.0);
  }
  const double T = 400.0;
  double head = integrate_real([&](double t) { return t * std::abs(f(t)); },
                               0.0, T, 1e-8, 1e-8);
  DecayFit fit = decay_exponent(T / 4.0, T);
  if (!fit.ok || fit.exponent <= 2.0)
    throw std::runtime_error("first moment: needs decay exponent > 2");
  return head + std::abs(f(T)) * T * T / (fit.exponent - 2.0);
}

DecayFit Correlation::decay_exponent(double t_lo, double t_hi,
                                     int samples) const {
  DecayFit fit;
  if (!(t_hi > t_lo && t_lo > 0.0) || samples < 4) return fit;
  const double floor_abs = 1e-14 * std::max(1.0, f0());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::vector<double> xs, ys;
  for (int i = 0; i < samples; ++i) {
    double t = t_lo * std::pow(t_hi / t_lo, double(i) / (samples - 1));
    double v = abs_f(t);
    if (v < floor_abs) return fit;  // window reaches the noise floor
    double x = std::log1p(t), y = std::log(v);
    xs.push_back(x);
    ys.push_back(y);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  double n = samples;
  double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  double icpt = (sy - slope * sx) / n;
  double rss = 0;
  for (int i = 0; i < samples; ++i) {
    double r = ys[i] - (slope * xs[i] + icpt);
    rss += r * r;
  }
  fit.exponent = -slope;
  fit.log_residual = std::sqrt(rss / n);
  fit.ok = true;
  return fit;
}

double Correlation::spectral_density(double eps) const {
  if (eps <= 0.0) return 0.0;
  return ff_.weight(eps);
}

cd Correlation::half_line(double eps, double s_max) const {
  if (!ff_.closed_form()) {
    // Tabulated data: frequency-domain identity
    //   H(eps) = pi * rho(eps) + i * PV int_0^R w(r)/(eps - r) dr.
    double R = ff_.support_radius();
    auto w = [&](double r) { return ff_.weight(r); };
    return cd(M_PI * spectral_density(eps), pv_integral(w, eps, R));
  }
  const double A = ff_.cf_amp(), b = ff_.cf_pole(), p = ff_.cf_power();
  auto g = [&](double s) { return A * std::pow(cd(b, s), -p); };
  const double aeps = std::abs(eps);
  // Quadrature window: push S out until eps*S is large so the integration-by-
  // parts tail converges; for eps == 0 the tail is exact at any S.
  double S = s_max;
  if (aeps > 1e-14 && aeps * S < 40.0) S = std::min(40.0 / aeps, 2e6);
  auto integrand = [&](double s) { return g(s) * std::exp(kI * eps * s); };
  cd head =
      integrate(integrand, 0.0, S, 1e-12, 1e-12, 6000,
                osc_breakpoints(0.0, S, aeps))
          .value;
  cd tail(0.0, 0.0);
  if (aeps <= 1e-14) {
    // int_S^inf A (b+is)^-p ds = A (b+iS)^(1-p) / (i (p-1))
    tail = A * std::pow(cd(b, S), 1.0 - p) / (kI * (p - 1.0));
  } else {
    // Repeated integration by parts: sum_k (-1)^(k+1) g^(k)(S) e^(iS eps)/(i eps)^(k+1)
    cd phase = std::exp(kI * eps * S);
    cd gk = g(S);          // g^(k)(S), k = 0 initially
    double poch = 1.0;     // (p)_k
    cd denom = kI * eps;   // (i eps)^(k+1)
    for (int k = 0; k < 12; ++k) {
      cd term = ((k % 2 == 0) ? -1.0 : 1.0) * gk * phase / denom;
      tail += term;
      if (std::abs(term) < 1e-16 * (1.0 + std::abs(head))) break;
      // g^(k+1)(s) = -i (p+k) * [g^(k)(s) / (b+is)]
      gk = -kI * (p + k) * gk / cd(b, S);
      poch *= (p + k);
      denom *= kI * eps;
    }
  }
  return head + tail;
}

cd Correlation::probe_overlap(const FormFactor& probe, double t,
                              int angular_l) const {
  if (angular_l > 0) return cd(0.0, 0.0);  // angular orthogonality
  double R = std::min(ff_.support_radius(), probe.support_radius());
  auto integrand = [&](double r) {
    return 4.0 * M_PI * r * r * probe.phi(r) * ff_.phi(r) *
           std::exp(-kI * t * r);
  };
  return integrate(integrand, 0.0, R, 1e-11, 1e-11, 4000,
                   osc_breakpoints(0.0, R, std::abs(t)))
      .value;
}

ThermalCorrelation::ThermalCorrelation(FormFactor ff, double beta)
    : ff_(std::move(ff)), beta_(beta) {
  if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
}

double ThermalCorrelation::bose(double r) const {
  return 1.0 / std::expm1(beta_ * r);
}

cd ThermalCorrelation::f(double t) const {
  double R = ff_.support_radius();
  auto integrand = [&](double r) -> cd {
    if (r < 1e-300) return cd(0.0, 0.0);
    double w = ff_.weight(r);
    double nb = bose(r);
    return w * ((1.0 + nb) * std::exp(-kI * t * r) + nb * std::exp(kI * t * r));
  };
  return integrate(integrand, 0.0, R, 1e-10, 1e-10, 4000,
                   osc_breakpoints(0.0, R, std::abs(t)))
      .value;
}

double ThermalCorrelation::spectral_density(double eps) const {
  if (eps == 0.0) return 0.0;
  double r = std::abs(eps);
  double w = ff_.weight(r);
  double nb = bose(r);
  return eps > 0.0 ? w * (1.0 + nb) : w * nb;
}

cd ThermalCorrelation::half_line(double eps) const {
  // H_beta(eps) = pi * rho_beta(eps)
  //             + i PV int_0^R w(r) [ (1+nbar)/(eps-r) + nbar/(eps+r) ] dr.
  double R = ff_.support_radius();
  auto w_minus = [&](double r) {
    return r < 1e-300 ? 0.0 : ff_.weight(r) * (1.0 + bose(r));
  };
  auto w_plus = [&](double r) {
    return r < 1e-300 ? 0.0 : ff_.weight(r) * bose(r);
  };
  double im = pv_integral(w_minus, eps, R) - pv_integral(w_plus, -eps, R);
  return cd(M_PI * spectral_density(eps), im);
}

}  // namespace qprep
