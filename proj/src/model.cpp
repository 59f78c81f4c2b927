// model.cpp -- validation and evaluation of atoms, form factors, schedules.
#include "qprep/model.hpp"

#include <cmath>
#include <sstream>

namespace qprep {

std::vector<std::string> validate_atom(const AtomModel& m,
                                       bool require_distinct_gaps) {
  std::vector<std::string> bad;
  const int n = m.levels();
  if (n < 2) bad.push_back("atom needs at least two levels");
  if (m.coupling.rows() != n || m.coupling.cols() != n)
    bad.push_back("coupling operator dimension does not match energies");
  for (int i = 0; i + 1 < n; ++i)
    if (!(m.energies(i) < m.energies(i + 1)))
      bad.push_back("energies must be strictly ascending");
  if (m.coupling.rows() == n) {
    double herm = (m.coupling - m.coupling.adjoint()).norm();
    if (herm > 1e-12 * std::max(1.0, m.coupling.norm()))
      bad.push_back("coupling operator is not Hermitian");
  }
  if (require_distinct_gaps) {
    std::vector<double> gaps;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < i; ++j) gaps.push_back(m.energies(i) - m.energies(j));
    for (size_t p = 0; p < gaps.size(); ++p)
      for (size_t q = p + 1; q < gaps.size(); ++q)
        if (std::abs(gaps[p] - gaps[q]) < 1e-9)
          bad.push_back("Bohr gaps are degenerate");
  }
  return bad;
}

double FormFactor::phi(double r) const {
  if (r < 0.0) return 0.0;
  switch (kind) {
    case Kind::Exponential:
      return c * std::exp(-a * r);
    case Kind::PowerCutoff:
      return c * std::pow(r, mu) * std::exp(-r / K);
    case Kind::Tabulated: {
      if (r_nodes.empty() || r < r_nodes.front() || r > r_nodes.back())
        return 0.0;
      auto it = std::lower_bound(r_nodes.begin(), r_nodes.end(), r);
      size_t hi = static_cast<size_t>(it - r_nodes.begin());
      if (hi == 0) return phi_vals.front();
      size_t lo = hi - 1;
      double t = (r - r_nodes[lo]) / (r_nodes[hi] - r_nodes[lo]);
      return (1.0 - t) * phi_vals[lo] + t * phi_vals[hi];
    }
  }
  return 0.0;
}

double FormFactor::weight(double r) const {
  double p = phi(r);
  return 4.0 * M_PI * r * r * p * p;
}

double FormFactor::support_radius() const {
  switch (kind) {
    case Kind::Exponential:
      return 40.0 / a;  // exp(-2ar) below 4e-35 past here
    case Kind::PowerCutoff:
      return (40.0 + 10.0 * mu) * K;
    case Kind::Tabulated:
      return r_nodes.empty() ? 0.0 : r_nodes.back();
  }
  return 0.0;
}

double FormFactor::cf_amp() const {
  // f(t) = 4*pi*c^2 * Gamma(3+2mu) / (pole + i t)^(3+2mu)
  if (kind == Kind::Exponential) return 8.0 * M_PI * c * c;
  return 4.0 * M_PI * c * c * std::tgamma(3.0 + 2.0 * mu);
}

double FormFactor::cf_pole() const {
  return kind == Kind::Exponential ? 2.0 * a : 2.0 / K;
}

double FormFactor::cf_power() const {
  return kind == Kind::Exponential ? 3.0 : 3.0 + 2.0 * mu;
}

FormFactor FormFactor::exponential(double c, double a) {
  FormFactor ff;
  ff.kind = Kind::Exponential;
  ff.c = c;
  ff.a = a;
  return ff;
}

FormFactor FormFactor::power_cutoff(double c, double mu, double K) {
  FormFactor ff;
  ff.kind = Kind::PowerCutoff;
  ff.c = c;
  ff.mu = mu;
  ff.K = K;
  return ff;
}

FormFactor FormFactor::tabulated(std::vector<double> r, std::vector<double> phi) {
  FormFactor ff;
  ff.kind = Kind::Tabulated;
  ff.r_nodes = std::move(r);
  ff.phi_vals = std::move(phi);
  return ff;
}

std::vector<std::string> validate_form_factor(const FormFactor& ff) {
  std::vector<std::string> bad;
  switch (ff.kind) {
    case FormFactor::Kind::Exponential:
      if (ff.c <= 0.0 || ff.a <= 0.0)
        bad.push_back("exponential form factor needs c > 0, a > 0");
      break;
    case FormFactor::Kind::PowerCutoff:
      if (ff.c <= 0.0 || ff.K <= 0.0 || ff.mu < 0.0)
        bad.push_back("power-cutoff form factor needs c > 0, K > 0, mu >= 0");
      break;
    case FormFactor::Kind::Tabulated:
      if (ff.r_nodes.size() < 2 || ff.r_nodes.size() != ff.phi_vals.size())
        bad.push_back("tabulated form factor needs matching (r, phi) columns");
      for (size_t i = 0; i + 1 < ff.r_nodes.size(); ++i)
        if (!(ff.r_nodes[i] < ff.r_nodes[i + 1]))
          bad.push_back("tabulated radii must be strictly ascending");
      if (!ff.r_nodes.empty() && ff.r_nodes.front() < 0.0)
        bad.push_back("tabulated radii must be non-negative");
      break;
  }
  return bad;
}

double CouplingSchedule::at(double t) const {
  if (kind == Kind::Constant) return lambda0;
  return std::pow(std::pow(lambda0, 1.0 / gamma) + t, gamma);
}

CouplingSchedule CouplingSchedule::constant(double lambda) {
  CouplingSchedule s;
  s.kind = Kind::Constant;
  s.lambda0 = lambda;
  return s;
}

CouplingSchedule CouplingSchedule::decaying(double lambda0, double gamma) {
  CouplingSchedule s;
  s.kind = Kind::Decaying;
  s.lambda0 = lambda0;
  s.gamma = gamma;
  return s;
}

std::vector<std::string> validate_schedule(const CouplingSchedule& s) {
  std::vector<std::string> bad;
  if (!(s.lambda0 > 0.0 && s.lambda0 < 1.0))
    bad.push_back("lambda0 must lie in (0, 1)");
  if (s.kind == CouplingSchedule::Kind::Decaying &&
      !(s.gamma > -0.5 && s.gamma < 0.0))
    bad.push_back("gamma must lie in (-1/2, 0)");
  return bad;
}

}  // namespace qprep
