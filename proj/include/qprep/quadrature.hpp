// quadrature.hpp -- Gauss-Legendre rules and adaptive Gauss-Kronrod integration.
#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace qprep {

using cd = std::complex<double>;

struct GaussLegendre {
  std::vector<double> x;  // nodes on [-1, 1]
  std::vector<double> w;  // weights
};

// n-point Gauss-Legendre rule on [-1, 1] (Newton iteration on P_n).
const GaussLegendre& gauss_legendre(int n);

// Nodes/weights mapped to [a, b].
void gauss_legendre_ab(int n, double a, double b,
                       std::vector<double>& x, std::vector<double>& w);

struct QuadResult {
  cd value{0.0, 0.0};
  double error = 0.0;       // accumulated error estimate
  long evaluations = 0;
  bool converged = true;
};

// Adaptive Gauss-Kronrod (G7/K15) for complex-valued integrands on [a, b].
// `breakpoints` (optional) seeds the initial subdivision.
QuadResult integrate(const std::function<cd(double)>& f, double a, double b,
                     double abs_tol = 1e-10, double rel_tol = 1e-10,
                     int max_depth = 2000,
                     const std::vector<double>& breakpoints = {});

// Real-valued convenience wrapper.
double integrate_real(const std::function<double(double)>& f, double a, double b,
                      double abs_tol = 1e-10, double rel_tol = 1e-10);

}  // namespace qprep
