// test_util.hpp -- shared helpers for unit tests.
#pragma once

#include "qprep/model.hpp"

#include <random>

namespace qprep::testutil {

// Random atom with ascending energies, distinct Bohr gaps, Hermitian coupling
// with nonzero lower off-diagonals (so every level can decay).
inline AtomModel random_model(int n, std::mt19937& rng) {
  std::uniform_real_distribution<double> u(0.2, 1.0);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int attempt = 0; attempt < 100; ++attempt) {
    AtomModel m;
    m.energies = Eigen::VectorXd(n);
    double e = 0.0;
    for (int i = 0; i < n; ++i) {
      m.energies(i) = e;
      e += u(rng) + 0.05 * i;  // irregular ascending gaps
    }
    Eigen::MatrixXcd A(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) A(i, j) = qprep::cd(g(rng), g(rng));
    m.coupling = 0.5 * (A + A.adjoint());
    bool ok = validate_atom(m, /*require_distinct_gaps=*/true).empty();
    for (int i = 0; i < n && ok; ++i)
      for (int j = 0; j < i; ++j)
        if (std::abs(m.coupling(i, j)) < 0.05) ok = false;
    if (ok) return m;
  }
  throw std::runtime_error("could not draw a valid random model");
}

}  // namespace qprep::testutil
