// dyson.cpp -- truncated pairing expansion of the reduced window propagator.
#include "qprep/dyson.hpp"

#include "qprep/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace qprep {

namespace {

// Interaction-picture coupling at absolute time x:
// G(x)_{ij} = e^{i x (E_i - E_j)} G_{ij}.
Eigen::MatrixXcd g_at(const AtomModel& m, double x) {
  const int n = m.levels();
  Eigen::MatrixXcd out(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      out(i, j) = std::exp(cd(0.0, x * m.bohr(i, j))) * m.coupling(i, j);
  return out;
}

// Free Heisenberg conjugation over duration a: X -> e^{iaH} X e^{-iaH};
// diagonal in the matrix-unit basis with phases e^{i a eps_ij}.
SuperOp free_conj(const AtomModel& m, double a) {
  const int n = m.levels();
  SuperOp C = SuperOp::Zero(n * n, n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      int idx = so_index(i, j, n);
      C(idx, idx) = std::exp(cd(0.0, a * m.bohr(i, j)));
    }
  return C;
}

// Sum over the 4^k branch assignments for one configuration of k pairs.
// Branch L multiplies the observable from the left with factors +iG(x) in
// ascending time order; branch R multiplies from the right with -iG(x) in
// descending time order.  The pair amplitude is f(u - v) when the anchor u
// sits on the left branch and f(v - u) otherwise.
SuperOp pairing_sum(const AtomModel& m, const Correlation& c,
                    const std::vector<double>& u, const std::vector<double>& v,
                    const std::vector<double>& lam_w) {
  const int n = m.levels();
  const int k = static_cast<int>(u.size());
  const int two_k = 2 * k;

  std::vector<double> times(two_k);
  std::vector<Eigen::MatrixXcd> G(two_k);
  for (int i = 0; i < k; ++i) {
    times[2 * i] = u[i];
    times[2 * i + 1] = v[i];
  }
  for (int a = 0; a < two_k; ++a) G[a] = g_at(m, times[a]);

  std::vector<int> order(two_k);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return times[a] < times[b]; });

  std::vector<cd> ampL(k), ampR(k);
  double lam_total = 1.0;
  for (int i = 0; i < k; ++i) {
    ampL[i] = c.f(u[i] - v[i]);
    ampR[i] = c.f(v[i] - u[i]);
    lam_total *= lam_w[2 * i] * lam_w[2 * i + 1];
  }

  const cd ipos(0.0, 1.0), ineg(0.0, -1.0);
  SuperOp acc = SuperOp::Zero(n * n, n * n);
  Eigen::MatrixXcd AL(n, n), BR(n, n);
  for (int mask = 0; mask < (1 << two_k); ++mask) {
    // bit a set -> time a on the right branch
    AL.setIdentity(n, n);
    BR.setIdentity(n, n);
    for (int p = 0; p < two_k; ++p) {
      int a = order[p];
      if (!(mask & (1 << a))) AL = AL * (ipos * G[a]);
    }
    for (int p = two_k - 1; p >= 0; --p) {
      int a = order[p];
      if (mask & (1 << a)) BR = BR * (ineg * G[a]);
    }
    cd amp(lam_total, 0.0);
    for (int i = 0; i < k; ++i)
      amp *= (mask & (1 << (2 * i))) ? ampR[i] : ampL[i];
    acc += amp * sop_kron(AL, BR.transpose());
  }
  return acc;
}

// Plain Halton sequence with a deterministic digit scramble.
double halton_scrambled(long index, int base, unsigned salt) {
  double f = 1.0, r = 0.0;
  long i = index + 1;
  while (i > 0) {
    f /= base;
    int digit = static_cast<int>(i % base);
    // fixed permutation: rotate digits by a base- and salt-dependent offset
    int perm = digit == 0 ? 0 : 1 + (digit - 1 + salt % (base - 1)) % (base - 1);
    r += f * perm;
    i /= base;
  }
  return r;
}

SuperOp slow_part(const AtomModel& m, const Correlation& c,
                  const std::function<double(double)>& lam, double s, double t,
                  int k_max) {
  if (k_max < 0 || k_max > 3)
    throw std::invalid_argument("expansion order must be in [0, 3]");
  if (!(t > s)) throw std::invalid_argument("window must have t > s");
  const int n = m.levels();
  SuperOp S = SuperOp::Identity(n * n, n * n);

  if (k_max >= 1) {
    // u in (s,t), v in (u,t): 64x64 product rule on the mapped square.
    const GaussLegendre& gl = gauss_legendre(64);
    SuperOp term = SuperOp::Zero(n * n, n * n);
    for (size_t i = 0; i < gl.x.size(); ++i) {
      double u = s + (t - s) * 0.5 * (gl.x[i] + 1.0);
      double ju = (t - s) * 0.5 * gl.w[i];
      for (size_t j = 0; j < gl.x.size(); ++j) {
        double v = u + (t - u) * 0.5 * (gl.x[j] + 1.0);
        double jv = (t - u) * 0.5 * gl.w[j];
        term += (ju * jv) *
                pairing_sum(m, c, {u}, {v}, {lam(u), lam(v)});
      }
    }
    S += term;
  }

  if (k_max >= 2) {
    // u1 < u2, v1 in (u1,t), v2 in (u2,t): nested 24-point rules.
    const GaussLegendre& gl = gauss_legendre(24);
    const int q = static_cast<int>(gl.x.size());
    auto node = [&](double a, double b, int i) {
      return a + (b - a) * 0.5 * (gl.x[i] + 1.0);
    };
    auto wt = [&](double a, double b, int i) {
      return (b - a) * 0.5 * gl.w[i];
    };
    SuperOp term = SuperOp::Zero(n * n, n * n);
    for (int i1 = 0; i1 < q; ++i1) {
      double u1 = node(s, t, i1), w1 = wt(s, t, i1);
      for (int i2 = 0; i2 < q; ++i2) {
        double u2 = node(u1, t, i2), w2 = wt(u1, t, i2);
        for (int j1 = 0; j1 < q; ++j1) {
          double v1 = node(u1, t, j1), w3 = wt(u1, t, j1);
          SuperOp inner = SuperOp::Zero(n * n, n * n);
          for (int j2 = 0; j2 < q; ++j2) {
            double v2 = node(u2, t, j2), w4 = wt(u2, t, j2);
            inner += w4 * pairing_sum(m, c, {u1, u2}, {v1, v2},
                                      {lam(u1), lam(v1), lam(u2), lam(v2)});
          }
          term += (w1 * w2 * w3) * inner;
        }
      }
    }
    S += term;
  }

  if (k_max >= 3) {
    // Quasi-random points: three coordinates sorted onto the anchor simplex,
    // three mapped to the partner intervals.
    const long npts = 1L << 16;
    const int bases[6] = {2, 3, 5, 7, 11, 13};
    SuperOp term = SuperOp::Zero(n * n, n * n);
    std::vector<double> x(6);
    for (long p = 0; p < npts; ++p) {
      for (int d = 0; d < 6; ++d)
        x[d] = halton_scrambled(p, bases[d], 2654435761u >> d);
      double a[3] = {x[0], x[1], x[2]};
      std::sort(a, a + 3);
      std::vector<double> u(3), v(3);
      for (int i = 0; i < 3; ++i) u[i] = s + (t - s) * a[i];
      double jac = std::pow(t - s, 3) / 6.0;
      for (int i = 0; i < 3; ++i) {
        v[i] = u[i] + (t - u[i]) * x[3 + i];
        jac *= (t - u[i]);
      }
      term += jac * pairing_sum(m, c, u, v,
                                {lam(u[0]), lam(v[0]), lam(u[1]), lam(v[1]),
                                 lam(u[2]), lam(v[2])});
    }
    S += term / double(npts);
  }

  return S;
}

}  // namespace

SuperOp dyson_Z0(const AtomModel& m, const Correlation& c, double lambda,
                 double s, double t, int k_max) {
  auto lam = [lambda](double) { return lambda; };
  return free_conj(m, -s) * slow_part(m, c, lam, s, t, k_max) *
         free_conj(m, t);
}

SuperOp dyson_Z(const AtomModel& m, const Correlation& c,
                const CouplingSchedule& lam, double s, double t, int k_max) {
  auto l = [&lam](double x) { return lam.at(x); };
  return free_conj(m, -s) * slow_part(m, c, l, s, t, k_max) * free_conj(m, t);
}

double dyson_norm_bound(const AtomModel& m, const Correlation& c,
                        double lambda_at_s, double s, double t) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m.coupling);
  double g = svd.singularValues()(0);
  return std::exp(4.0 * std::abs(t - s) * c.l1_norm() * g * g * lambda_at_s *
                  lambda_at_s);
}

double dyson_tail_bound(const AtomModel& m, const Correlation& c,
                        double lambda_at_s, double s, double t, int k_max) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m.coupling);
  double g = svd.singularValues()(0);
  double x =
      4.0 * std::abs(t - s) * c.l1_norm() * g * g * lambda_at_s * lambda_at_s;
  double term = 1.0;
  for (int j = 1; j <= k_max + 1; ++j) term *= x / j;
  return term * std::exp(x);
}

CompareReport compare_Z0_lindblad(const AtomModel& m, const SuperOp& M,
                                  const SuperOp& Z0, double lambda, double s,
                                  double t) {
  CompareReport rep;
  SuperOp gen = cd(0.0, 1.0) * (t - s) * liouvillian(m) +
                (t - s) * lambda * lambda * M;
  rep.lhs_norm = op_norm_2(Z0 - sop_expm(gen));
  rep.paper_rhs_shape = lambda * lambda * std::abs(std::log(lambda));
  return rep;
}

RieszSplit riesz_decomposition(const SuperOp& Z, double disk_radius) {
  const int d = static_cast<int>(Z.rows());
  Eigen::ComplexEigenSolver<SuperOp> es(Z);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("eigendecomposition failed");
  const Eigen::VectorXcd& ev = es.eigenvalues();

  int best = 0;
  for (int i = 1; i < d; ++i)
    if (std::abs(ev(i) - 1.0) < std::abs(ev(best) - 1.0)) best = i;
  if (std::abs(ev(best) - 1.0) > 1e-6)
    throw std::runtime_error("no eigenvalue within 1e-6 of 1");
  double sep = std::numeric_limits<double>::infinity();
  for (int i = 0; i < d; ++i) {
    if (i == best) continue;
    double dist = std::abs(ev(i) - 1.0);
    sep = std::min(sep, dist);
    if (dist < disk_radius)
      throw std::runtime_error(
          "second eigenvalue inside the separation disk");
  }

  Eigen::VectorXcd r = es.eigenvectors().col(best);
  // Left eigenvector: eigenvector of Z^dagger at the conjugate eigenvalue.
  Eigen::ComplexEigenSolver<SuperOp> esl(Z.adjoint());
  int bl = 0;
  for (int i = 1; i < d; ++i)
    if (std::abs(esl.eigenvalues()(i) - std::conj(ev(best))) <
        std::abs(esl.eigenvalues()(bl) - std::conj(ev(best))))
      bl = i;
  Eigen::VectorXcd l = esl.eigenvectors().col(bl);
  cd overlap = l.dot(r);  // conj(l)^T r
  if (std::abs(overlap) < 1e-12)
    throw std::runtime_error("degenerate left/right eigenvector overlap");

  RieszSplit out;
  out.eigenvalues = ev;
  out.spectral_sep = sep;
  out.P = r * l.adjoint() / overlap;
  out.R = Z - out.P;
  // Normalize the left functional to trace one and Hermitize.
  const int n = static_cast<int>(std::lround(std::sqrt(double(d))));
  Eigen::MatrixXcd Pi = sop_unvec(l, n);
  Pi = cd(0.5, 0.0) * (Pi + Pi.adjoint().eval());
  cd tr = Pi.trace();
  if (std::abs(tr) < 1e-12)
    throw std::runtime_error("left functional has vanishing trace");
  out.Pi = Pi / tr;
  out.norm_R = op_norm_inf(out.R).estimate;
  return out;
}

ContractionProfile vanhove_contraction_profile(
    const AtomModel& m, const CouplingSchedule& lam, double tau, int n_steps,
    const std::function<SuperOp(double, double)>& window, double t0) {
  const int n = m.levels();
  int gidx = 0;
  for (int i = 1; i < n; ++i)
    if (m.energies(i) < m.energies(gidx)) gidx = i;
  Eigen::MatrixXcd ground = Eigen::MatrixXcd::Zero(n, n);
  ground(gidx, gidx) = 1.0;

  ContractionProfile prof;
  double s = t0;
  for (int i = 0; i < n_steps; ++i) {
    double l = lam.at(s);
    double t = s + tau / (l * l);
    RieszSplit split = riesz_decomposition(window(s, t));
    prof.grid.push_back(s);
    prof.norm_R.push_back(split.norm_R);
    prof.pi_dist.push_back((split.Pi - ground).norm());
    s = t;
  }
  return prof;
}

}  // namespace qprep
