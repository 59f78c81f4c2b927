// lindblad.cpp -- closed-form and directly integrated weak-coupling generators.
#include "qprep/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <stdexcept>

namespace qprep {

namespace {

const cd kI(0.0, 1.0);

// Group superoperator indices by Bohr frequency (distinct-gap classes).
std::vector<int> bohr_classes(const Eigen::VectorXd& d, double tol = 1e-9) {
  const int m = static_cast<int>(d.size());
  std::vector<int> cls(m, -1);
  std::vector<double> reps;
  for (int a = 0; a < m; ++a) {
    for (size_t r = 0; r < reps.size(); ++r)
      if (std::abs(d(a) - reps[r]) < tol) {
        cls[a] = static_cast<int>(r);
        break;
      }
    if (cls[a] < 0) {
      cls[a] = static_cast<int>(reps.size());
      reps.push_back(d(a));
    }
  }
  return cls;
}

struct MatSeg {
  double a, b;
  Eigen::MatrixXcd val;
  double err;
};

// GK15 on a matrix-valued integrand; error in max-abs norm.
MatSeg mat_gk15(const std::function<Eigen::MatrixXcd(double)>& F, double a,
                double b) {
  static const double xgk[8] = {0.991455371120813, 0.949107912342759,
                                0.864864423359769, 0.741531185599394,
                                0.586087235467691, 0.405845151377397,
                                0.207784955007898, 0.0};
  static const double wgk[8] = {0.022935322010529, 0.063092092629979,
                                0.104790010322250, 0.140653259715525,
                                0.169004726639267, 0.190350578064785,
                                0.204432940075298, 0.209482141084728};
  static const double wg[4] = {0.129484966168870, 0.279705391489277,
                               0.381830050505119, 0.417959183673469};
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  Eigen::MatrixXcd resk, resg;
  for (int j = 0; j < 8; ++j) {
    if (j == 7) {
      Eigen::MatrixXcd fv = F(c);
      if (resk.size() == 0) {
        resk = Eigen::MatrixXcd::Zero(fv.rows(), fv.cols());
        resg = resk;
      }
      resk += wgk[7] * fv;
      resg += wg[3] * fv;
    } else {
      Eigen::MatrixXcd f1 = F(c - h * xgk[j]);
      Eigen::MatrixXcd f2 = F(c + h * xgk[j]);
      if (resk.size() == 0) {
        resk = Eigen::MatrixXcd::Zero(f1.rows(), f1.cols());
        resg = resk;
      }
      resk += wgk[j] * (f1 + f2);
      if (j % 2 == 1) resg += wg[j / 2] * (f1 + f2);
    }
  }
  MatSeg s;
  s.a = a;
  s.b = b;
  s.val = resk * h;
  s.err = (resk - resg).cwiseAbs().maxCoeff() * std::abs(h);
  return s;
}

Eigen::MatrixXcd mat_integrate(const std::function<Eigen::MatrixXcd(double)>& F,
                               const std::vector<double>& pts, double tol,
                               int max_splits = 4000) {
  auto cmp = [](const MatSeg& x, const MatSeg& y) { return x.err < y.err; };
  std::priority_queue<MatSeg, std::vector<MatSeg>, decltype(cmp)> heap(cmp);
  Eigen::MatrixXcd total;
  double toterr = 0.0;
  for (size_t i = 0; i + 1 < pts.size(); ++i) {
    MatSeg s = mat_gk15(F, pts[i], pts[i + 1]);
    if (total.size() == 0) total = Eigen::MatrixXcd::Zero(s.val.rows(), s.val.cols());
    total += s.val;
    toterr += s.err;
    heap.push(std::move(s));
  }
  int splits = 0;
  while (toterr > tol && splits < max_splits && !heap.empty()) {
    MatSeg s = heap.top();
    heap.pop();
    double mid = 0.5 * (s.a + s.b);
    if (mid <= s.a || mid >= s.b) break;
    MatSeg l = mat_gk15(F, s.a, mid);
    MatSeg r = mat_gk15(F, mid, s.b);
    total += l.val + r.val - s.val;
    toterr += l.err + r.err - s.err;
    heap.push(std::move(l));
    heap.push(std::move(r));
    ++splits;
  }
  return total;
}

}  // namespace

CorrelationView vacuum_view(const Correlation& c) {
  CorrelationView v;
  v.rho = [&c](double eps) { return c.spectral_density(eps); };
  v.hl = [&c](double eps) { return c.half_line(eps); };
  return v;
}

CorrelationView thermal_view(const ThermalCorrelation& c) {
  CorrelationView v;
  v.rho = [&c](double eps) { return c.spectral_density(eps); };
  v.hl = [&c](double eps) { return c.half_line(eps); };
  return v;
}

Eigen::VectorXd bohr_diagonal(const AtomModel& m) {
  const int n = m.levels();
  Eigen::VectorXd d(n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) d(so_index(i, j, n)) = m.bohr(i, j);
  return d;
}

SuperOp liouvillian(const AtomModel& m) {
  return bohr_diagonal(m).cast<cd>().asDiagonal();
}

GoldenRuleReport fermi_golden_rule(const AtomModel& m, const Correlation& c) {
  const int n = m.levels();
  GoldenRuleReport rep;
  rep.rates = Eigen::VectorXd::Zero(n);
  rep.transition = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      double eps = m.bohr(i, j);
      double t = c.spectral_density(eps) * std::norm(m.coupling(i, j));
      rep.transition(i, j) = t;  // nonzero only for i > j (eps > 0)
      if (j < i) rep.rates(i) += t;
    }
  return rep;
}

SuperOp lindblad_closed_form(const AtomModel& m, const CorrelationView& view) {
  const int n = m.levels();
  SuperOp M = SuperOp::Zero(n * n, n * n);
  const Eigen::MatrixXcd& G = m.coupling;

  // Cache half-line transforms at the Bohr frequencies.
  std::map<long long, cd> hl_cache;
  auto HL = [&](double eps) {
    long long key = llround(eps * 1e12);
    auto it = hl_cache.find(key);
    if (it == hl_cache.end()) it = hl_cache.emplace(key, view.hl(eps)).first;
    return it->second;
  };

  // Coherence block: diagonal entries m_ij for i != j.
  // Real parts use pi*rho (delta identity); imaginary parts use Im H.
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      cd m_ij = 2.0 * M_PI * view.rho(0.0) * G(i, i).real() * G(j, j).real();
      for (int k = 0; k < n; ++k) {
        double g2 = std::norm(G(i, k));
        if (g2 != 0.0) {
          double eps = m.bohr(i, k);
          m_ij -= g2 * cd(M_PI * view.rho(eps), -HL(eps).imag());
        }
      }
      for (int l = 0; l < n; ++l) {
        double g2 = std::norm(G(j, l));
        if (g2 != 0.0) {
          double eps = m.bohr(j, l);
          m_ij -= g2 * cd(M_PI * view.rho(eps), HL(eps).imag());
        }
      }
      int a = so_index(i, j, n);
      M(a, a) = m_ij;
    }

  // Population block: M maps Pi_ii -> sum_k A_ki Pi_kk with
  // A_ki = 2 pi rho(eps_ki) |G_ki|^2 (k != i), columns summing to zero.
  for (int i = 0; i < n; ++i) {
    double diag = 0.0;
    for (int k = 0; k < n; ++k) {
      if (k == i) continue;
      double g2 = std::norm(G(k, i));
      double out_rate = 2.0 * M_PI * view.rho(m.bohr(k, i)) * g2;
      M(so_index(k, k, n), so_index(i, i, n)) = out_rate;
      diag -= 2.0 * M_PI * view.rho(m.bohr(i, k)) * g2;
    }
    M(so_index(i, i, n), so_index(i, i, n)) = diag;
  }
  return M;
}

SuperOp lindblad_direct(const AtomModel& m, const Correlation& c,
                        double s_max, double tol) {
  const int n = m.levels();
  const int n2 = n * n;
  const Eigen::MatrixXcd& G = m.coupling;
  const Eigen::VectorXd d = bohr_diagonal(m);
  const std::vector<int> cls = bohr_classes(d);

  const SuperOp L = left_mult(G);
  const SuperOp R = right_mult_star(G);
  const SuperOp P1 = L - R;

  // K_s = (f(s) R - f(-s) L) E(s) (L - R), with E(s) = diag(exp(i s d)).
  // Integrand: I_ab(s) = exp(-i s d_a) K_s[a,b] restricted to equal classes.
  auto integrand = [&](double s) {
    cd fs = c.f(s);
    Eigen::VectorXcd ph(n2);
    for (int a = 0; a < n2; ++a) ph(a) = std::exp(kI * s * d(a));
    SuperOp K = (fs * R - std::conj(fs) * L) * (ph.asDiagonal() * P1);
    for (int a = 0; a < n2; ++a) {
      cd out_ph = std::exp(-kI * s * d(a));
      for (int b = 0; b < n2; ++b)
        K(a, b) = (cls[a] == cls[b]) ? K(a, b) * out_ph : cd(0.0, 0.0);
    }
    return K;
  };

  // Seed segments: oscillation-resolved while f is sizeable, then geometric.
  double wmax = 1.0;
  for (int a = 0; a < n2; ++a) wmax = std::max(wmax, 2.0 * std::abs(d(a)));
  std::vector<double> pts;
  double dense_end = std::min(s_max, 60.0);
  for (double x = 0.0; x < dense_end; x += M_PI / wmax) pts.push_back(x);
  for (double x = dense_end; x < s_max; x *= 1.3) pts.push_back(x);
  pts.push_back(s_max);

  SuperOp M = mat_integrate(integrand, pts, tol);

  // Tail correction past s_max via half-line transform tails per frequency.
  if (c.form_factor().closed_form()) {
    std::map<long long, cd> tail_cache;
    auto tail_hl = [&](double x) {
      long long key = llround(x * 1e12);
      auto it = tail_cache.find(key);
      if (it == tail_cache.end()) {
        cd head = integrate(
                      [&](double s) { return c.f(s) * std::exp(kI * x * s); },
                      0.0, s_max, 1e-13, 1e-13, 6000)
                      .value;
        it = tail_cache.emplace(key, c.half_line(x) - head).first;
      }
      return it->second;
    };
    // E(s) = sum_theta exp(i s theta) Q_theta over Bohr classes.
    std::vector<int> dcls = bohr_classes(d);
    int nclasses = 1 + *std::max_element(dcls.begin(), dcls.end());
    for (int q = 0; q < nclasses; ++q) {
      Eigen::VectorXcd sel = Eigen::VectorXcd::Zero(n2);
      double theta = 0.0;
      for (int a = 0; a < n2; ++a)
        if (dcls[a] == q) {
          sel(a) = 1.0;
          theta = d(a);
        }
      SuperOp RQ = R * (sel.asDiagonal() * P1);
      SuperOp LQ = L * (sel.asDiagonal() * P1);
      for (int a = 0; a < n2; ++a) {
        cd tf = tail_hl(theta - d(a));
        cd tb = std::conj(tail_hl(d(a) - theta));
        for (int b = 0; b < n2; ++b)
          if (cls[a] == cls[b]) M(a, b) += tf * RQ(a, b) - tb * LQ(a, b);
      }
    }
  }
  return M;
}

SpectralCheckReport spectral_check(const AtomModel& m, const SuperOp& M,
                                   double zero_tol) {
  SpectralCheckReport rep;
  const int n = m.levels();
  Eigen::ComplexEigenSolver<SuperOp> es(M);
  rep.eigenvalues = es.eigenvalues();
  rep.spectral_gap = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < rep.eigenvalues.size(); ++i) {
    cd ev = rep.eigenvalues(i);
    if (std::abs(ev) < zero_tol)
      ++rep.zero_multiplicity;
    else
      rep.spectral_gap = std::max(rep.spectral_gap, ev.real());
  }
  rep.unit_residual =
      (M * sop_vec(Eigen::MatrixXcd::Identity(n, n))).norm();
  const Eigen::VectorXd d = bohr_diagonal(m);
  const std::vector<int> cls = bohr_classes(d);
  rep.block_leakage = 0.0;
  for (int a = 0; a < n * n; ++a)
    for (int b = 0; b < n * n; ++b)
      if (cls[a] != cls[b])
        rep.block_leakage = std::max(rep.block_leakage, std::abs(M(a, b)));
  Eigen::MatrixXcd ground = Eigen::MatrixXcd::Zero(n, n);
  ground(0, 0) = 1.0;
  rep.ground_row_residual = (sop_vec(ground).adjoint() * M).norm();
  return rep;
}

Eigen::MatrixXcd stationary_state(const SuperOp& M, int n) {
  Eigen::JacobiSVD<SuperOp> svd(M, Eigen::ComputeFullU);
  // Left null vector of M = kernel of M^dagger.
  Eigen::VectorXcd v = svd.matrixU().col(n * n - 1);
  Eigen::MatrixXcd rho = sop_unvec(v, n);
  rho = 0.5 * (rho + rho.adjoint());
  double tr = rho.trace().real();  // Hermitian, so the trace is real
  if (std::abs(tr) < 1e-14)
    throw std::runtime_error("stationary state has vanishing trace");
  return rho / tr;
}

SuperOp semigroup(const AtomModel& m, const SuperOp& M, double lambda,
                  double dt) {
  SuperOp gen = kI * dt * liouvillian(m) + dt * lambda * lambda * M;
  return sop_expm(gen);
}

double choi_diagnostic(const AtomModel& m, const SuperOp& M, double lambda) {
  const int n = m.levels();
  const int n2 = n * n;
  // State-picture generator: Hilbert-Schmidt adjoint of the Heisenberg one.
  SuperOp gen = (kI * liouvillian(m) + lambda * lambda * M).adjoint();
  // Choi[(a,c),(b,d)] = gen[(a,b),(c,d)].
  Eigen::MatrixXcd C(n2, n2);
  for (int a = 0; a < n; ++a)
    for (int c = 0; c < n; ++c)
      for (int b = 0; b < n; ++b)
        for (int dd = 0; dd < n; ++dd)
          C(so_index(a, c, n), so_index(b, dd, n)) =
              gen(so_index(a, b, n), so_index(c, dd, n));
  C = 0.5 * (C + Eigen::MatrixXcd(C.adjoint()));
  // Project off the maximally entangled direction vec(1)/sqrt(n).
  Eigen::VectorXcd mvec = sop_vec(Eigen::MatrixXcd::Identity(n, n));
  mvec.normalize();
  Eigen::MatrixXcd P =
      Eigen::MatrixXcd::Identity(n2, n2) - mvec * mvec.adjoint();
  Eigen::MatrixXcd PCP = P * C * P;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(PCP);
  // Ignore the eigenvalue forced to zero along mvec: take the smallest
  // eigenvalue after removing the one of least magnitude if it is ~0.
  Eigen::VectorXd ev = es.eigenvalues();
  double min_ev = ev(0);
  if (std::abs(min_ev) < 1e-12 && ev.size() > 1) min_ev = std::min(0.0, ev(1));
  return min_ev;
}

}  // namespace qprep
