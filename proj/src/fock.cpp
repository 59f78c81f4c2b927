// fock.cpp -- finite-mode field discretization and truncated propagation.
#include "qprep/fock.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace qprep {

namespace {

// Binomial coefficients, small arguments.
long binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  long r = 1;
  for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return r;
}

}  // namespace

double DiscretizedField::coupling_total() const {
  double s = 0.0;
  for (double x : g) s += x * x;
  return s;
}

cd DiscretizedField::reconstruct_f(double t) const {
  cd s(0.0, 0.0);
  for (size_t m = 0; m < g.size(); ++m)
    s += g[m] * g[m] * std::exp(cd(0.0, -t * omega[m]));
  return s;
}

double DiscretizedField::recurrence_time() const {
  // mean spacing r_max / M for the Gauss rule
  double spacing = r_max / double(omega.size());
  return 2.0 * M_PI / spacing;
}

double DiscretizedField::recurrence_time_at(double freq) const {
  double w = std::clamp(freq, 0.0, r_max);
  double loc = std::sqrt(w * (r_max - w));
  if (loc <= 0.0) loc = 0.5 * r_max;  // boundary: fall back to mid spacing
  // local node spacing ~ pi * loc / M, return time 2 pi / spacing
  return 2.0 * double(omega.size()) / loc;
}

DiscretizedField discretize_field(const FormFactor& ff, int M, double r_max) {
  if (M < 2) throw std::invalid_argument("need at least two modes");
  if (!(r_max > 0.0)) throw std::invalid_argument("r_max must be positive");
  DiscretizedField out;
  out.r_max = r_max;
  std::vector<double> x, w;
  gauss_legendre_ab(M, 0.0, r_max, x, w);
  out.omega.resize(M);
  out.g.resize(M);
  for (int m = 0; m < M; ++m) {
    out.omega[m] = x[m];
    out.g[m] = std::sqrt(std::max(0.0, w[m] * ff.weight(x[m])));
  }
  return out;
}

int modes_for_horizon(double horizon, double r_max, double safety) {
  int M = static_cast<int>(std::ceil(safety * horizon * r_max / (2.0 * M_PI)));
  return std::max(M, 8);
}

int modes_for_horizon_at(double horizon, double r_max, double freq,
                         double safety) {
  double w = std::clamp(freq, 0.0, r_max);
  double loc = std::sqrt(w * (r_max - w));
  if (loc <= 0.0) loc = 0.5 * r_max;
  // require 2 M / loc >= safety * horizon
  int M = static_cast<int>(std::ceil(0.5 * safety * horizon * loc));
  return std::max(M, 8);
}

double reconstruction_error(const DiscretizedField& field,
                            const Correlation& c, double T, int samples) {
  double worst = 0.0;
  for (int i = 0; i <= samples; ++i) {
    double t = T * double(i) / samples;
    worst = std::max(worst, std::abs(field.reconstruct_f(t) - c.f(t)));
  }
  return worst;
}

FockSpace::FockSpace(const AtomModel& atom, const DiscretizedField& field,
                     int n_max)
    : atom_(atom), field_(field), n_(atom.levels()),
      M_(static_cast<int>(field.omega.size())), n_max_(n_max) {
  if (n_max < 1) throw std::invalid_argument("photon cap must be >= 1");
  sector_offset_.assign(n_max_ + 2, 0);
  for (int p = 0; p <= n_max_; ++p)
    sector_offset_[p + 1] = sector_offset_[p] + binom(M_ + p - 1, p);
  occ_dim_ = sector_offset_[n_max_ + 1];
  below_cap_ = sector_offset_[n_max_];
  const double cap_bytes = 4e9;
  if (double(dim()) * 16.0 > cap_bytes)
    throw std::runtime_error("truncated basis exceeds the memory cap");
  build_links();

  diag_.resize(dim());
  for (long occ = 0; occ < occ_dim_; ++occ) {
    std::vector<int> v = occ_unrank(occ);
    double field_e = 0.0;
    for (int m = 0; m < M_; ++m) field_e += v[m] * field_.omega[m];
    for (int a = 0; a < n_; ++a)
      diag_[index(a, occ)] = atom_.energies(a) + field_e;
  }
}

long FockSpace::occ_rank(const std::vector<int>& occ) const {
  // multiset {m_0 <= m_1 <= ... <= m_{p-1}} of occupied modes; the strictly
  // increasing sequence c_i = m_i + i ranks combinations of size p.
  int p = 0;
  long rank = 0;
  int i = 0;
  for (int m = 0; m < M_; ++m)
    for (int rep = 0; rep < occ[m]; ++rep) {
      rank += binom(m + i, i + 1);
      ++i;
      ++p;
    }
  return sector_offset_[p] + rank;
}

std::vector<int> FockSpace::occ_unrank(long rank) const {
  int p = 0;
  while (rank >= sector_offset_[p + 1]) ++p;
  long r = rank - sector_offset_[p];
  std::vector<int> occ(M_, 0);
  // peel off c_{p-1} down to c_0
  for (int i = p - 1; i >= 0; --i) {
    int c = i;  // smallest admissible value of m + i is i (m = 0)
    while (binom(c + 1, i + 1) <= r) ++c;
    r -= binom(c, i + 1);
    ++occ[c - i];
  }
  return occ;
}

void FockSpace::build_links() {
  up_rank_.assign(below_cap_ * M_, -1);
  up_amp_.assign(below_cap_ * M_, 0.0);
  std::vector<int> occ;
  for (long s = 0; s < below_cap_; ++s) {
    occ = occ_unrank(s);
    for (int m = 0; m < M_; ++m) {
      ++occ[m];
      up_rank_[s * M_ + m] = occ_rank(occ);
      up_amp_[s * M_ + m] = std::sqrt(double(occ[m]));
      --occ[m];
    }
  }
}

void FockSpace::apply_H(const Eigen::VectorXcd& x, double lambda,
                        Eigen::VectorXcd& y) const {
  const long d = dim();
  if (y.size() != d) y.resize(d);
  for (long i = 0; i < d; ++i) y(i) = diag_[i] * x(i);
  if (lambda == 0.0) return;

  // H_I = G (x) sum_m g_m (a_m + a_m^dagger): walk creation links once and
  // scatter both directions.
  for (long s = 0; s < below_cap_; ++s) {
    const long base = s * M_;
    for (int m = 0; m < M_; ++m) {
      const double amp = lambda * field_.g[m] * up_amp_[base + m];
      if (amp == 0.0) continue;
      const long u = up_rank_[base + m];
      for (int a = 0; a < n_; ++a) {
        const cd xs = x(index(a, s));
        const cd xu = x(index(a, u));
        for (int b = 0; b < n_; ++b) {
          if (atom_.coupling(b, a) == cd(0.0, 0.0)) continue;
          const cd gba = amp * atom_.coupling(b, a);
          y(index(b, u)) += gba * xs;  // creation
          y(index(b, s)) += gba * xu;  // annihilation
        }
      }
    }
  }
}

double FockSpace::norm_scale(double lambda) const {
  double dmax = 0.0;
  for (double v : diag_) dmax = std::max(dmax, std::abs(v));
  double gsum = 0.0;
  for (double v : field_.g) gsum += v * v;
  double gn = atom_.coupling.cwiseAbs().rowwise().sum().maxCoeff();
  return dmax + 2.0 * std::abs(lambda) * gn * std::sqrt(gsum * n_max_);
}

std::uint64_t FockSpace::basis_hash() const {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](std::uint64_t v) {
    h ^= v;
    h *= 1099511628211ull;
  };
  mix(std::uint64_t(n_));
  mix(std::uint64_t(M_));
  mix(std::uint64_t(n_max_));
  for (double w : field_.omega) {
    std::uint64_t bits;
    std::memcpy(&bits, &w, 8);
    mix(bits);
  }
  for (double w : field_.g) {
    std::uint64_t bits;
    std::memcpy(&bits, &w, 8);
    mix(bits);
  }
  return h;
}

void FockSpace::krylov_step(Eigen::VectorXcd& psi, double lambda, double dt,
                            int krylov_dim) const {
  const long d = dim();
  const int mdim = static_cast<int>(std::min<long>(krylov_dim, d));
  const double beta0 = psi.norm();
  if (beta0 == 0.0) return;

  Eigen::MatrixXcd V(d, mdim);
  V.col(0) = psi / beta0;
  Eigen::VectorXd alpha(mdim), beta(mdim);
  Eigen::VectorXcd w(d);
  int k = 0;
  for (; k < mdim; ++k) {
    apply_H(V.col(k), lambda, w);
    cd a = V.col(k).dot(w);
    alpha(k) = a.real();
    w -= a * V.col(k);
    if (k > 0) w -= cd(beta(k - 1), 0.0) * V.col(k - 1);
    // full reorthogonalization, blocked as one projection for cache locality
    {
      auto B = V.leftCols(k + 1);
      Eigen::VectorXcd coeff = B.adjoint() * w;
      w.noalias() -= B * coeff;
    }
    double b = w.norm();
    beta(k) = b;
    if (b < 1e-13) {
      ++k;
      break;
    }
    if (k + 1 < mdim) V.col(k + 1) = w / b;
  }

  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(k, k);
  for (int i = 0; i < k; ++i) {
    T(i, i) = alpha(i);
    if (i + 1 < k) T(i, i + 1) = T(i + 1, i) = beta(i);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
  Eigen::VectorXcd phases(k);
  for (int i = 0; i < k; ++i)
    phases(i) = std::exp(cd(0.0, -dt * es.eigenvalues()(i)));
  Eigen::VectorXcd e1 = Eigen::VectorXcd::Zero(k);
  e1(0) = beta0;
  Eigen::VectorXcd y =
      es.eigenvectors().cast<cd>() *
      (phases.asDiagonal() * (es.eigenvectors().transpose().cast<cd>() * e1));

  psi.noalias() = V.leftCols(k) * y;
}

Eigen::VectorXcd vacuum_state(const FockSpace& fs, int level) {
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(fs.dim());
  psi(fs.index(level, 0)) = 1.0;
  return psi;
}

Eigen::VectorXcd one_photon_state(const FockSpace& fs, int level,
                                  const std::vector<cd>& profile) {
  if (static_cast<int>(profile.size()) != fs.modes())
    throw std::invalid_argument("profile size must match the mode count");
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(fs.dim());
  std::vector<int> occ(fs.modes(), 0);
  for (int m = 0; m < fs.modes(); ++m) {
    occ[m] = 1;
    psi(fs.index(level, fs.occ_rank(occ))) = profile[m];
    occ[m] = 0;
  }
  double nrm = psi.norm();
  if (nrm < 1e-14) throw std::invalid_argument("vanishing photon profile");
  return psi / nrm;
}

Eigen::VectorXcd propagate_schedule(const FockSpace& fs,
                                    const CouplingSchedule& sched,
                                    const Eigen::VectorXcd& psi0, double s,
                                    double t, const PropagationOptions& opt) {
  if (!(t >= s)) throw std::invalid_argument("need t >= s");
  Eigen::VectorXcd psi = psi0;
  const double norm0 = psi.norm();
  double cur = s;
  // The Krylov step resolves phases up to dt * ||H|| ~ krylov_dim / 4.
  double dt = std::min(opt.dt, 0.25 * opt.krylov_dim /
                                   std::max(1.0, fs.norm_scale(sched.at(s))));
  while (cur < t - 1e-12) {
    double step = std::min(dt, t - cur);
    double lam = sched.at(cur + 0.5 * step);
    fs.krylov_step(psi, lam, step, opt.krylov_dim);
    cur += step;
  }
  if (std::abs(psi.norm() - norm0) > opt.norm_tol)
    throw std::runtime_error("propagation norm drift exceeded tolerance");
  return psi;
}

SuperOp effective_Z(const FockSpace& fs, const CouplingSchedule& sched,
                    double s, double t, const PropagationOptions& opt) {
  const int n = fs.atom_levels();
  const long od = fs.occ_dim();
  std::vector<Eigen::VectorXcd> psi(n);
  for (int j = 0; j < n; ++j)
    psi[j] = propagate_schedule(fs, sched, vacuum_state(fs, j), s, t, opt);

  SuperOp Z(n * n, n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          cd acc(0.0, 0.0);
          const long ia = fs.index(a, 0), jb = fs.index(b, 0);
          for (long ph = 0; ph < od; ++ph)
            acc += std::conj(psi[i](ia + ph)) * psi[j](jb + ph);
          Z(so_index(i, j, n), so_index(a, b, n)) = acc;
        }
  return Z;
}

PrepareResult prepare_experiment(const FockSpace& fs,
                                 const CouplingSchedule& sched,
                                 const Eigen::VectorXcd& psi0,
                                 const Eigen::MatrixXcd& obs, double t_end,
                                 double sample_dt,
                                 const PropagationOptions& opt) {
  const int n = fs.atom_levels();
  const long od = fs.occ_dim();
  PrepareResult out;
  Eigen::VectorXcd psi = psi0;
  double t = 0.0;
  auto record = [&]() {
    TraceRow row;
    row.t = t;
    row.norm = psi.norm();
    row.pops.resize(n);
    for (int a = 0; a < n; ++a)
      row.pops[a] = psi.segment(fs.index(a, 0), od).squaredNorm();
    cd acc(0.0, 0.0);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        if (obs(a, b) == cd(0.0, 0.0)) continue;
        cd ov(0.0, 0.0);
        const long ia = fs.index(a, 0), ib = fs.index(b, 0);
        for (long ph = 0; ph < od; ++ph)
          ov += std::conj(psi(ia + ph)) * obs(a, b) * psi(ib + ph);
        acc += ov;
      }
    row.obs = acc;
    out.rows.push_back(std::move(row));
  };
  record();
  while (t < t_end - 1e-9) {
    double step = std::min(sample_dt, t_end - t);
    psi = propagate_schedule(fs, sched, psi, t, t + step, opt);
    t += step;
    record();
  }
  out.final_state = psi;
  return out;
}

void save_checkpoint(const std::string& path, const FockSpace& fs, double t,
                     const Eigen::VectorXcd& psi) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open checkpoint for writing");
  char header[256];
  std::snprintf(header, sizeof(header),
                "{\"levels\":%d,\"modes\":%d,\"cap\":%d,\"dim\":%ld,"
                "\"basis_hash\":%llu,\"time\":%.17g}\n",
                fs.atom_levels(), fs.modes(), fs.photon_cap(), fs.dim(),
                static_cast<unsigned long long>(fs.basis_hash()), t);
  f.write(header, static_cast<std::streamsize>(std::strlen(header)));
  f.write(reinterpret_cast<const char*>(psi.data()),
          static_cast<std::streamsize>(sizeof(cd) * psi.size()));
}

Eigen::VectorXcd load_checkpoint(const std::string& path, const FockSpace& fs,
                                 double* t_out) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open checkpoint");
  std::string header;
  std::getline(f, header);
  char expect[64];
  std::snprintf(expect, sizeof(expect), "\"basis_hash\":%llu",
                static_cast<unsigned long long>(fs.basis_hash()));
  if (header.find(expect) == std::string::npos)
    throw std::runtime_error("checkpoint basis does not match this space");
  if (t_out) {
    auto pos = header.find("\"time\":");
    *t_out = pos == std::string::npos
                 ? 0.0
                 : std::strtod(header.c_str() + pos + 7, nullptr);
  }
  Eigen::VectorXcd psi(fs.dim());
  f.read(reinterpret_cast<char*>(psi.data()),
         static_cast<std::streamsize>(sizeof(cd) * psi.size()));
  if (!f) throw std::runtime_error("checkpoint truncated");
  return psi;
}

}  // namespace qprep
