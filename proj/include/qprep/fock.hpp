// fock.hpp -- exact finite-mode oracle on a truncated photon-number space.
//
// The continuum field is replaced by M discrete modes obtained from a
// Gauss-Legendre rule on the radial density 4 pi r^2 |phi(r)|^2, so that
// sum_m g_m^2 e^{-i t omega_m} reconstructs the correlation f(t) up to the
// recurrence horizon ~ 2 pi M / r_max.  States live on
// {atom level} x {occupations n_1..n_M with sum <= n_max} and are propagated
// with short-step Krylov exponentials of the piecewise-frozen Hamiltonian.
#pragma once

#include "qprep/correlation.hpp"
#include "qprep/model.hpp"
#include "qprep/superop.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace qprep {

struct DiscretizedField {
  std::vector<double> omega;  // mode frequencies, ascending
  std::vector<double> g;      // real coupling weights
  double r_max = 0.0;

  double coupling_total() const;  // sum g_m^2 ~ f(0)
  cd reconstruct_f(double t) const;
  double recurrence_time() const;  // 2 pi / (mean mode spacing)
  // First photon return for a wavepacket near frequency `freq`.  The Gauss
  // nodes are non-uniform: local spacing near freq is about
  // pi * sqrt(freq (r_max - freq)) / M, wider than the mean at mid-interval,
  // so resonant emission recurs earlier than recurrence_time() suggests.
  double recurrence_time_at(double freq) const;
};

// Gauss-Legendre mode quadrature on [0, r_max].  Requires M >= 2.
DiscretizedField discretize_field(const FormFactor& ff, int M, double r_max);

// Smallest mode count whose recurrence window covers `horizon` with a safety
// factor, given the radial support (mean-spacing estimate).
int modes_for_horizon(double horizon, double r_max, double safety = 1.25);

// Like modes_for_horizon, but guards the local Gauss-node spacing near a
// specific transition frequency, so that a photon emitted there does not
// return within the horizon.  Use the larger of the two counts when a
// resonant frequency is known.
int modes_for_horizon_at(double horizon, double r_max, double freq,
                         double safety = 1.25);

// max_{t in [0,T]} | sum_m g_m^2 e^{-i t omega_m} - f(t) |, sampled densely.
double reconstruction_error(const DiscretizedField& field,
                            const Correlation& c, double T, int samples = 400);

class FockSpace {
 public:
  FockSpace(const AtomModel& atom, const DiscretizedField& field, int n_max);

  int atom_levels() const { return n_; }
  int modes() const { return M_; }
  int photon_cap() const { return n_max_; }
  long occ_dim() const { return occ_dim_; }
  long dim() const { return long(n_) * occ_dim_; }
  const AtomModel& atom() const { return atom_; }
  const DiscretizedField& field() const { return field_; }

  // Rank of an occupation vector (combinatorial number system per photon
  // sector, sectors concatenated by total photon number).
  long occ_rank(const std::vector<int>& occ) const;
  std::vector<int> occ_unrank(long rank) const;

  long index(int level, long occ) const { return long(level) * occ_dim_ + occ; }

  // y = (H0 + lambda * HI) x, matrix-free.
  void apply_H(const Eigen::VectorXcd& x, double lambda,
               Eigen::VectorXcd& y) const;

  // Largest |H0 + lambda HI| scale (diagonal max + coupling estimate).
  double norm_scale(double lambda) const;

  // Basis-identity hash for checkpoints.
  std::uint64_t basis_hash() const;

  // psi <- exp(-i dt (H0 + lambda HI)) psi via a Lanczos subspace of
  // dimension krylov_dim, with norm preserved to ~1e-12 per step.
  void krylov_step(Eigen::VectorXcd& psi, double lambda, double dt,
                   int krylov_dim = 40) const;

  // diagonal energy of a basis state
  double diag_energy(long idx) const { return diag_[idx]; }

 private:
  AtomModel atom_;
  DiscretizedField field_;
  int n_ = 0, M_ = 0, n_max_ = 0;
  long occ_dim_ = 0;
  std::vector<long> sector_offset_;  // by total photon number
  std::vector<double> diag_;         // H0 diagonal over the full basis
  // creation links: for each occ state with total < n_max and each mode,
  // the rank of occ + e_m and the factor sqrt(n_m + 1).
  std::vector<long> up_rank_;     // size occ_dim_below_cap * M
  std::vector<double> up_amp_;
  long below_cap_ = 0;            // occ states with total < n_max

  void build_links();
};

// Unit vector |level> x |vacuum>.
Eigen::VectorXcd vacuum_state(const FockSpace& fs, int level);

// |level> x a*(profile) |vacuum>, normalized; profile has one coefficient
// per mode.
Eigen::VectorXcd one_photon_state(const FockSpace& fs, int level,
                                  const std::vector<cd>& profile);

struct PropagationOptions {
  double dt = 0.05;         // step size before frequency-resolution capping
  int krylov_dim = 40;
  double norm_tol = 1e-8;   // allowed drift per run
};

// Propagates psi from time s to t with lambda sampled at step midpoints.
// Throws if the norm drifts beyond the tolerance.
Eigen::VectorXcd propagate_schedule(const FockSpace& fs,
                                    const CouplingSchedule& sched,
                                    const Eigen::VectorXcd& psi0, double s,
                                    double t,
                                    const PropagationOptions& opt = {});

// Reduced window propagator on atom observables via the defining
// sesquilinear form: Z[(i,j),(a,b)] = <psi_i(t)[a,.], psi_j(t)[b,.]> with
// psi_j(t) = U(t,s) (|j> x |vac>).
SuperOp effective_Z(const FockSpace& fs, const CouplingSchedule& sched,
                    double s, double t, const PropagationOptions& opt = {});

struct TraceRow {
  double t = 0.0;
  std::vector<double> pops;  // Tr(Pi_ii rho_S(t))
  cd obs{0.0, 0.0};          // <psi|(O x 1)|psi>
  double norm = 0.0;
};

struct PrepareResult {
  std::vector<TraceRow> rows;
  Eigen::VectorXcd final_state;
};

// Time series of populations and one observable along a scheduled run.
PrepareResult prepare_experiment(const FockSpace& fs,
                                 const CouplingSchedule& sched,
                                 const Eigen::VectorXcd& psi0,
                                 const Eigen::MatrixXcd& obs, double t_end,
                                 double sample_dt,
                                 const PropagationOptions& opt = {});

// Flat binary amplitudes behind a JSON-style header (dims, basis hash).
void save_checkpoint(const std::string& path, const FockSpace& fs,
                     double t, const Eigen::VectorXcd& psi);
Eigen::VectorXcd load_checkpoint(const std::string& path, const FockSpace& fs,
                                 double* t_out = nullptr);

}  // namespace qprep
