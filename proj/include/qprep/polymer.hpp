// polymer.hpp -- interval grids, polymer gas machinery, cluster expansion.
//
// The time axis is cut into intervals I_0, ..., I_{N-1} whose lengths follow
// the slow grid t_{i+1} = t_i + tau * lambda(t_i)^-2.  Expansion remainders
// organize into decorated polymers on the interval indices: B vertices carry
// pair lines (edges), R vertices carry a small remainder factor eps0.  The
// summability of the polymer gas is certified by a Kotecky-Preiss style
// majorant with explicitly computable constants.
#pragma once

#include "qprep/correlation.hpp"
#include "qprep/model.hpp"

#include <utility>
#include <vector>

namespace qprep {

// Grid points t_0 < t_1 < ... < t_N with t_{i+1} - t_i = tau / lambda(t_i)^2.
std::vector<double> van_hove_grid(const CouplingSchedule& s, double tau, int N,
                                  double t0 = 0.0);

// Edge weight eta(E) = 4 ||G||^2 int_{I_i} du int_{I_j} dv lambda(u) lambda(v)
// |f(v-u)|, reduced to a single adaptive integral over s = v - u with an inner
// Gauss rule for the slowly varying coupling.
double edge_weight_eta(const Correlation& c, const CouplingSchedule& s,
                       double normG2, double ai, double bi, double aj,
                       double bj);

struct SummabilityReport {
  double plain = 0.0;     // sum_{j != i} lambda_i^-1 lambda_j^-1 eta(i,j)
  double weighted = 0.0;  // same with the extra factor (1 + |i-j|)^beta
};

// Row sums of the rescaled interaction matrix at anchor interval i.  The
// weighted variant needs beta_exp in (0, alpha - 2) where alpha is the decay
// exponent of |f|; alpha <= 2 makes the criterion inapplicable (throws).
SummabilityReport summability_check(const Correlation& c,
                                    const CouplingSchedule& s,
                                    const std::vector<double>& grid,
                                    double normG2, int i, double beta_exp);

// Number of labeled trees on v vertices by exhaustive enumeration of
// (v-1)-edge subsets (guarded to v <= 8); equals v^(v-2).
long count_labeled_trees(int v);

struct Polymer {
  std::vector<int> verts;                  // ascending interval indices
  std::vector<char> dec;                   // 'B' or 'R' per vertex
  std::vector<std::pair<int, int>> edges;  // pairs of B vertices (by index
                                           //  into verts)
};

// All polymers on {0..N} with at most max_vertices vertices: every B vertex
// has degree >= 1, edges join B vertices only, and the connected pieces
// (B components and single R vertices) fuse at mutual distance exactly 1.
std::vector<Polymer> enumerate_polymers(int N, int max_vertices);

// Weight bound |p(X)| <= 2^|U| exp(c_dyson |B|) (prod_E eta(E)) eps0^|R|,
// where |U| counts maximal blocks (B components, maximal runs of consecutive
// R vertices) and c_dyson = 4 tau ||f||_L1 ||G||^2.
double polymer_weight_bound(const Polymer& X, const Correlation& c,
                            const CouplingSchedule& s,
                            const std::vector<double>& grid, double normG2,
                            double eps0, double tau);

struct KPReport {
  double K = 0.0;           // per-B-vertex constant 2 exp(c_dyson + 1)
  double q_edge = 0.0;      // sup over blocks of nearby rescaled edge weights
  double q_R = 0.0;         // 4 e eps0 / (1 - e eps0); infinite if e eps0 >= 1
  double q = 0.0;           // q_edge + q_R
  double tree_factor = 0.0; // sum_n (n+1)^(n-1)/n! q^n; infinite if q >= 1/e
  double per_vertex = 0.0;  // sup_j sum_{blocks A containing j} etaK(A) * tree
  bool pass = false;        // q < 1/e and per_vertex <= 1
  std::vector<double> anchor_terms;  // per-vertex block sums before the tree factor
};

KPReport kp_criterion_check(const Correlation& c, const CouplingSchedule& s,
                            const std::vector<double>& grid, double normG2,
                            double eps0, double tau);

// Literal left-hand side of the summability criterion for anchor polymer X:
// sum over polymers X' at distance <= 1 of bound(p(X')) * e^{|V(X')|}.
double kp_bruteforce_lhs(const Polymer& X, const std::vector<Polymer>& all,
                         const Correlation& c, const CouplingSchedule& s,
                         const std::vector<double>& grid, double normG2,
                         double eps0, double tau);

// Ursell (truncated connected) function for k abstract polymers given their
// pairwise incompatibility: sum over connected spanning subgraphs of (-1)^#G.
double ursell(const std::vector<std::vector<bool>>& incompatible);

struct ClusterIdentityReport {
  double z_direct = 0.0;              // sum over independent sets
  double log_z = 0.0;                 // log of the above
  std::vector<double> series_terms;   // cluster coefficients c_1..c_nmax
  std::vector<double> partial_sums;
  double final_error = 0.0;           // |log_z - last partial sum|
};

// Finite abstract polymer system: weights p_x with a symmetric
// incompatibility relation (self-incompatibility always on).  Cross-validates
// the direct partition function against the truncated cluster series; the
// low-order coefficients are recomputed from explicit ordered tuples with the
// Ursell function.
ClusterIdentityReport cluster_identity_check(
    const std::vector<double>& weights,
    const std::vector<std::vector<bool>>& incompatible, int n_max = 10);

struct RemainderDemo {
  std::vector<double> sigma;  // Sigma_N = sum_{k=1}^N eps^k v_{N-k}
  double geometric_bound = 0.0;  // sup|v| * eps/(1-eps)
};

// Discrete convolution of a small parameter eps = e*eps0 against a sequence
// v_n: Sigma_N -> 0 iff v_n -> 0; for constant v it saturates the geometric
// bound.
RemainderDemo remainder_decay_demo(double eps0, const std::vector<double>& v);

}  // namespace qprep
