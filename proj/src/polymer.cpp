// polymer.cpp -- polymer gas enumeration, weights, and convergence criteria.
#include "qprep/polymer.hpp"

#include "qprep/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

namespace qprep {

namespace {

const double kE = std::exp(1.0);

// Distance between two integer index sets (min over pairs).
int set_distance(const std::vector<int>& A, const std::vector<int>& B) {
  int d = std::numeric_limits<int>::max();
  for (int a : A)
    for (int b : B) d = std::min(d, std::abs(a - b));
  return d;
}

}  // namespace

std::vector<double> van_hove_grid(const CouplingSchedule& s, double tau, int N,
                                  double t0) {
  std::vector<double> t(N + 1);
  t[0] = t0;
  for (int i = 0; i < N; ++i) {
    double lam = s.at(t[i]);
    t[i + 1] = t[i] + tau / (lam * lam);
  }
  return t;
}

double edge_weight_eta(const Correlation& c, const CouplingSchedule& s,
                       double normG2, double ai, double bi, double aj,
                       double bj) {
  if (!(bi > ai && bj > aj)) throw std::invalid_argument("empty interval");
  // s-marginal: eta = 4 G^2 int ds |f(s)| w(s),
  // w(s) = int du lambda(u) lambda(u+s) over {u in I_i, u+s in I_j}.
  const double lo = aj - bi, hi = bj - ai;
  const GaussLegendre& gl = gauss_legendre(8);
  auto inner = [&](double sv) {
    double u0 = std::max(ai, aj - sv), u1 = std::min(bi, bj - sv);
    if (u1 <= u0) return 0.0;
    double mid = 0.5 * (u0 + u1), h = 0.5 * (u1 - u0);
    double acc = 0.0;
    for (size_t k = 0; k < gl.x.size(); ++k) {
      double u = mid + h * gl.x[k];
      acc += gl.w[k] * s.at(u) * s.at(u + sv);
    }
    return acc * h;
  };
  auto integrand = [&](double sv) {
    return cd(c.abs_f(sv) * inner(sv), 0.0);
  };
  // Seed breakpoints: kinks of w plus geometric refinement toward the point
  // of closest approach where |f| peaks.
  std::vector<double> brk = {aj - ai, bj - bi};
  double peak = std::clamp(0.0, lo, hi);
  for (double step = 1.0; step < hi - lo; step *= 2.0) {
    if (peak + step < hi) brk.push_back(peak + step);
    if (peak - step > lo) brk.push_back(peak - step);
  }
  QuadResult q = integrate(integrand, lo, hi, 1e-12, 1e-9, 6000, brk);
  return 4.0 * normG2 * q.value.real();
}

SummabilityReport summability_check(const Correlation& c,
                                    const CouplingSchedule& s,
                                    const std::vector<double>& grid,
                                    double normG2, int i, double beta_exp) {
  const int N = static_cast<int>(grid.size()) - 1;
  if (i < 0 || i >= N) throw std::invalid_argument("anchor out of range");
  double alpha = c.form_factor().closed_form()
                     ? c.form_factor().cf_power()
                     : c.decay_exponent().exponent;
  if (alpha <= 2.0)
    throw std::invalid_argument(
        "summability criterion needs |f| decay faster than 1/t^2");
  if (!(beta_exp > 0.0 && beta_exp < alpha - 2.0))
    throw std::invalid_argument("weight exponent must lie in (0, alpha-2)");

  SummabilityReport rep;
  const double li = s.at(grid[i]);
  for (int j = 0; j < N; ++j) {
    if (j == i) continue;
    double lj = s.at(grid[j]);
    double term = edge_weight_eta(c, s, normG2, grid[i], grid[i + 1], grid[j],
                                  grid[j + 1]) /
                  (li * lj);
    rep.plain += term;
    rep.weighted += term * std::pow(1.0 + std::abs(i - j), beta_exp);
  }
  return rep;
}

long count_labeled_trees(int v) {
  if (v < 1 || v > 8) throw std::invalid_argument("tree count guarded to v <= 8");
  if (v <= 2) return 1;
  std::vector<std::pair<int, int>> edges;
  for (int a = 0; a < v; ++a)
    for (int b = a + 1; b < v; ++b) edges.emplace_back(a, b);
  const int ne = static_cast<int>(edges.size());
  long count = 0;
  // choose v-1 of the ne edges and test connectivity
  std::vector<int> pick(v - 1);
  std::function<void(int, int)> rec = [&](int start, int depth) {
    if (depth == v - 1) {
      std::vector<int> comp(v);
      std::iota(comp.begin(), comp.end(), 0);
      std::function<int(int)> find = [&](int x) {
        while (comp[x] != x) x = comp[x] = comp[comp[x]];
        return x;
      };
      for (int e : pick) comp[find(edges[e].first)] = find(edges[e].second);
      int root = find(0);
      for (int x = 1; x < v; ++x)
        if (find(x) != root) return;
      ++count;
      return;
    }
    for (int e = start; e < ne; ++e) {
      pick[depth] = e;
      rec(e + 1, depth + 1);
    }
  };
  rec(0, 0);
  return count;
}

std::vector<Polymer> enumerate_polymers(int N, int max_vertices) {
  if (N > 14 || max_vertices > 6)
    throw std::invalid_argument(
        "polymer enumeration guarded to N <= 14, max 6 vertices");
  std::vector<Polymer> out;
  const int V = N + 1;
  std::vector<int> subset;

  // Check the fusion condition: connected pieces at mutual distance 1.
  auto valid_fusion = [](const Polymer& P) {
    const int k = static_cast<int>(P.verts.size());
    // Components: B vertices via edges, each R vertex alone.
    std::vector<int> comp(k);
    for (int i = 0; i < k; ++i) comp[i] = i;
    std::function<int(int)> find = [&](int x) {
      while (comp[x] != x) x = comp[x] = comp[comp[x]];
      return x;
    };
    for (auto& e : P.edges) comp[find(e.first)] = find(e.second);
    std::map<int, std::vector<int>> pieces;
    for (int i = 0; i < k; ++i) pieces[find(i)].push_back(P.verts[i]);
    if (pieces.size() == 1) return true;
    // Adjacency graph of pieces with edge iff distance exactly 1; pieces are
    // disjoint integer sets so distance >= 1, and the fusion requirement is
    // that this graph is connected.
    std::vector<std::vector<int>> ps;
    for (auto& kv : pieces) ps.push_back(kv.second);
    const int m = static_cast<int>(ps.size());
    std::vector<bool> seen(m, false);
    std::vector<int> stack = {0};
    seen[0] = true;
    int count = 1;
    while (!stack.empty()) {
      int x = stack.back();
      stack.pop_back();
      for (int y = 0; y < m; ++y)
        if (!seen[y] && set_distance(ps[x], ps[y]) == 1) {
          seen[y] = true;
          stack.push_back(y);
          ++count;
        }
    }
    return count == m;
  };

  std::function<void(int)> rec = [&](int next) {
    if (!subset.empty()) {
      const int k = static_cast<int>(subset.size());
      for (int mask = 0; mask < (1 << k); ++mask) {
        // bit set -> B vertex
        std::vector<int> bverts;
        for (int i = 0; i < k; ++i)
          if (mask & (1 << i)) bverts.push_back(i);
        const int b = static_cast<int>(bverts.size());
        if (b == 1) continue;  // a single B vertex cannot have degree >= 1
        std::vector<std::pair<int, int>> pairs;
        for (int p = 0; p < b; ++p)
          for (int q = p + 1; q < b; ++q)
            pairs.emplace_back(bverts[p], bverts[q]);
        const int ne = static_cast<int>(pairs.size());
        for (long emask = 0; emask < (1L << ne); ++emask) {
          if (b > 0 && emask == 0) continue;
          Polymer P;
          P.verts = subset;
          P.dec.assign(k, 'R');
          for (int i : bverts) P.dec[i] = 'B';
          std::vector<int> deg(k, 0);
          for (int e = 0; e < ne; ++e)
            if (emask & (1L << e)) {
              P.edges.push_back(pairs[e]);
              ++deg[pairs[e].first];
              ++deg[pairs[e].second];
            }
          bool ok = true;
          for (int i : bverts)
            if (deg[i] == 0) ok = false;
          if (ok && valid_fusion(P)) out.push_back(std::move(P));
        }
        if (b == 0 && valid_fusion({subset, std::vector<char>(k, 'R'), {}}))
          ;  // already emitted by the emask==0 path below
      }
    }
    if (static_cast<int>(subset.size()) == max_vertices) return;
    for (int v = next; v < V; ++v) {
      subset.push_back(v);
      rec(v + 1);
      subset.pop_back();
    }
  };
  // The mask loop above skips emask==0 only when b>0; all-R polymers come out
  // of mask==0 with emask==0.
  rec(0);
  return out;
}

double polymer_weight_bound(const Polymer& X, const Correlation& c,
                            const CouplingSchedule& s,
                            const std::vector<double>& grid, double normG2,
                            double eps0, double tau) {
  const int k = static_cast<int>(X.verts.size());
  int nB = 0, nR = 0;
  for (char d : X.dec) (d == 'B' ? nB : nR)++;

  // Maximal blocks: B components plus maximal runs of consecutive R vertices.
  std::vector<int> comp(k);
  for (int i = 0; i < k; ++i) comp[i] = i;
  std::function<int(int)> find = [&](int x) {
    while (comp[x] != x) x = comp[x] = comp[comp[x]];
    return x;
  };
  for (auto& e : X.edges) comp[find(e.first)] = find(e.second);
  int blocks = 0;
  {
    std::vector<int> roots;
    for (int i = 0; i < k; ++i)
      if (X.dec[i] == 'B' && find(i) == i) ++blocks;
    // consecutive R runs
    int prev = std::numeric_limits<int>::min();
    for (int i = 0; i < k; ++i) {
      if (X.dec[i] != 'R') continue;
      if (X.verts[i] != prev + 1) ++blocks;
      prev = X.verts[i];
    }
  }

  double c_dyson = 4.0 * tau * c.l1_norm() * normG2;
  double w = std::pow(2.0, blocks) * std::exp(c_dyson * nB) *
             std::pow(eps0, nR);
  for (auto& e : X.edges) {
    int i = X.verts[e.first], j = X.verts[e.second];
    w *= edge_weight_eta(c, s, normG2, grid[i], grid[i + 1], grid[j],
                         grid[j + 1]);
  }
  return w;
}

KPReport kp_criterion_check(const Correlation& c, const CouplingSchedule& s,
                            const std::vector<double>& grid, double normG2,
                            double eps0, double tau) {
  KPReport rep;
  const int N = static_cast<int>(grid.size()) - 1;
  const double c_dyson = 4.0 * tau * c.l1_norm() * normG2;
  rep.K = 2.0 * std::exp(c_dyson + 1.0);
  const double K2 = rep.K * rep.K;
  const double x = kE * eps0;

  // Rescaled edge weights eta_K(E) = K^2 eta(E).
  std::vector<std::vector<double>> H(N, std::vector<double>(N, 0.0));
  for (int i = 0; i < N; ++i)
    for (int j = i + 1; j < N; ++j) {
      double e = K2 * edge_weight_eta(c, s, normG2, grid[i], grid[i + 1],
                                      grid[j], grid[j + 1]);
      H[i][j] = H[j][i] = e;
    }

  // q_edge: worst block anchor; for anchor vertex set S, sum eta_K over edges
  // with an endpoint within distance 1 of S.
  auto edge_sum_near = [&](const std::vector<int>& S) {
    double acc = 0.0;
    for (int i = 0; i < N; ++i)
      for (int j = i + 1; j < N; ++j) {
        if (H[i][j] == 0.0) continue;
        bool near = false;
        for (int v : S)
          if (std::abs(i - v) <= 1 || std::abs(j - v) <= 1) {
            near = true;
            break;
          }
        if (near) acc += H[i][j];
      }
    return acc;
  };
  // Anchors: all single vertices (covers R-block surfaces and edge endpoints;
  // an edge anchor {v,w} is bounded by the two single-vertex sums).
  double worst_single = 0.0;
  for (int v = 0; v < N; ++v)
    worst_single = std::max(worst_single, edge_sum_near({v}));
  rep.q_edge = 2.0 * worst_single;  // an edge anchor exposes two endpoints

  if (x >= 1.0) {
    rep.q_R = std::numeric_limits<double>::infinity();
  } else {
    rep.q_R = 4.0 * x / (1.0 - x);
  }
  rep.q = rep.q_edge + rep.q_R;

  if (!(rep.q < 1.0 / kE)) {
    rep.tree_factor = std::numeric_limits<double>::infinity();
  } else {
    double acc = 0.0, term = 0.0;
    for (int n = 0; n <= 60; ++n) {
      // (n+1)^(n-1) / n! * q^n
      double logt = (n - 1) * std::log(double(n + 1)) - std::lgamma(n + 1.0) +
                    n * std::log(std::max(rep.q, 1e-300));
      term = std::exp(logt);
      acc += term;
      if (term < 1e-16 * acc) break;
    }
    rep.tree_factor = acc;
  }

  // Per-vertex majorant: blocks containing a fixed grid vertex j.
  rep.anchor_terms.assign(N, 0.0);
  double worst_anchor = 0.0;
  for (int v = 0; v < N; ++v) {
    double acc = 0.0;
    for (int i = 0; i < N; ++i)
      for (int j = i + 1; j < N; ++j)
        if (i == v || j == v) acc += H[i][j];
    // R blocks (runs of consecutive vertices) containing v; each run carries
    // the block factor 2 alongside (e eps0)^len, matching the weight bound.
    if (x < 1.0) {
      for (int a = 0; a < N; ++a)
        for (int b = a; b < N; ++b)
          if (a <= v && v <= b) acc += 2.0 * std::pow(x, b - a + 1);
    } else {
      acc = std::numeric_limits<double>::infinity();
    }
    rep.anchor_terms[v] = acc;
    worst_anchor = std::max(worst_anchor, acc);
  }
  rep.per_vertex = worst_anchor * rep.tree_factor;
  rep.pass = (rep.q < 1.0 / kE) && (rep.per_vertex <= 1.0);
  return rep;
}

double kp_bruteforce_lhs(const Polymer& X, const std::vector<Polymer>& all,
                         const Correlation& c, const CouplingSchedule& s,
                         const std::vector<double>& grid, double normG2,
                         double eps0, double tau) {
  double acc = 0.0;
  for (const Polymer& Y : all) {
    if (set_distance(X.verts, Y.verts) > 1) continue;
    acc += polymer_weight_bound(Y, c, s, grid, normG2, eps0, tau) *
           std::exp(double(Y.verts.size()));
  }
  return acc;
}

double ursell(const std::vector<std::vector<bool>>& incompatible) {
  const int k = static_cast<int>(incompatible.size());
  if (k == 1) return 1.0;
  if (k > 7) throw std::invalid_argument("ursell guarded to k <= 7");
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j)
      if (incompatible[i][j]) edges.emplace_back(i, j);
  const int ne = static_cast<int>(edges.size());
  double acc = 0.0;
  for (long mask = 0; mask < (1L << ne); ++mask) {
    // connected spanning subgraph check
    std::vector<int> comp(k);
    for (int i = 0; i < k; ++i) comp[i] = i;
    std::function<int(int)> find = [&](int x) {
      while (comp[x] != x) x = comp[x] = comp[comp[x]];
      return x;
    };
    int bits = 0;
    for (int e = 0; e < ne; ++e)
      if (mask & (1L << e)) {
        comp[find(edges[e].first)] = find(edges[e].second);
        ++bits;
      }
    int root = find(0);
    bool spanning = true;
    for (int i = 1; i < k; ++i)
      if (find(i) != root) {
        spanning = false;
        break;
      }
    if (spanning) acc += (bits % 2 == 0) ? 1.0 : -1.0;
  }
  return acc;
}

ClusterIdentityReport cluster_identity_check(
    const std::vector<double>& weights,
    const std::vector<std::vector<bool>>& incompatible, int n_max) {
  ClusterIdentityReport rep;
  const int m = static_cast<int>(weights.size());

  // Z as a polynomial in a global activity z: coefficient a_s = sum over
  // independent (pairwise compatible) sets of size s of the weight product.
  std::vector<double> a(m + 1, 0.0);
  a[0] = 1.0;
  std::vector<int> chosen;
  std::function<void(int, double)> rec = [&](int next, double prod) {
    if (!chosen.empty()) a[chosen.size()] += prod;
    for (int x = next; x < m; ++x) {
      bool ok = true;
      for (int y : chosen)
        if (incompatible[x][y]) {
          ok = false;
          break;
        }
      if (!ok) continue;
      chosen.push_back(x);
      rec(x + 1, prod * weights[x]);
      chosen.pop_back();
    }
  };
  rec(0, 1.0);
  rep.z_direct = 0.0;
  for (double v : a) rep.z_direct += v;
  rep.log_z = std::log(rep.z_direct);

  // Formal log of the polynomial: log(1 + u) with u = sum_{s>=1} a_s z^s,
  // extracted to order n_max.  The cluster theorem identifies coefficient n
  // with (1/n!) sum over ordered n-tuples of weights times Ursell factors.
  std::vector<double> logc(n_max + 1, 0.0);
  {
    std::vector<double> az(n_max + 1, 0.0);
    for (int s = 1; s <= std::min(m, n_max); ++s) az[s] = a[s];
    // log(1+u) = sum_{j>=1} (-1)^(j+1) u^j / j
    std::vector<double> upow(n_max + 1, 0.0);
    upow[0] = 1.0;  // u^0
    std::vector<double> cur = {1.0};
    std::vector<double> uj(n_max + 1, 0.0);
    uj[0] = 1.0;
    for (int j = 1; j <= n_max; ++j) {
      // uj <- uj * u (truncated)
      std::vector<double> nxt(n_max + 1, 0.0);
      for (int p = 0; p <= n_max; ++p)
        if (uj[p] != 0.0)
          for (int q = 1; q + p <= n_max; ++q) nxt[p + q] += uj[p] * az[q];
      uj = nxt;
      double sgn = (j % 2 == 1) ? 1.0 : -1.0;
      for (int p = 0; p <= n_max; ++p) logc[p] += sgn * uj[p] / j;
    }
  }
  double run = 0.0;
  for (int n = 1; n <= n_max; ++n) {
    rep.series_terms.push_back(logc[n]);
    run += logc[n];
    rep.partial_sums.push_back(run);
  }
  rep.final_error = std::abs(rep.log_z - run);
  return rep;
}

RemainderDemo remainder_decay_demo(double eps0, const std::vector<double>& v) {
  RemainderDemo rep;
  const double eps = kE * eps0;
  const int n = static_cast<int>(v.size());
  rep.sigma.assign(n, 0.0);
  double vmax = 0.0;
  for (double x : v) vmax = std::max(vmax, std::abs(x));
  for (int N = 0; N < n; ++N) {
    double acc = 0.0;
    for (int k = 1; k <= N; ++k) acc += std::pow(eps, k) * v[N - k];
    rep.sigma[N] = acc;
  }
  rep.geometric_bound = (eps < 1.0) ? vmax * eps / (1.0 - eps)
                                    : std::numeric_limits<double>::infinity();
  return rep;
}

}  // namespace qprep
