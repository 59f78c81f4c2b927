// quadrature.cpp -- Gauss-Legendre rules and adaptive Gauss-Kronrod integration.
#include "qprep/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <queue>
#include <stdexcept>

namespace qprep {

namespace {

GaussLegendre compute_gl(int n) {
  GaussLegendre gl;
  gl.x.resize(n);
  gl.w.resize(n);
  const double eps = 1e-15;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // Chebyshev initial guess, Newton on P_n.
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (x * p0 - p1) / (x * x - 1.0);
      double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < eps) break;
    }
    gl.x[i] = -x;
    gl.x[n - 1 - i] = x;
    gl.w[i] = gl.w[n - 1 - i] = 2.0 / ((1.0 - x * x) * pp * pp);
  }
  return gl;
}

// Kronrod-15 nodes/weights (positive half; symmetric) and embedded Gauss-7 weights.
const double kXgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.000000000000000};
const double kWgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
const double kWg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

struct Seg {
  double a, b;
  cd val;
  double err;
};

Seg eval_gk15(const std::function<cd(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  cd resk(0.0, 0.0), resg(0.0, 0.0);
  for (int j = 0; j < 8; ++j) {
    cd fv;
    if (j == 7) {
      fv = f(c);
      resk += kWgk[7] * fv;
      resg += kWg[3] * fv;
    } else {
      cd f1 = f(c - h * kXgk[j]);
      cd f2 = f(c + h * kXgk[j]);
      resk += kWgk[j] * (f1 + f2);
      if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
    }
  }
  Seg s;
  s.a = a;
  s.b = b;
  s.val = resk * h;
  s.err = std::abs(resk - resg) * std::abs(h);
  return s;
}

}  // namespace

const GaussLegendre& gauss_legendre(int n) {
  static std::map<int, GaussLegendre> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_gl(n)).first;
  return it->second;
}

void gauss_legendre_ab(int n, double a, double b,
                       std::vector<double>& x, std::vector<double>& w) {
  const GaussLegendre& gl = gauss_legendre(n);
  x.resize(n);
  w.resize(n);
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  for (int i = 0; i < n; ++i) {
    x[i] = c + h * gl.x[i];
    w[i] = h * gl.w[i];
  }
}

QuadResult integrate(const std::function<cd(double)>& f, double a, double b,
                     double abs_tol, double rel_tol, int max_depth,
                     const std::vector<double>& breakpoints) {
  QuadResult res;
  if (a == b) return res;
  std::vector<double> pts;
  pts.push_back(a);
  for (double p : breakpoints)
    if (p > a && p < b) pts.push_back(p);
  pts.push_back(b);
  std::sort(pts.begin(), pts.end());

  auto cmp = [](const Seg& s1, const Seg& s2) { return s1.err < s2.err; };
  std::priority_queue<Seg, std::vector<Seg>, decltype(cmp)> heap(cmp);
  cd total(0.0, 0.0);
  double toterr = 0.0;
  long evals = 0;
  for (size_t i = 0; i + 1 < pts.size(); ++i) {
    Seg s = eval_gk15(f, pts[i], pts[i + 1]);
    evals += 15;
    total += s.val;
    toterr += s.err;
    heap.push(s);
  }
  int splits = 0;
  while (toterr > std::max(abs_tol, rel_tol * std::abs(total)) &&
         splits < max_depth && !heap.empty()) {
    Seg s = heap.top();
    heap.pop();
    double mid = 0.5 * (s.a + s.b);
    if (mid <= s.a || mid >= s.b) break;  // interval at machine resolution
    Seg l = eval_gk15(f, s.a, mid);
    Seg r = eval_gk15(f, mid, s.b);
    evals += 30;
    total += l.val + r.val - s.val;
    toterr += l.err + r.err - s.err;
    heap.push(l);
    heap.push(r);
    ++splits;
  }
  res.value = total;
  res.error = toterr;
  res.evaluations = evals;
  res.converged = toterr <= std::max(abs_tol, rel_tol * std::abs(total)) * 10.0;
  return res;
}

double integrate_real(const std::function<double(double)>& f, double a, double b,
                      double abs_tol, double rel_tol) {
  auto g = [&f](double x) { return cd(f(x), 0.0); };
  return integrate(g, a, b, abs_tol, rel_tol).value.real();
}

}  // namespace qprep
