#include "fock/quadrature.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <stdexcept>

namespace fock::quad {

// G7/K15 node-weight table: {abscissa, Gauss weight, Kronrod weight}.
static const double kGK[8][3] = {
    {0.000000000000000, 0.417959183673469, 0.209482141084728},
    {0.405845151377397, 0.381830050505119, 0.190350578064785},
    {0.741531185599394, 0.279705391489277, 0.140653259715525},
    {0.949107912342759, 0.129484966168870, 0.063092092629979},
    {0.207784955007898, 0.0, 0.204432940075298},
    {0.586087235467691, 0.0, 0.169004726639267},
    {0.864864423359769, 0.0, 0.104790010322250},
    {0.991455371120813, 0.0, 0.022935322010529}};

static void gk15(const std::function<double(double)>& f, double a, double b,
                 double& k15, double& err, long& evals) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double y0 = f(c);
  double g7 = kGK[0][1] * y0;
  double k = kGK[0][2] * y0;
  for (int i = 1; i < 8; ++i) {
    const double dx = h * kGK[i][0];
    const double yi = f(c + dx) + f(c - dx);
    g7 += kGK[i][1] * yi;
    k += kGK[i][2] * yi;
  }
  evals += 15;
  g7 *= h;
  k *= h;
  k15 = k;
  // QUADPACK-style sharpened estimate
  const double diff = std::abs(g7 - k);
  err = std::min(diff, std::pow(200.0 * diff, 1.5));
  if (err == 0.0) err = std::abs(k) * 1e-16;
}

Result adaptive_gk(const std::function<double(double)>& f, double a, double b,
                   double rel_tol, double abs_tol, int max_intervals) {
  Result res;
  if (a == b) return res;
  struct Seg {
    double a, b, val, err;
  };
  std::vector<Seg> heap;
  double v, e;
  gk15(f, a, b, v, e, res.evals);
  heap.push_back({a, b, v, e});
  auto worst_first = [](const Seg& s1, const Seg& s2) { return s1.err < s2.err; };
  double total = v, toterr = e;
  while (int(heap.size()) < max_intervals) {
    if (toterr <= std::max(rel_tol * std::abs(total), abs_tol)) break;
    std::pop_heap(heap.begin(), heap.end(), worst_first);
    Seg s = heap.back();
    heap.pop_back();
    const double mid = 0.5 * (s.a + s.b);
    double v1, e1, v2, e2;
    gk15(f, s.a, mid, v1, e1, res.evals);
    gk15(f, mid, s.b, v2, e2, res.evals);
    total += v1 + v2 - s.val;
    toterr += e1 + e2 - s.err;
    heap.push_back({s.a, mid, v1, e1});
    std::push_heap(heap.begin(), heap.end(), worst_first);
    heap.push_back({mid, s.b, v2, e2});
    std::push_heap(heap.begin(), heap.end(), worst_first);
  }
  // recompute sums to shed accumulated cancellation
  total = 0.0;
  toterr = 0.0;
  for (const Seg& s : heap) {
    total += s.val;
    toterr += s.err;
  }
  res.value = total;
  res.abs_err = toterr;
  res.converged = toterr <= std::max(rel_tol * std::abs(total), abs_tol) * 4.0;
  return res;
}

const GLRule& gl_rule(int n) {
  static std::map<int, GLRule> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  if (n < 1) throw std::invalid_argument("gl_rule: n < 1");
  GLRule rule;
  rule.x.resize(n);
  rule.w.resize(n);
  // Newton iteration on Legendre polynomials, roots symmetric about 0.
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.x[i] = -x;
    rule.x[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * pp * pp);
    rule.w[i] = w;
    rule.w[n - 1 - i] = w;
  }
  return cache.emplace(n, std::move(rule)).first->second;
}

double fixed_gl(const std::function<double(double)>& f, double a, double b,
                int n) {
  const GLRule& r = gl_rule(n);
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += r.w[i] * f(c + h * r.x[i]);
  return s * h;
}

}  // namespace fock::quad
