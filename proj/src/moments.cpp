#include "fock/moments.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "fock/quadrature.hpp"

namespace fock {

namespace {
constexpr double kLogCut = -69.5;  // integrand cutoff: < 1e-30 of its max
}

double log_radial_moment(const WeightModel& w, double alpha, double* rel_err,
                         long* evals) {
  if (alpha < 0.0) throw std::invalid_argument("log_radial_moment: alpha < 0");
  if (alpha == 0.0) {
    // decreasing integrand, peak at the origin
    const double L0 = -w.psi(0.0);
    auto L = [&](double s) { return -w.psi(s); };
    double hi = 1.0;
    while (L(hi) - L0 > kLogCut) hi *= 2.0;
    auto f = [&](double s) { return std::exp(L(s) - L0); };
    quad::Result q = quad::adaptive_gk(f, 0.0, hi, 1e-11, 0.0, 6000);
    if (rel_err) *rel_err = q.abs_err / q.value;
    if (evals) *evals = q.evals;
    if (!q.converged)
      throw std::runtime_error("log_radial_moment: quadrature failed at alpha=0");
    return L0 + std::log(q.value);
  }

  // Peak of L(s) = alpha log s - Psi(s) at s* with Phi(s*) = alpha. The
  // integrand is evaluated as a shifted exponent around s*: with x = delta/s*,
  //   L(s*+delta) - L(s*) = alpha [log1p(x) - x] + ell delta - psi_rem(s*, delta),
  // where ell = alpha/s* - Psi'(s*) is the (tiny) residual of the peak solve.
  // Every piece is O(window^2), so the shifted exponent stays accurate even
  // when L itself is far beyond double resolution.
  const double s_star = w.phi_inverse(alpha);
  const double ell = alpha / s_star - w.dpsi(s_star);
  auto Ls = [&](double delta) {
    return alpha * log1p_minus_x(delta / s_star) + ell * delta -
           w.psi_rem(s_star, delta);
  };
  // decay bracket in delta; width scale 1/sqrt(a)
  const double a = alpha / (s_star * s_star) + w.d2psi(s_star);
  const double width = 1.0 / std::sqrt(a);
  const double floor_lo = -(1.0 - 1e-9) * s_star;
  double d_hi = width;
  while (Ls(d_hi) > kLogCut) d_hi *= 2.0;
  double d_lo = std::max(floor_lo, -width);
  while (Ls(d_lo) > kLogCut && d_lo > floor_lo)
    d_lo = std::max(floor_lo, 2.0 * d_lo);

  auto f = [&](double delta) { return std::exp(Ls(delta)); };
  quad::Result q = quad::adaptive_gk(f, d_lo, d_hi, 1e-11, 0.0, 6000);
  if (!(q.value > 0.0))
    throw std::runtime_error("log_radial_moment: nonpositive integral");
  if (rel_err) *rel_err = q.abs_err / q.value;
  if (evals) *evals = q.evals;
  if (!q.converged)
    throw std::runtime_error("log_radial_moment: quadrature failed at alpha=" +
                             std::to_string(alpha));
  return alpha * std::log(s_star) - w.psi(s_star) + std::log(q.value);
}

MomentTable compute_moments(const WeightModel& w, int d, int kmax) {
  if (d < 1) throw std::invalid_argument("compute_moments: d < 1");
  if (kmax < 0) throw std::invalid_argument("compute_moments: kmax < 0");
  MomentTable t;
  t.dimension = d;
  t.kmax = kmax;
  t.log_m.resize(kmax + 1);
  t.rel_err.resize(kmax + 1);
  for (int k = 0; k <= kmax; ++k) {
    double re = 0.0;
    long ev = 0;
    try {
      t.log_m[k] = log_radial_moment(w, double(k) + d - 1.0, &re, &ev);
    } catch (const std::runtime_error& e) {
      throw std::runtime_error("compute_moments: failure at k=" +
                               std::to_string(k) + " (" + e.what() + ")");
    }
    t.rel_err[k] = re;
    t.total_evals += ev;
    if (re > t.max_rel_err) t.max_rel_err = re;
    if (re > 1e-10)
      throw std::runtime_error("compute_moments: relative error above 1e-10 at k=" +
                               std::to_string(k));
  }
  return t;
}

int suggest_kmax(const WeightModel& w, int d, double r) {
  if (r <= 0.0) return 64;
  const double peak = w.phi(r) + (d - 1);
  const double sigma = std::sqrt(std::max(r * w.dphi(r), 1.0));
  const double k = peak + 13.0 * sigma + 60.0;
  if (k > 2.1e9) throw std::range_error("suggest_kmax: series peak beyond any feasible table");
  return int(std::ceil(k));
}

}  // namespace fock
