#include "fock/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fock/quadrature.hpp"

namespace fock {

namespace {
constexpr double kWindowCut = -75.0;  // summation window edge, log scale
constexpr double kPi = 3.14159265358979323846;
}  // namespace

KernelCoeffs::KernelCoeffs(WeightModel w, MomentTable moments)
    : weight_(std::move(w)), moments_(std::move(moments)), d_(moments_.dimension) {
  log_pi_d_ = d_ * std::log(kPi);
  log_f_.resize(moments_.kmax + 1);
  for (int k = 0; k <= moments_.kmax; ++k) {
    // f_k = (d-1+k)! / (pi^d k! M_k)
    log_f_[k] = std::lgamma(double(d_ + k)) - std::lgamma(double(k) + 1.0) -
                log_pi_d_ - moments_.log_m[k];
  }
}

KernelCoeffs kernel_coeffs(const WeightModel& w, const MomentTable& m) {
  return KernelCoeffs(w, m);
}

double KernelCoeffs::log_w(const MultiIndex& nu) const {
  const int k = total_degree(nu);
  if (k > kmax()) throw std::range_error("log_w: |nu| beyond moment table");
  return log_pi_d_ + log_factorial(nu) + moments_.log_m[k] -
         std::lgamma(double(d_ + k));
}

double KernelCoeffs::log_w1(int k) const {
  if (d_ != 1) throw std::logic_error("log_w1 requires d = 1");
  if (k > kmax()) throw std::range_error("log_w1: k beyond moment table");
  return log_pi_d_ + std::lgamma(double(k) + 1.0) + moments_.log_m[k] -
         std::lgamma(double(1 + k));
}

bool KernelCoeffs::series_covered(double r) const {
  if (r <= 0.0) return kmax() >= 2;
  const double peak = weight_.phi(r) + (d_ - 1);
  const double sigma = std::sqrt(std::max(r * weight_.dphi(r), 1.0));
  return peak + 13.0 * sigma + 60.0 <= double(kmax());
}

double KernelCoeffs::covered_radius_sq() const {
  double lo = 0.0, hi = 1.0;
  while (series_covered(hi)) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e12) return lo;
  }
  for (int i = 0; i < 80; ++i) {
    const double mid = 0.5 * (lo + hi);
    (series_covered(mid) ? lo : hi) = mid;
  }
  return lo;
}

DiagData KernelCoeffs::diag_table(double r) const {
  DiagData out;
  out.r = r;
  if (r <= 0.0) {
    if (kmax() < 2) throw std::range_error("diag: kmax < 2");
    out.log_F = log_f_[0];
    out.log_F_res = out.log_F - weight_.psi(0.0);
    out.mu = std::exp(log_f_[1] - log_f_[0]);
    out.lambda = out.mu;
    out.u2 = 2.0 * std::exp(log_f_[2] - log_f_[0]) - out.mu * out.mu;
    return out;
  }
  const double ln_r = std::log(r);
  const double peak = weight_.phi(r) + (d_ - 1);
  const double sigma = std::sqrt(std::max(r * weight_.dphi(r), 1.0));
  long lo = std::max(0L, long(peak - 13.0 * sigma - 60.0));
  long hi = std::min(long(kmax()), long(peak + 13.0 * sigma + 60.0));

  auto q = [&](long k) { return log_f_[k] + double(k) * ln_r; };
  double q_max = -1e308;
  long k_top = lo;
  for (long k = lo; k <= hi; ++k)
    if (q(k) > q_max) { q_max = q(k); k_top = k; }
  // extend edges until decayed (defensive against window misestimates)
  while (lo > 0 && q(lo) - q_max > kWindowCut) lo = std::max(0L, lo - long(4 * sigma) - 16);
  while (hi < kmax() && q(hi) - q_max > kWindowCut) {
    hi = std::min(long(kmax()), hi + long(4 * sigma) + 16);
    for (long k = k_top; k <= hi; ++k)
      if (q(k) > q_max) { q_max = q(k); k_top = k; }
  }
  if (hi == kmax() && q(hi) - q_max > -69.0)
    throw std::range_error(
        "kernel series truncation insufficient at r=" + std::to_string(r) +
        "; increase kmax");

  double s0 = 0.0, s1 = 0.0;
  for (long k = lo; k <= hi; ++k) {
    const double e = std::exp(q(k) - q_max);
    s0 += e;
    s1 += e * double(k);
  }
  const double mean = s1 / s0;
  double v = 0.0;
  for (long k = lo; k <= hi; ++k)
    v += std::exp(q(k) - q_max) * (double(k) - mean) * (double(k) - mean);
  v /= s0;

  out.log_F = q_max + std::log(s0);
  out.log_F_res = out.log_F - weight_.psi(r);
  out.mu = mean / r;
  out.lambda = v / r;
  out.u2 = (out.lambda - out.mu) / r;
  out.tail_rel = std::exp(q(hi) - out.log_F);
  return out;
}

DiagData KernelCoeffs::diag_extended(double r) const {
  // Continuous-index route: treat the series sum_k f_k r^k as an integral over
  // real k (Poisson-summation error ~ exp(-2 pi^2 sigma^2), negligible at the
  // required widths) and substitute k = Phi(s) + 1 - d, which centers the
  // inner moment integral exactly at its saddle s. Every exponent is then a
  // combination of psi_rem / phi_diff / log1p_minus_x pieces of size
  // O(window^2), so the route stays accurate at peaks far beyond any feasible
  // table (where raw log-scale values exceed double resolution entirely).
  //
  //   pi^d F(r) e^{-Psi(r)} r^{d-1} = int exp(H(D)) Phi'(r+D) dD,
  //   H(D) = sigma_d(k(s)) + psi_rem(r,D) - Phi(r+D) [log1p(D/r) - D/r]
  //          - (D/r) phi_diff(r,D) - log I(s),        s = r + D,
  // with I(s) the shifted inner moment integral and sigma_d the polynomial
  // prefactor sum_{j=1}^{d-1} log(k+j).
  const WeightModel& w = weight_;
  // inner: log int exp(L(s+delta) - L(s)) ddelta at the exact saddle of the
  // exponent alpha = Phi(s)
  auto log_inner = [&](double s) {
    const double alpha = w.phi(s);
    auto Ls = [&](double delta) {
      return alpha * log1p_minus_x(delta / s) - w.psi_rem(s, delta);
    };
    const double a_in = alpha / (s * s) + w.d2psi(s);
    const double width = 1.0 / std::sqrt(a_in);
    double d_hi = width;
    while (Ls(d_hi) > kWindowCut) d_hi *= 2.0;
    const double floor_lo = -(1.0 - 1e-9) * s;
    double d_lo = std::max(floor_lo, -width);
    while (Ls(d_lo) > kWindowCut && d_lo > floor_lo)
      d_lo = std::max(floor_lo, 2.0 * d_lo);
    const double v =
        quad::adaptive_gk([&](double t) { return std::exp(Ls(t)); }, d_lo, d_hi,
                          1e-10, 0.0, 3000).value;
    return std::log(v);
  };

  auto H = [&](double D) {
    const double s = r + D;
    const double x = D / r;
    double sig_d = 0.0;
    if (d_ > 1) {
      const double k = w.phi(s) + 1.0 - d_;
      for (int j = 1; j <= d_ - 1; ++j) sig_d += std::log(k + j);
    }
    return sig_d + w.psi_rem(r, D) - w.phi(s) * log1p_minus_x(x) -
           x * w.phi_diff(r, D) - log_inner(s);
  };
  const double h0 = H(0.0);
  // outer width in s: sqrt(r / Phi'(r))
  const double w_out = std::sqrt(r / w.dphi(r));
  double D_hi = w_out;
  while (H(D_hi) - h0 > kWindowCut) D_hi *= 2.0;
  const double floor_lo = -0.9 * r;
  double D_lo = std::max(floor_lo, -w_out);
  while (H(D_lo) - h0 > kWindowCut && D_lo > floor_lo)
    D_lo = std::max(floor_lo, 2.0 * D_lo);

  auto body = [&](double D) { return std::exp(H(D) - h0) * w.dphi(r + D); };
  const double j0 = quad::adaptive_gk(body, D_lo, D_hi, 1e-9, 0.0, 1200).value;
  // mean offset of k relative to Phi(r) + 1 - d
  const double j1 = quad::adaptive_gk(
                        [&](double D) { return body(D) * w.phi_diff(r, D); },
                        D_lo, D_hi, 1e-9, 0.0, 1200).value;
  const double m_off = j1 / j0;
  const double j2 =
      quad::adaptive_gk(
          [&](double D) {
            const double c = w.phi_diff(r, D) - m_off;
            return body(D) * c * c;
          },
          D_lo, D_hi, 1e-9, 0.0, 1200).value;

  DiagData out;
  out.r = r;
  out.extended = true;
  const double log_res = h0 + std::log(j0) + (1.0 - d_) * std::log(r) - log_pi_d_;
  out.log_F_res = log_res;          // log F - Psi(r), fully resolved
  out.log_F = w.psi(r) + log_res;   // limited by the resolution of Psi(r) itself
  out.mu = (w.phi(r) + (1.0 - d_) + m_off) / r;
  out.lambda = (j2 / j0) / r;
  out.u2 = (out.lambda - out.mu) / r;
  return out;
}

DiagData KernelCoeffs::diag(double r, bool allow_extend) const {
  if (r < 0.0) throw std::invalid_argument("diag: r < 0");
  if (series_covered(r)) return diag_table(r);
  const double peak = weight_.phi(r) + (d_ - 1);
  const double sigma = std::sqrt(std::max(r * weight_.dphi(r), 1.0));
  if (allow_extend && peak > 30.0 && sigma > 3.0) return diag_extended(r);
  throw std::range_error("kernel series truncation insufficient at r=" +
                         std::to_string(r) + "; increase kmax");
}

KernelCoeffs::Scaled KernelCoeffs::eval_scaled(Complex t) const {
  Scaled out;
  const double a = std::abs(t);
  if (a == 0.0) {
    out.log_scale = log_f_[0];
    out.value = Complex(1.0, 0.0);
    return out;
  }
  const double ln_a = std::log(a);
  const double theta = std::arg(t);
  const double peak = weight_.phi(a) + (d_ - 1);
  const double sigma = std::sqrt(std::max(a * weight_.dphi(a), 1.0));
  long lo = std::max(0L, long(peak - 13.0 * sigma - 60.0));
  long hi = std::min(long(kmax()), long(peak + 13.0 * sigma + 60.0));
  auto q = [&](long k) { return log_f_[k] + double(k) * ln_a; };
  double q_max = -1e308;
  for (long k = lo; k <= hi; ++k) q_max = std::max(q_max, q(k));
  while (lo > 0 && q(lo) - q_max > kWindowCut) lo = std::max(0L, lo - long(4 * sigma) - 16);
  while (hi < kmax() && q(hi) - q_max > kWindowCut) {
    hi = std::min(long(kmax()), hi + long(4 * sigma) + 16);
    for (long k = hi - long(4 * sigma) - 16; k <= hi; ++k)
      if (k >= 0) q_max = std::max(q_max, q(k));
  }

  Complex sum(0.0, 0.0);
  double abs_sum = 0.0;
  Complex phase = std::polar(1.0, double(lo) * theta);
  const Complex step = std::polar(1.0, theta);
  for (long k = lo; k <= hi; ++k) {
    if ((k - lo) % 1024 == 0) phase = std::polar(1.0, double(k) * theta);
    const double mag = std::exp(q(k) - q_max);
    sum += mag * phase;
    abs_sum += mag;
    phase *= step;
  }
  out.log_scale = q_max;
  out.value = sum;
  if (hi == kmax()) {
    const double q_last = q(hi) - q_max;
    double rho = (hi > lo) ? std::exp(q(hi) - q(hi - 1)) : 1.0;
    if (rho >= 0.95)
      out.tail_rel = 1.0;  // no geometric control; reported as inadequate
    else
      out.tail_rel = std::exp(q_last) * rho / (1.0 - rho) / abs_sum;
  } else {
    out.tail_rel = std::exp(q(hi) - q_max) / abs_sum;
  }
  return out;
}

Complex KernelCoeffs::eval_F(Complex t) const {
  const Scaled s = eval_scaled(t);
  if (s.tail_rel > 1e-12)
    throw std::range_error("eval_F: series tail above 1e-12; increase kmax");
  const double mag = s.log_scale + std::log(std::max(std::abs(s.value), 1e-300));
  if (mag > 705.0)
    throw std::range_error("eval_F: kernel value overflows double; use eval_scaled");
  return std::exp(s.log_scale) * s.value;
}

Complex KernelCoeffs::eval(const CVec& z, const CVec& w) const {
  // <z,w> = sum z_i conj(w_i)
  const Complex t = (w.adjoint() * z)(0);
  return eval_F(t);
}

double KernelCoeffs::log_diag(const CVec& z) const {
  return diag(z.squaredNorm()).log_F;
}

BergmanData bergman_data(const KernelCoeffs& kc, const CVec& z) {
  BergmanData bd;
  bd.z = z;
  bd.r = z.squaredNorm();
  const DiagData dd = kc.diag(bd.r);
  bd.lambda = dd.lambda;
  bd.mu = dd.mu;
  bd.log_K = dd.log_F;
  if (!(bd.lambda > 0.0) || !(bd.mu > 0.0))
    throw std::runtime_error("bergman_data: nonpositive eigenvalue (numerical)");
  const int d = kc.dimension();
  bd.P = CMat::Zero(d, d);
  if (bd.r > 0.0) bd.P = (z * z.adjoint()) / bd.r;
  const CMat I = CMat::Identity(d, d);
  bd.B = bd.mu * I + (bd.lambda - bd.mu) * bd.P;
  bd.B_inv = (1.0 / bd.mu) * I + (1.0 / bd.lambda - 1.0 / bd.mu) * bd.P;
  bd.B_inv_sqrt = (1.0 / std::sqrt(bd.mu)) * I +
                  (1.0 / std::sqrt(bd.lambda) - 1.0 / std::sqrt(bd.mu)) * bd.P;
  return bd;
}

double bergman_metric(const BergmanData& bd, const CVec& xi) {
  const Complex v = (xi.adjoint() * (bd.B * xi))(0);
  return std::sqrt(std::max(0.0, v.real()));
}

RadialProfile::RadialProfile(const KernelCoeffs& kc, double r_max, int n_points)
    : r_min_(1e-6), r_max_(r_max) {
  if (r_max_ <= r_min_ * 10) r_max_ = r_min_ * 10;
  const DiagData d0 = kc.diag(0.0);
  lambda0_ = d0.mu;
  log_lambda_.resize(n_points);
  log_mu_.resize(n_points);
  const double llo = std::log(r_min_), lhi = std::log(r_max_);
  for (int i = 0; i < n_points; ++i) {
    const double r = std::exp(llo + (lhi - llo) * i / (n_points - 1.0));
    const DiagData dd = kc.diag(r);
    log_lambda_[i] = std::log(dd.lambda);
    log_mu_[i] = std::log(dd.mu);
  }
}

double RadialProfile::interp(const std::vector<double>& tab, double r) const {
  const int n = int(tab.size());
  const double llo = std::log(r_min_), lhi = std::log(r_max_);
  const double x = (std::log(r) - llo) / (lhi - llo) * (n - 1);
  int i = std::clamp(int(std::floor(x)), 0, n - 2);
  const double t = x - i;
  // cubic Hermite with centered-difference slopes
  const double y0 = tab[i], y1 = tab[i + 1];
  const double m0 = (i > 0) ? 0.5 * (tab[i + 1] - tab[i - 1]) : tab[i + 1] - tab[i];
  const double m1 = (i + 2 < n) ? 0.5 * (tab[i + 2] - tab[i]) : tab[i + 1] - tab[i];
  const double t2 = t * t, t3 = t2 * t;
  const double v = (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * m0 +
                   (-2 * t3 + 3 * t2) * y1 + (t3 - t2) * m1;
  return std::exp(v);
}

double RadialProfile::lambda(double r) const {
  if (r <= r_min_) {
    const double lam_min = std::exp(log_lambda_.front());
    return lambda0_ + (lam_min - lambda0_) * (r / r_min_);
  }
  if (r > r_max_ * (1.0 + 1e-12))
    throw std::range_error("RadialProfile: r beyond cached range");
  return interp(log_lambda_, std::min(r, r_max_));
}

double RadialProfile::mu(double r) const {
  if (r <= r_min_) {
    const double mu_min = std::exp(log_mu_.front());
    return lambda0_ + (mu_min - lambda0_) * (r / r_min_);
  }
  if (r > r_max_ * (1.0 + 1e-12))
    throw std::range_error("RadialProfile: r beyond cached range");
  return interp(log_mu_, std::min(r, r_max_));
}

double RadialProfile::beta(const CVec& p, const CVec& v) const {
  const double r = p.squaredNorm();
  const double v2 = v.squaredNorm();
  if (r == 0.0) return std::sqrt(lambda(0.0) * v2);
  const Complex pv = (p.adjoint() * v)(0);
  const double rad2 = std::norm(pv) / r;  // |P_z v|^2
  const double tan2 = std::max(0.0, v2 - rad2);
  return std::sqrt(lambda(r) * rad2 + mu(r) * tan2);
}

namespace {

double leg_length(const RadialProfile& prof, const CVec& a, const CVec& b, int n) {
  const CVec dir = b - a;
  if (dir.squaredNorm() == 0.0) return 0.0;
  const quad::GLRule& rule = quad::gl_rule(n);
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    const double t = 0.5 * (rule.x[i] + 1.0);
    s += rule.w[i] * prof.beta(a + t * dir, dir);
  }
  return 0.5 * s;
}

}  // namespace

DistanceResult bergman_distance(const KernelCoeffs& kc, const CVec& z,
                                const CVec& w, const RadialProfile* profile,
                                int legs, int sweeps) {
  DistanceResult res;
  if ((z - w).norm() == 0.0) return res;
  std::unique_ptr<RadialProfile> own;
  if (!profile) {
    const double rad = std::max(z.norm(), w.norm()) * 1.8 + 2.0;
    own = std::make_unique<RadialProfile>(kc, rad * rad);
    profile = own.get();
  }
  const RadialProfile& prof = *profile;
  res.straight = leg_length(prof, w, z, 64);

  // polyline descent over interior nodes, coordinate-wise golden search
  std::vector<CVec> nodes(legs + 1);
  for (int i = 0; i <= legs; ++i)
    nodes[i] = w + (double(i) / legs) * (z - w);
  const int d = int(z.size());
  const double gold = 0.5 * (std::sqrt(5.0) - 1.0);
  double h = 0.8 * (z - w).norm() / legs;
  for (int sweep = 0; sweep < sweeps; ++sweep, h *= 0.5) {
    for (int i = 1; i < legs; ++i) {
      for (int c = 0; c < 2 * d; ++c) {
        const CVec base = nodes[i];
        auto cost = [&](double delta) {
          CVec p = base;
          if (c < d)
            p[c] += delta;
          else
            p[c - d] += Complex(0.0, delta);
          // keep the search inside the cached radial range
          if (p.squaredNorm() > prof.r_max()) return 1e100;
          return leg_length(prof, nodes[i - 1], p, 16) +
                 leg_length(prof, p, nodes[i + 1], 16);
        };
        double lo = -h, hi = h;
        double x1 = hi - gold * (hi - lo), x2 = lo + gold * (hi - lo);
        double f1 = cost(x1), f2 = cost(x2);
        for (int it = 0; it < 24; ++it) {
          if (f1 < f2) {
            hi = x2; x2 = x1; f2 = f1;
            x1 = hi - gold * (hi - lo); f1 = cost(x1);
          } else {
            lo = x1; x1 = x2; f1 = f2;
            x2 = lo + gold * (hi - lo); f2 = cost(x2);
          }
        }
        const double best = (f1 < f2) ? x1 : x2;
        if (cost(best) < cost(0.0)) {
          CVec p = base;
          if (best != 0.0) {
            if (c < d)
              p[c] += best;
            else
              p[c - d] += Complex(0.0, best);
            nodes[i] = p;
          }
        }
      }
    }
  }
  double refined = 0.0;
  for (int i = 0; i < legs; ++i)
    refined += leg_length(prof, nodes[i], nodes[i + 1], 64);
  res.value = std::min(res.straight, refined);
  return res;
}

bool polyball_contains(const WeightModel& w, const CVec& z, double a,
                       const CVec& point) {
  if (!(a > 0.0)) throw std::invalid_argument("polyball_contains: a <= 0");
  const double r = z.squaredNorm();
  CVec pzw = CVec::Zero(z.size());
  if (r > 0.0) pzw = ((z.adjoint() * point)(0) / r) * z;  // P_z point
  const double radial_dev = (z - pzw).norm();
  const double tangential_dev = (point - pzw).norm();
  return radial_dev <= a / std::sqrt(w.dphi(r)) &&
         tangential_dev <= a / std::sqrt(w.dpsi(r));
}

bool polyball_unitary_check(const WeightModel& w, const CMat& U, const CVec& z,
                            double a, const std::vector<CVec>& samples) {
  for (const CVec& s : samples) {
    if (polyball_contains(w, z, a, s) != polyball_contains(w, U * z, a, U * s))
      return false;
  }
  return true;
}

double kernel_diag_ratio(const KernelCoeffs& kc, const CVec& z) {
  const double r = z.squaredNorm();
  const WeightModel& w = kc.weight();
  const double log_res = kc.diag(r).log_F_res;
  const double log_den = std::log(w.dphi(r)) +
                         (kc.dimension() - 1) * std::log(w.dpsi(r));
  return std::exp(log_res - log_den);
}

}  // namespace fock
