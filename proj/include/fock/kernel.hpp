#pragma once

#include <memory>
#include <vector>

#include "fock/moments.hpp"
#include "fock/types.hpp"
#include "fock/weights.hpp"

namespace fock {

// Diagonal kernel data at squared radius r = |z|^2. With F(r) = K(z,z) and
// u = log F:  u1 = F'/F = mean/r  and  lambda = u1 + r u2 = var/r, where
// mean/var are the moments of the distribution p_k ~ f_k r^k. The mean/var
// form avoids the catastrophic cancellation in F''/F - (F'/F)^2.
struct DiagData {
  double r = 0.0;
  double log_F = 0.0;
  double log_F_res = 0.0;  // log F(r) - Psi(r); resolved even when Psi is huge
  double mu = 0.0;         // F'/F
  double lambda = 0.0;     // (F'/F) + r (F'/F)'
  double u2 = 0.0;         // (F'/F)'
  double tail_rel = 0.0;
  bool extended = false;  // true when the continuum route was used
};

// Expansion coefficients of the reproducing kernel K(z,w) = F(<z,w>),
// F(t) = sum_k f_k t^k with f_k = (d-1+k)! / (pi^d k! M_k), together with the
// monomial norms w_nu = pi^d nu! M_{|nu|} / (d-1+|nu|)!. All stored in logs.
class KernelCoeffs {
 public:
  KernelCoeffs(WeightModel w, MomentTable moments);

  int dimension() const { return d_; }
  int kmax() const { return int(log_f_.size()) - 1; }
  const WeightModel& weight() const { return weight_; }
  const MomentTable& moments() const { return moments_; }

  double log_f(int k) const { return log_f_[k]; }
  double log_w(const MultiIndex& nu) const;
  double log_w1(int k) const;  // log w_nu for |nu| = k in d = 1

  // Diagonal quantities at r = |z|^2. Uses the coefficient table when it
  // covers the series peak; otherwise (allow_extend) falls back to a
  // continuous-index Euler-Maclaurin quadrature, valid far from the origin.
  // Throws std::range_error when neither route applies.
  DiagData diag(double r, bool allow_extend = true) const;

  // Whether the table covers the series at squared radius r.
  bool series_covered(double r) const;
  // Largest squared radius the table covers (for sampling bounds).
  double covered_radius_sq() const;

  struct Scaled {
    double log_scale = 0.0;
    Complex value{1.0, 0.0};  // K = exp(log_scale) * value
    double tail_rel = 0.0;
  };
  Scaled eval_scaled(Complex t) const;  // K(z,w) at t = <z,w>

  // K(z,w); throws std::range_error when the series tail exceeds 1e-12 of the
  // partial sum (suggesting a larger kmax) or the value overflows double.
  Complex eval(const CVec& z, const CVec& w) const;
  Complex eval_F(Complex t) const;
  double log_diag(const CVec& z) const;  // log K(z,z)

 private:
  DiagData diag_table(double r) const;
  DiagData diag_extended(double r) const;

  WeightModel weight_;
  MomentTable moments_;
  int d_;
  std::vector<double> log_f_;
  double log_pi_d_;
};

KernelCoeffs kernel_coeffs(const WeightModel& w, const MomentTable& moments);

// Bergman matrix B(z) = lambda P_z + mu (I - P_z) and companions; at z = 0 the
// convention is P_0 = 0, B(0) = (F'/F)(0) I.
struct BergmanData {
  CVec z;
  double r = 0.0;
  double lambda = 0.0;
  double mu = 0.0;
  double log_K = 0.0;
  CMat P;         // projection onto span{z} (zero matrix at z = 0)
  CMat B;
  CMat B_inv;
  CMat B_inv_sqrt;
};

BergmanData bergman_data(const KernelCoeffs& kc, const CVec& z);

// (F'/F, (F'/F)') at r = |z|^2.
inline std::pair<double, double> eval_logF_derivatives(const KernelCoeffs& kc,
                                                       double r) {
  const DiagData dd = kc.diag(r);
  return {dd.mu, dd.u2};
}

// beta(z, xi) = sqrt(<B(z) xi, xi>)
double bergman_metric(const BergmanData& bd, const CVec& xi);

// Cached radial interpolation of (lambda, mu) for fast metric evaluation
// along curves. Valid for |z|^2 <= r_max.
class RadialProfile {
 public:
  RadialProfile(const KernelCoeffs& kc, double r_max, int n_points = 2048);
  double lambda(double r) const;
  double mu(double r) const;
  double beta(const CVec& p, const CVec& v) const;
  double r_max() const { return r_max_; }

 private:
  double interp(const std::vector<double>& tab, double r) const;
  double r_min_, r_max_;
  double lambda0_;
  std::vector<double> log_lambda_, log_mu_;
};

// Upper bound on the Bergman distance: minimum of the straight segment and a
// coordinate-descent refined polyline, with beta integrated by Gauss-Legendre
// panels along each leg.
struct DistanceResult {
  double value = 0.0;
  double straight = 0.0;
  bool upper_bound = true;
};
DistanceResult bergman_distance(const KernelCoeffs& kc, const CVec& z,
                                const CVec& w, const RadialProfile* profile = nullptr,
                                int legs = 8, int sweeps = 3);

// Membership in the anisotropic neighborhood
// D(z,a) = { w : |z - P_z w| <= a Phi'(|z|^2)^{-1/2},
//            |w - P_z w| <= a Psi'(|z|^2)^{-1/2} }.
bool polyball_contains(const WeightModel& w, const CVec& z, double a,
                       const CVec& point);

// Checks U(D(z,a)) = D(Uz,a) on the given sample points.
bool polyball_unitary_check(const WeightModel& w, const CMat& U, const CVec& z,
                            double a, const std::vector<CVec>& samples);

// K(z,z) / [ e^{Psi(r)} Phi'(r) Psi'(r)^{d-1} ], computed in log space.
double kernel_diag_ratio(const KernelCoeffs& kc, const CVec& z);

}  // namespace fock
