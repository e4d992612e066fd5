#pragma once

#include <string>

namespace fock {

enum class WeightFamily { Gaussian, Power, Exp };

// Radial weight profile Psi defining the measure exp(-Psi(|z|^2)) dm_d on C^d.
// Admissible profiles are C^3 with Psi' > 0, Psi'' >= 0, Psi''' >= 0; the
// derived function Phi(x) = x Psi'(x) then has Phi' > 0. Derivatives are
// analytically exact for the built-in families.
class WeightModel {
 public:
  WeightFamily family() const { return family_; }
  double exponent() const { return s_; }  // power family only
  double eta() const { return eta_; }     // smoothness-class exponent, < 1/2
  std::string label() const;

  double psi(double x) const;
  double dpsi(double x) const;
  double d2psi(double x) const;
  double d3psi(double x) const;

  double phi(double x) const { return x * dpsi(x); }
  double dphi(double x) const { return dpsi(x) + x * d2psi(x); }
  double d2phi(double x) const { return 2.0 * d2psi(x) + x * d3psi(x); }

  // Inverse of the increasing map x -> Phi(x); used to locate series peaks.
  double phi_inverse(double y) const;

  // Second-order Taylor remainder Psi(x+delta) - Psi(x) - Psi'(x) delta,
  // computed without cancellation. Saddle-point evaluations subtract terms of
  // size Psi' * delta from each other; forming the remainder directly keeps
  // log-scale arithmetic exact even when Psi' overflows the difference scale.
  double psi_rem(double x, double delta) const;

  // Phi(x+delta) - Phi(x) without cancellation.
  double phi_diff(double x, double delta) const;

 private:
  friend WeightModel make_weight(WeightFamily, double, double);
  WeightModel(WeightFamily f, double s, double eta)
      : family_(f), s_(s), eta_(eta) {}
  WeightFamily family_;
  double s_;
  double eta_;
};

// Builds a weight and validates the admissibility conditions, both on the
// family parameters and by sampling Psi', Psi'', Psi''' on a log-spaced grid
// (200 points on [1e-3, 1e3] by default). Throws std::invalid_argument naming
// the violated condition.
//   Gaussian: Psi(x) = x
//   Power:    Psi(x) = x^s, requires s = 1 or s >= 2 (else Psi''' < 0)
//   Exp:      Psi(x) = e^x
WeightModel make_weight(WeightFamily family, double param = 0.0,
                        double eta = 0.25);
WeightModel make_weight(const std::string& family, double param = 0.0,
                        double eta = 0.25);

enum class WeightComponent { Phi, Psi };

struct ClassSReport {
  double eta = 0.0;
  double max_ratio = 0.0;  // sup of g''(x) sqrt(x) / g'(x)^{1+eta} on the grid
  double argmax_x = 0.0;
  double ceiling = 0.0;
  bool pass = false;
};

// Bounded-ratio diagnostic for the smoothness class of g in {Phi, Psi}:
// samples g''(x) x^{1/2} / [g'(x)]^{1+eta} on a log-spaced grid over
// [x_lo, x_hi] and passes iff the empirical sup stays below `ceiling`.
// Requires eta < 1/2 and g' > 0 on the range (else std::domain_error).
ClassSReport class_s_diagnostic(const WeightModel& w, WeightComponent g,
                                double eta, double x_lo, double x_hi,
                                int n_points = 200, double ceiling = 1e3);

// log(1+x) - x evaluated without cancellation.
double log1p_minus_x(double x);

}  // namespace fock
