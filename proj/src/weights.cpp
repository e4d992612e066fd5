#include "fock/weights.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace fock {

std::string WeightModel::label() const {
  switch (family_) {
    case WeightFamily::Gaussian:
      return "gaussian";
    case WeightFamily::Exp:
      return "exp";
    case WeightFamily::Power: {
      std::ostringstream os;
      os << "power-" << s_;
      return os.str();
    }
  }
  return "?";
}

double WeightModel::psi(double x) const {
  switch (family_) {
    case WeightFamily::Gaussian:
      return x;
    case WeightFamily::Power:
      return std::pow(x, s_);
    case WeightFamily::Exp:
      return std::exp(x);
  }
  return 0;
}

double WeightModel::dpsi(double x) const {
  switch (family_) {
    case WeightFamily::Gaussian:
      return 1.0;
    case WeightFamily::Power:
      return s_ * std::pow(x, s_ - 1.0);
    case WeightFamily::Exp:
      return std::exp(x);
  }
  return 0;
}

double WeightModel::d2psi(double x) const {
  switch (family_) {
    case WeightFamily::Gaussian:
      return 0.0;
    case WeightFamily::Power:
      return s_ * (s_ - 1.0) * std::pow(x, s_ - 2.0);
    case WeightFamily::Exp:
      return std::exp(x);
  }
  return 0;
}

double WeightModel::d3psi(double x) const {
  switch (family_) {
    case WeightFamily::Gaussian:
      return 0.0;
    case WeightFamily::Power:
      return s_ * (s_ - 1.0) * (s_ - 2.0) * std::pow(x, s_ - 3.0);
    case WeightFamily::Exp:
      return std::exp(x);
  }
  return 0;
}

double WeightModel::phi_inverse(double y) const {
  if (y <= 0.0) return 0.0;
  switch (family_) {
    case WeightFamily::Gaussian:
      return y;  // Phi(x) = x
    case WeightFamily::Power:
      return std::pow(y / s_, 1.0 / s_);  // Phi(x) = s x^s
    case WeightFamily::Exp:
      break;  // Phi(x) = x e^x, invert numerically below
  }
  // bisection on the increasing map
  double lo = 0.0, hi = 1.0;
  while (phi(hi) < y) hi *= 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (phi(mid) < y ? lo : hi) = mid;
    if (hi - lo < 1e-14 * (1.0 + hi)) break;
  }
  return 0.5 * (lo + hi);
}

double log1p_minus_x(double x) {
  if (std::abs(x) < 1e-3) {
    // sum_{k>=2} (-1)^{k-1} x^k / k = -x^2/2 + x^3/3 - ...
    double acc = 0.0, xk = x;
    for (int k = 2; k <= 14; ++k) {
      xk *= x;
      acc += ((k % 2 == 0) ? -1.0 : 1.0) * xk / k;
    }
    return acc;
  }
  return std::log1p(x) - x;
}

double WeightModel::psi_rem(double x, double delta) const {
  switch (family_) {
    case WeightFamily::Gaussian:
      return 0.0;
    case WeightFamily::Exp:
      // e^x (e^delta - 1 - delta)
      if (std::abs(delta) < 1e-3) {
        double acc = 0.0, dk = delta;
        double fact = 1.0;
        for (int k = 2; k <= 14; ++k) {
          dk *= delta;
          fact *= k;
          acc += dk / fact;
        }
        return std::exp(x) * acc;
      }
      return std::exp(x) * (std::expm1(delta) - delta);
    case WeightFamily::Power: {
      // x^s [ (1+u)^s - 1 - s u ],  u = delta / x
      const double u = delta / x;
      const double scale = std::pow(x, s_);
      if (std::abs(u) < 1e-3) {
        // binomial tail sum_{k>=2} C(s,k) u^k
        double acc = 0.0, coef = s_, uk = 1.0;
        for (int k = 2; k <= 14; ++k) {
          coef *= (s_ - (k - 1)) / k;
          uk *= u;
          acc += coef * uk * u;
        }
        return scale * acc;
      }
      return scale * (std::expm1(s_ * std::log1p(u)) - s_ * u);
    }
  }
  return 0.0;
}

double WeightModel::phi_diff(double x, double delta) const {
  switch (family_) {
    case WeightFamily::Gaussian:
      return delta;  // Phi(x) = x
    case WeightFamily::Power: {
      // Phi = s x^s: s x^s expm1(s log1p(delta/x))
      const double u = delta / x;
      if (std::abs(u) < 1e-6)
        return s_ * std::pow(x, s_) * (s_ * u * (1.0 + 0.5 * (s_ - 1.0) * u));
      return s_ * std::pow(x, s_) * std::expm1(s_ * std::log1p(u));
    }
    case WeightFamily::Exp:
      // Phi = x e^x: e^x [ x expm1(delta) + delta e^delta ]
      return std::exp(x) * (x * std::expm1(delta) + delta * std::exp(delta));
  }
  return 0.0;
}

namespace {

void validate_on_grid(const WeightModel& w) {
  const int n = 200;
  const double lo = std::log(1e-3), hi = std::log(1e3);
  for (int i = 0; i < n; ++i) {
    const double x = std::exp(lo + (hi - lo) * i / (n - 1.0));
    if (!(w.dpsi(x) > 0.0))
      throw std::invalid_argument("weight rejected: Psi'(x) <= 0 at x=" +
                                  std::to_string(x));
    if (w.d2psi(x) < -1e-14 * std::abs(w.dpsi(x)))
      throw std::invalid_argument("weight rejected: Psi''(x) < 0 at x=" +
                                  std::to_string(x));
    if (w.d3psi(x) < -1e-14 * (std::abs(w.d2psi(x)) + 1.0))
      throw std::invalid_argument("weight rejected: Psi''' < 0 at x=" +
                                  std::to_string(x));
    if (!(w.dphi(x) > 0.0))
      throw std::invalid_argument("weight rejected: Phi'(x) <= 0 at x=" +
                                  std::to_string(x));
  }
}

}  // namespace

WeightModel make_weight(WeightFamily family, double param, double eta) {
  if (!(eta < 0.5))
    throw std::invalid_argument("weight rejected: eta >= 1/2");
  if (family == WeightFamily::Power) {
    if (!(param == 1.0 || param >= 2.0)) {
      if (param > 1.0 && param < 2.0)
        throw std::invalid_argument(
            "weight rejected: Psi''' < 0 for power exponent s in (1,2)");
      throw std::invalid_argument(
          "weight rejected: power exponent must be s = 1 or s >= 2");
    }
  }
  WeightModel w(family, param, eta);
  validate_on_grid(w);
  return w;
}

WeightModel make_weight(const std::string& family, double param, double eta) {
  if (family == "gaussian") return make_weight(WeightFamily::Gaussian, 0, eta);
  if (family == "power") return make_weight(WeightFamily::Power, param, eta);
  if (family == "exp") return make_weight(WeightFamily::Exp, 0, eta);
  throw std::invalid_argument("unknown weight family: " + family);
}

ClassSReport class_s_diagnostic(const WeightModel& w, WeightComponent g,
                                double eta, double x_lo, double x_hi,
                                int n_points, double ceiling) {
  if (!(eta < 0.5)) throw std::invalid_argument("class_s_diagnostic: eta >= 1/2");
  if (!(x_lo > 0.0 && x_hi > x_lo))
    throw std::invalid_argument("class_s_diagnostic: range must be in (0,inf)");
  ClassSReport rep;
  rep.eta = eta;
  rep.ceiling = ceiling;
  const double llo = std::log(x_lo), lhi = std::log(x_hi);
  for (int i = 0; i < n_points; ++i) {
    const double x = std::exp(llo + (lhi - llo) * i / (n_points - 1.0));
    const double g1 = (g == WeightComponent::Phi) ? w.dphi(x) : w.dpsi(x);
    const double g2 = (g == WeightComponent::Phi) ? w.d2phi(x) : w.d2psi(x);
    if (!(g1 > 0.0))
      throw std::domain_error("class_s_diagnostic: g' vanishes on the range");
    const double ratio = g2 * std::sqrt(x) / std::pow(g1, 1.0 + eta);
    if (ratio > rep.max_ratio) {
      rep.max_ratio = ratio;
      rep.argmax_x = x;
    }
  }
  rep.pass = rep.max_ratio <= ceiling;
  return rep;
}

}  // namespace fock
