#include "fock/berezin.hpp"

#include <cmath>
#include <stdexcept>

#include "fock/quadrature.hpp"

namespace fock {

namespace {

// Summation window for the selection-rule series at squared radius r.
long series_window(const KernelCoeffs& kc, double r, int extra_deg) {
  const WeightModel& w = kc.weight();
  const double peak = w.phi(r) + (kc.dimension() - 1);
  const double sigma = std::sqrt(std::max(r * w.dphi(r), 1.0));
  const long need = long(peak + 13.0 * sigma + 60.0);
  if (need + extra_deg > kc.kmax())
    throw std::range_error(
        "berezin series truncation insufficient at |z|^2=" + std::to_string(r) +
        "; increase kmax");
  return need;
}

// d = 1 radial part: sum_n rho^{2n + a - b} w_{n+a} / (w_n w_{n+a-b}) e^{-log_F}
double berezin_radial_sum(const KernelCoeffs& kc, int a, int b, double rho,
                          double log_F, long window) {
  const double lr = (rho > 0) ? std::log(rho) : -1e300;
  double acc = 0.0;
  const int lo = std::max(0, b - a);  // need n + a - b >= 0
  for (long n = lo; n <= window; ++n) {
    const double lmag = (2.0 * n + a - b) * lr + kc.log_w1(int(n) + a) -
                        kc.log_w1(int(n)) - kc.log_w1(int(n) + a - b) - log_F;
    if (lmag > -45.0) acc += std::exp(lmag);
  }
  return acc;
}

// general-d complex factor for one (alpha, beta) term
Complex berezin_factor(const KernelCoeffs& kc, const CVec& z,
                       const MultiIndex& alpha, const MultiIndex& beta,
                       double log_F, long window) {
  const int d = kc.dimension();
  if (d == 1) {
    const double rho = std::abs(z[0]);
    const int a = alpha[0], b = beta[0];
    const double radial = berezin_radial_sum(kc, a, b, rho, log_F, window);
    if (rho == 0.0)
      return (a == b) ? Complex(radial, 0.0) : Complex(0.0, 0.0);
    const Complex u = z[0] / rho;
    Complex phase(1.0, 0.0);
    for (int i = 0; i < a; ++i) phase *= u;
    for (int i = 0; i < b; ++i) phase *= std::conj(u);
    return radial * phase;
  }
  // lattice sum over nu with nu + alpha - beta >= 0
  MultiIndex delta(alpha);
  for (int i = 0; i < d; ++i) delta[i] -= beta[i];
  Complex phase(1.0, 0.0);
  std::vector<double> ln_az(d);
  for (int i = 0; i < d; ++i) {
    const double az = std::abs(z[i]);
    ln_az[i] = (az > 0) ? std::log(az) : -1e300;
    if (az > 0) {
      const Complex u = z[i] / az;
      for (int q = 0; q < delta[i]; ++q) phase *= u;
      for (int q = 0; q < -delta[i]; ++q) phase *= std::conj(u);
    }
  }
  double acc = 0.0;
  for (const MultiIndex& nu : indices_up_to(d, int(window))) {
    bool ok = true;
    double lmag = -log_F;
    for (int i = 0; i < d; ++i) {
      const int top = nu[i] + delta[i];
      if (top < 0) { ok = false; break; }
      const int pw = 2 * nu[i] + delta[i];
      if (std::abs(z[i]) == 0.0) {
        if (pw != 0) { ok = false; break; }
      } else {
        lmag += pw * ln_az[i];
      }
    }
    if (!ok) continue;
    MultiIndex na(nu), nd(nu);
    for (int i = 0; i < d; ++i) {
      na[i] += alpha[i];
      nd[i] += delta[i];
    }
    lmag += kc.log_w(na) - kc.log_w(nu) - kc.log_w(nd);
    if (lmag > -45.0) acc += std::exp(lmag);
  }
  return acc * phase;
}

int mixed_degree(const MixedSymbol& g) {
  int deg = 0;
  for (const MixedTerm& t : g)
    deg = std::max({deg, total_degree(t.holo), total_degree(t.anti)});
  return deg;
}

}  // namespace

CMat berezin_transform(const MixedSymbol& g, const KernelCoeffs& kc,
                       const CVec& z) {
  if (g.empty()) throw std::invalid_argument("berezin_transform: empty symbol");
  const int m = int(g.front().g.rows());
  const double r = z.squaredNorm();
  const DiagData dd = kc.diag(r, /*allow_extend=*/false);
  const long window = series_window(kc, r, mixed_degree(g));
  CMat out = CMat::Zero(m, m);
  for (const MixedTerm& t : g)
    out += berezin_factor(kc, z, t.holo, t.anti, dd.log_F, window) * t.g;
  return out;
}

MOResult mo_squared(const OperatorSymbol& t, const KernelCoeffs& kc,
                    const CVec& z, MoRoute route) {
  MOResult res;
  res.z = z;
  res.route = route;
  if (route == MoRoute::Hankel) {
    res.mo = hankel_kernel_gram(t, kc, z);
    return res;
  }
  const int m = t.fiber();
  const double r = z.squaredNorm();
  const DiagData dd = kc.diag(r, /*allow_extend=*/false);
  const long window = series_window(kc, r, 2 * t.degree());
  CMat acc = CMat::Zero(m, m);
  for (const auto& [ga, aa] : t.terms())
    for (const auto& [gb, ab] : t.terms()) {
      const Complex f = berezin_factor(kc, z, ga, gb, dd.log_F, window);
      acc += f * (aa * ab.adjoint());
    }
  const CMat tz = t.eval(z);
  acc -= tz * tz.adjoint();
  res.mo = 0.5 * (acc + acc.adjoint()).eval();
  return res;
}

double mo_route_gap(const OperatorSymbol& t, const KernelCoeffs& kc,
                    const CVec& z) {
  const CMat a = mo_squared(t, kc, z, MoRoute::Series).mo;
  const CMat b = mo_squared(t, kc, z, MoRoute::Hankel).mo;
  return (a - b).cwiseAbs().maxCoeff();
}

MOResult mo_squared_checked(const OperatorSymbol& t, const KernelCoeffs& kc,
                            const CVec& z, double tol) {
  MOResult a = mo_squared(t, kc, z, MoRoute::Series);
  const CMat b = mo_squared(t, kc, z, MoRoute::Hankel).mo;
  const double gap = (a.mo - b).cwiseAbs().maxCoeff();
  if (!(gap <= tol))
    throw std::runtime_error(
        "mo_squared: series and hankel routes disagree by " +
        std::to_string(gap) + " (truncation too small)");
  return a;
}

BmoResult bmo_norm(const OperatorSymbol& t, const KernelCoeffs& kc,
                   const Grid& grid) {
  if (grid.radii.empty() || grid.directions.empty())
    throw std::invalid_argument("bmo_norm: empty grid");
  BmoResult res;
  const int d = kc.dimension();
  const int m = t.fiber();
  if (d == 1) {
    // per-radius caching: the selection-rule sums are radial, directions only
    // rotate the phases and T(z)
    std::vector<std::pair<MultiIndex, MultiIndex>> pairs;
    std::vector<CMat> mats;
    for (const auto& [ga, aa] : t.terms())
      for (const auto& [gb, ab] : t.terms()) {
        pairs.push_back({ga, gb});
        mats.push_back(aa * ab.adjoint());
      }
    for (double rho : grid.radii) {
      const double r = rho * rho;
      const DiagData dd = kc.diag(r, false);
      const long window = series_window(kc, r, 2 * t.degree());
      std::vector<double> radial(pairs.size());
      for (size_t i = 0; i < pairs.size(); ++i)
        radial[i] = berezin_radial_sum(kc, pairs[i].first[0], pairs[i].second[0],
                                       rho, dd.log_F, window);
      for (const CVec& u : grid.directions) {
        const CVec z = rho * u;
        CMat acc = CMat::Zero(m, m);
        for (size_t i = 0; i < pairs.size(); ++i) {
          const int a = pairs[i].first[0], b = pairs[i].second[0];
          Complex phase(1.0, 0.0);
          for (int q = 0; q < a; ++q) phase *= u[0];
          for (int q = 0; q < b; ++q) phase *= std::conj(u[0]);
          acc += radial[i] * phase * mats[i];
        }
        const CMat tz = t.eval(z);
        acc -= tz * tz.adjoint();
        const double sem = q_seminorm(0.5 * (acc + acc.adjoint()));
        if (sem > res.seminorm) {
          res.seminorm = sem;
          res.argmax_radius = rho;
        }
      }
    }
  } else {
    for (double rho : grid.radii)
      for (const CVec& u : grid.directions) {
        const CVec z = rho * u;
        const double sem = q_seminorm(mo_squared(t, kc, z, MoRoute::Series).mo);
        if (sem > res.seminorm) {
          res.seminorm = sem;
          res.argmax_radius = rho;
        }
      }
  }
  res.norm = res.seminorm + op_norm(t.eval(CVec::Zero(d)));
  return res;
}

double bmo_decay(const OperatorSymbol& t, const KernelCoeffs& kc, double R,
                 const std::vector<CVec>& directions) {
  if (!(R > 0.0)) throw std::invalid_argument("bmo_decay: R <= 0");
  double out = 0.0;
  double rho = R;
  for (int j = 0; j < 4; ++j, rho *= 1.25) {
    for (const CVec& u : directions) {
      const CMat mo = mo_squared(t, kc, rho * u, MoRoute::Series).mo;
      out = std::max(out, psd_norm(mo));
    }
  }
  return out;
}

namespace {

// Uniform sample from the polyball D(center, a); see the membership rule.
CVec sample_polyball(const WeightModel& w, const CVec& center, double a,
                     std::mt19937_64& rng) {
  const int d = int(center.size());
  const double r = center.squaredNorm();
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double rad_r = a / std::sqrt(w.dphi(r));
  const double rad_t = a / std::sqrt(w.dpsi(r));
  const double cnorm = center.norm();
  const CVec chat = (cnorm > 0) ? CVec(center / cnorm) : CVec::Unit(d, 0);
  // radial disk
  const double rr = rad_r * std::sqrt(unif(rng));
  const double th = 2.0 * M_PI * unif(rng);
  const Complex zeta = cnorm + rr * std::polar(1.0, th);
  CVec out = zeta * chat;
  if (d > 1) {
    // tangential complex (d-1)-ball via Gaussian direction in chat-perp
    std::normal_distribution<double> gauss(0.0, 1.0);
    CVec g(d);
    for (int i = 0; i < d; ++i) g[i] = Complex(gauss(rng), gauss(rng));
    g -= (chat.adjoint() * g)(0) * chat;
    const double gn = g.norm();
    if (gn > 1e-12) {
      const double rad = rad_t * std::pow(unif(rng), 1.0 / (2.0 * (d - 1)));
      out += (rad / gn) * g;
    }
  }
  return out;
}

}  // namespace

PolyballAverage polyball_average_check(const OperatorSymbol& t,
                                       const KernelCoeffs& kc,
                                       const CVec& center, double a,
                                       const CVec& e, int n_samples,
                                       std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const CMat tc = t.eval(center);
  double acc = 0.0;
  for (int i = 0; i < n_samples; ++i) {
    const CVec z = sample_polyball(kc.weight(), center, a, rng);
    const CVec v = (t.eval(z) - tc).adjoint() * e;
    acc += v.squaredNorm();
  }
  PolyballAverage out;
  out.lhs = acc / n_samples;
  const CMat mo = hankel_kernel_gram(t, kc, center);
  out.rhs = std::max(0.0, ((e.adjoint() * (mo * e))(0)).real());
  out.ratio = out.lhs / std::max(out.rhs, 1e-300);
  return out;
}

std::vector<NearConstancyRow> near_constancy_report(
    const KernelCoeffs& kc, const std::vector<CVec>& centers,
    const std::vector<double>& a_list, int n_samples, std::uint64_t seed) {
  std::vector<NearConstancyRow> rows;
  for (double a : a_list) {
    std::mt19937_64 rng(seed);
    NearConstancyRow row;
    row.a = a;
    row.min_ratio = 1e300;
    for (const CVec& c : centers) {
      const double log_kc = kc.diag(c.squaredNorm(), false).log_F;
      for (int i = 0; i < n_samples; ++i) {
        const CVec z = sample_polyball(kc.weight(), c, a, rng);
        const double log_kz = kc.diag(z.squaredNorm(), false).log_F;
        const Complex t = (c.adjoint() * z)(0);  // <z, c>
        const KernelCoeffs::Scaled s = kc.eval_scaled(t);
        const double av = std::abs(s.value);
        const double ratio =
            (av > 0)
                ? std::exp(2.0 * (s.log_scale + std::log(av)) - log_kz - log_kc)
                : 0.0;
        row.min_ratio = std::min(row.min_ratio, ratio);
      }
    }
    row.pass = row.min_ratio >= 0.5;
    rows.push_back(row);
  }
  return rows;
}

PartialIntegralTable mo_schatten_integral(const OperatorSymbol& t,
                                          const KernelCoeffs& kc, double p,
                                          const std::vector<double>& cutoffs,
                                          int n_dirs, std::uint64_t seed) {
  auto field = [&](const CVec& z) {
    return mo_squared(t, kc, z, MoRoute::Series).mo;
  };
  return radial_schatten_integral(field, kc, p, cutoffs, n_dirs, seed);
}

}  // namespace fock
