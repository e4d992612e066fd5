#include "fock/hankel.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "fock/grids.hpp"
#include "fock/quadrature.hpp"

namespace fock {

void MixedExpansion::add(const MultiIndex& anti, const MultiIndex& holo,
                         const CVec& c) {
  if (c.size() != m_) throw std::invalid_argument("MixedExpansion: fiber size");
  for (Term& t : terms_) {
    if (t.anti == anti && t.holo == holo) {
      t.coeff += c;
      return;
    }
  }
  terms_.push_back({anti, holo, c});
}

Complex MixedExpansion::inner(const MixedExpansion& a, const MixedExpansion& b,
                              const KernelCoeffs& kc) {
  // <a,b> = sum over term pairs with n_a + g_b == n_b + g_a of
  //         w_{n_a + g_b} * (c_b^H c_a)
  Complex acc(0, 0);
  for (const Term& ta : a.terms_) {
    for (const Term& tb : b.terms_) {
      const MultiIndex left = fock::add(ta.holo, tb.anti);
      if (left != fock::add(tb.holo, ta.anti)) continue;
      const double w = std::exp(kc.log_w(left));
      acc += w * (tb.coeff.adjoint() * ta.coeff)(0);
    }
  }
  return acc;
}

double MixedExpansion::norm_sq(const KernelCoeffs& kc) const {
  return inner(*this, *this, kc).real();
}

MixedExpansion hankel_apply_basis(const OperatorSymbol& t,
                                  const KernelCoeffs& kc, const MultiIndex& nu,
                                  int j) {
  MixedExpansion out(t.fiber());
  const MultiIndex zero(t.dimension(), 0);
  for (const auto& [gamma, a] : t.terms()) {
    if (total_degree(gamma) == 0) continue;  // constant part projects away
    const CVec c = a.adjoint() * CVec::Unit(t.fiber(), j);
    out.add(gamma, nu, c);
    if (leq(gamma, nu)) {
      const MultiIndex rest = sub(nu, gamma);
      const double ratio = std::exp(kc.log_w(nu) - kc.log_w(rest));
      out.add(zero, rest, -ratio * c);
    }
  }
  return out;
}

TruncatedHankel assemble_hankel(const OperatorSymbol& t, const KernelCoeffs& kc,
                                int n) {
  if (n < 0) throw std::invalid_argument("assemble_hankel: N < 0");
  const int d = t.dimension();
  const int m = t.fiber();
  if (kc.dimension() != d)
    throw std::invalid_argument("assemble_hankel: dimension mismatch");
  if (kc.kmax() < n + t.degree())
    throw std::range_error("assemble_hankel: moment table shorter than N + deg(T)");

  TruncatedHankel th;
  th.symbol_ = t;
  th.n_ = n;
  th.degree_warning_ = n < t.degree();

  const std::vector<MultiIndex> nus = indices_up_to(d, n);
  std::map<MultiIndex, int> pos;
  for (int i = 0; i < int(nus.size()); ++i) pos[nus[i]] = i;
  std::vector<double> log_wnu(nus.size());
  for (size_t i = 0; i < nus.size(); ++i) log_wnu[i] = kc.log_w(nus[i]);

  th.basis_.reserve(nus.size() * m);
  for (const MultiIndex& nu : nus)
    for (int j = 0; j < m; ++j) th.basis_.push_back({nu, j});

  const int dim = int(nus.size()) * m;
  CMat gram = CMat::Zero(dim, dim);

  for (int bi = 0; bi < int(nus.size()); ++bi) {
    const MultiIndex& nu = nus[bi];
    for (const auto& [gamma, ag] : t.terms()) {
      if (total_degree(gamma) == 0) continue;
      const bool has_proj = leq(gamma, nu);
      const MultiIndex rest = has_proj ? sub(nu, gamma) : MultiIndex();
      for (const auto& [gammap, agp] : t.terms()) {
        if (total_degree(gammap) == 0) continue;
        // matching condition: nu' = nu + gamma' - gamma >= 0, |nu'| <= N
        MultiIndex nup = add(nu, gammap);
        bool ok = true;
        for (int i = 0; i < d; ++i) {
          nup[i] -= gamma[i];
          if (nup[i] < 0) ok = false;
        }
        if (!ok || total_degree(nup) > n) continue;
        const auto it = pos.find(nup);
        if (it == pos.end()) continue;
        const int ai = it->second;
        const double lw_nu = log_wnu[bi], lw_nup = log_wnu[ai];
        double s = std::exp(kc.log_w(add(nu, gammap)) - 0.5 * (lw_nu + lw_nup));
        if (has_proj)
          s -= std::exp(0.5 * (lw_nu + lw_nup) - kc.log_w(rest));
        if (s == 0.0) continue;
        const CMat factor = agp * ag.adjoint();  // (j', j) entry ordering
        for (int j = 0; j < m; ++j)
          for (int jp = 0; jp < m; ++jp)
            gram(ai * m + jp, bi * m + j) += s * factor(jp, j);
      }
    }
  }
  gram = 0.5 * (gram + gram.adjoint()).eval();
  th.gram_ = gram;

  Eigen::SelfAdjointEigenSolver<CMat> es(gram, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("assemble_hankel: eigensolver failure");
  const Eigen::VectorXd ev = es.eigenvalues();
  const double top = std::max(0.0, ev.maxCoeff());
  if (ev.minCoeff() < -1e-9 * std::max(top, 1.0))
    throw std::runtime_error(
        "assemble_hankel: Gram matrix has a significantly negative eigenvalue");
  th.s_.resize(dim);
  for (int i = 0; i < dim; ++i)
    th.s_[i] = std::sqrt(std::max(0.0, ev[dim - 1 - i]));
  return th;
}

double TruncatedHankel::schatten_norm(double p) const {
  if (!(p >= 1.0)) throw std::invalid_argument("schatten_norm: p < 1");
  double acc = 0.0;
  for (double s : s_) acc += std::pow(s, p);
  return std::pow(acc, 1.0 / p);
}

double TruncatedHankel::schatten_sq_sum() const {
  double acc = 0.0;
  for (double s : s_) acc += s * s;
  return acc;
}

CMat hankel_kernel_gram(const OperatorSymbol& t, const KernelCoeffs& kc,
                        const CVec& z) {
  const int d = t.dimension();
  const int m = t.fiber();
  const double r = z.squaredNorm();
  const DiagData dd = kc.diag(r, /*allow_extend=*/false);
  const double log_F = dd.log_F;

  // expansion degree: carry k_z until its coefficient mass is negligible
  const WeightModel& w = kc.weight();
  const double peak = w.phi(r) + (d - 1);
  const double sigma = std::sqrt(std::max(r * w.dphi(r), 1.0));
  const int deg = t.degree();
  long cap = long(peak + 13.0 * sigma + 60.0);
  if (cap + deg > kc.kmax())
    throw std::range_error(
        "hankel_kernel_gram: kernel truncation inadequate at |z|^2=" +
        std::to_string(r) + " (k_z tail above 1e-8); increase kmax");

  const std::vector<MultiIndex> nus = indices_up_to(d, int(cap));
  std::map<MultiIndex, int> pos;
  for (int i = 0; i < int(nus.size()); ++i) pos[nus[i]] = i;

  // normalized kernel coefficients c_nu = conj(z)^nu / sqrt(w_nu K(z,z))
  std::vector<Complex> c(nus.size());
  std::vector<double> log_wnu(nus.size());
  std::vector<char> live(nus.size());
  for (size_t i = 0; i < nus.size(); ++i) {
    const MultiIndex& nu = nus[i];
    log_wnu[i] = kc.log_w(nu);
    double lmag = -0.5 * log_wnu[i] - 0.5 * log_F;
    bool zero = false;
    for (int q = 0; q < d; ++q) {
      const double az = std::abs(z[q]);
      if (nu[q] > 0) {
        if (az == 0.0) { zero = true; break; }
        lmag += nu[q] * std::log(az);
      }
    }
    if (zero || lmag < -40.0) {  // |c_nu|^2 < 1e-34: negligible mass
      live[i] = 0;
      c[i] = 0.0;
      continue;
    }
    live[i] = 1;
    Complex phase(1.0, 0.0);
    for (int q = 0; q < d; ++q) {
      if (nu[q] == 0) continue;
      phase *= std::pow(std::conj(z[q]) / std::abs(z[q]), nu[q]);
    }
    c[i] = std::exp(lmag) * phase;
  }

  CMat mo = CMat::Zero(m, m);
  for (const auto& [gamma, ag] : t.terms()) {
    if (total_degree(gamma) == 0) continue;
    for (const auto& [gammap, agp] : t.terms()) {
      if (total_degree(gammap) == 0) continue;
      Complex sigma_gg(0, 0);
      for (size_t bi = 0; bi < nus.size(); ++bi) {
        if (!live[bi]) continue;
        const MultiIndex& nu = nus[bi];
        MultiIndex nup = add(nu, gammap);
        bool ok = true;
        for (int q = 0; q < d; ++q) {
          nup[q] -= gamma[q];
          if (nup[q] < 0) ok = false;
        }
        if (!ok) continue;
        const auto it = pos.find(nup);
        if (it == pos.end()) continue;
        if (!live[it->second]) continue;
        const double lw_nu = log_wnu[bi];
        const double lw_nup = log_wnu[it->second];
        double s = std::exp(kc.log_w(add(nu, gammap)) - 0.5 * (lw_nu + lw_nup));
        if (leq(gamma, nu))
          s -= std::exp(0.5 * (lw_nu + lw_nup) - kc.log_w(sub(nu, gamma)));
        if (s == 0.0) continue;
        sigma_gg += std::conj(c[it->second]) * c[bi] * s;
      }
      mo += sigma_gg * (agp * ag.adjoint());
    }
  }
  return 0.5 * (mo + mo.adjoint()).eval();
}

double hankel_on_kernel(const OperatorSymbol& t, const KernelCoeffs& kc,
                        const CVec& z, const CVec& e) {
  if (std::abs(e.norm() - 1.0) > 1e-8)
    throw std::invalid_argument("hankel_on_kernel: e must be a unit vector");
  const CMat mo = hankel_kernel_gram(t, kc, z);
  const Complex v = (e.adjoint() * (mo * e))(0);
  return std::sqrt(std::max(0.0, v.real()));
}

namespace {

// Directional rule on the unit sphere of C^d with total weight sigma(S^{2d-1}).
struct SphereRule {
  std::vector<CVec> points;
  std::vector<double> weights;
};

SphereRule sphere_rule(int d, int n_dirs, std::uint64_t seed) {
  SphereRule rule;
  if (d == 1) {
    for (int i = 0; i < n_dirs; ++i) {
      const double th = 2.0 * M_PI * i / n_dirs;
      CVec u(1);
      u[0] = std::polar(1.0, th);
      rule.points.push_back(u);
      rule.weights.push_back(2.0 * M_PI / n_dirs);
    }
    return rule;
  }
  if (d == 2) {
    // z = (cos a e^{i t1}, sin a e^{i t2}), dsigma = cos a sin a da dt1 dt2
    const int nth = std::max(5, n_dirs);
    const int na = std::max(4, n_dirs / 2);
    const auto& gl = quad::gl_rule(na);
    for (int ia = 0; ia < na; ++ia) {
      const double a = 0.25 * M_PI * (gl.x[ia] + 1.0);
      const double wa = 0.25 * M_PI * gl.w[ia] * std::cos(a) * std::sin(a);
      for (int i1 = 0; i1 < nth; ++i1)
        for (int i2 = 0; i2 < nth; ++i2) {
          CVec u(2);
          u[0] = std::cos(a) * std::polar(1.0, 2.0 * M_PI * i1 / nth);
          u[1] = std::sin(a) * std::polar(1.0, 2.0 * M_PI * i2 / nth);
          rule.points.push_back(u);
          rule.weights.push_back(wa * (2.0 * M_PI / nth) * (2.0 * M_PI / nth));
        }
    }
    return rule;
  }
  // d >= 3: quasi-random average, weights sum to the sphere measure
  const double total = 2.0 * std::pow(M_PI, d) / std::tgamma(double(d));
  const std::vector<CVec> dirs = sphere_directions(d, std::max(64, n_dirs * n_dirs), seed);
  for (const CVec& u : dirs) {
    rule.points.push_back(u);
    rule.weights.push_back(total / dirs.size());
  }
  return rule;
}

// Radius beyond which rho^{2q} e^{-Psi(rho^2)} has decayed below 1e-22 of its peak.
double radial_decay_bound(const WeightModel& w, double q) {
  auto L = [&](double s) { return (q > 0 ? q * std::log(s) : 0.0) - w.psi(s); };
  const double s_star = q > 0 ? w.phi_inverse(q) : 0.0;
  const double l_star = q > 0 ? L(s_star) : -w.psi(0.0);
  double hi = std::max(1.0, s_star);
  while (L(hi) - l_star > -55.0) hi *= 2.0;
  return std::sqrt(hi);
}

}  // namespace

PartialIntegralTable radial_schatten_integral(
    const std::function<CMat(const CVec&)>& psd_field, const KernelCoeffs& kc,
    double p, const std::vector<double>& cutoffs, int n_dirs,
    std::uint64_t seed) {
  if (cutoffs.size() < 2)
    throw std::invalid_argument("radial_schatten_integral: need >= 2 cutoffs");
  PartialIntegralTable out;
  out.p = p;
  out.below_paper_regime = p < 2.0;
  out.cutoffs = cutoffs;
  const int d = kc.dimension();
  const WeightModel& w = kc.weight();
  const std::vector<CVec> dirs = sphere_directions(d, n_dirs, seed);
  const double sphere_total = 2.0 * std::pow(M_PI, d) / std::tgamma(double(d));

  auto shell = [&](double rho) {
    const double r = rho * rho;
    const DiagData dd = kc.diag(r);
    double avg = 0.0;
    for (const CVec& u : dirs) {
      const CMat a = psd_field(rho * u);
      if (a.rows() == 1) {
        avg += std::pow(std::max(0.0, a(0, 0).real()), 0.5 * p);
      } else {
        Eigen::SelfAdjointEigenSolver<CMat> es(a, Eigen::EigenvaluesOnly);
        for (int i = 0; i < a.rows(); ++i)
          avg += std::pow(std::max(0.0, es.eigenvalues()[i]), 0.5 * p);
      }
    }
    avg /= dirs.size();
    // K(z,z) e^{-Psi} dm = exp(log_F_res) * rho^{2d-1} dsigma drho
    return std::pow(rho, 2 * d - 1) * std::exp(dd.log_F_res) * avg * sphere_total;
  };

  double acc = 0.0, prev = 0.0;
  for (double cut : cutoffs) {
    acc += quad::adaptive_gk(shell, prev, cut, 1e-8, 1e-14).value;
    out.partials.push_back(acc);
    prev = cut;
  }
  out.divergent = true;
  for (size_t i = 1; i < out.partials.size(); ++i) {
    if (!(out.partials[i] > 1.05 * out.partials[i - 1])) out.divergent = false;
  }
  return out;
}

PartialIntegralTable besov_integral(const OperatorSymbol& t,
                                    const KernelCoeffs& kc, double p,
                                    const std::vector<double>& cutoffs,
                                    int n_dirs, std::uint64_t seed) {
  auto field = [&](const CVec& z) {
    const BergmanData bd = bergman_data(kc, z);
    return q_matrix(t, bd, QRoute::BInv).q;
  };
  return radial_schatten_integral(field, kc, p, cutoffs, n_dirs, seed);
}

IdentityCheck trace_identity_check(const CMat& s, const KernelCoeffs& kc,
                                   int basis_degree, int m, std::uint64_t seed) {
  const int d = kc.dimension();
  const std::vector<MultiIndex> nus = indices_up_to(d, basis_degree);
  const int dim = int(nus.size()) * m;
  if (s.rows() != dim || s.cols() != dim)
    throw std::invalid_argument("trace_identity_check: S must be " +
                                std::to_string(dim) + " dimensional");
  Eigen::SelfAdjointEigenSolver<CMat> es(s, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() <
      -1e-9 * std::max(1.0, es.eigenvalues().maxCoeff()))
    throw std::invalid_argument("trace_identity_check: S is not PSD");

  IdentityCheck out;
  out.lhs = s.trace().real();

  const WeightModel& w = kc.weight();
  std::vector<double> log_wnu(nus.size());
  for (size_t i = 0; i < nus.size(); ++i) log_wnu[i] = kc.log_w(nus[i]);

  const int nth = 2 * basis_degree + 5;
  SphereRule rule = sphere_rule(d, nth, seed);
  std::mt19937_64 rng(seed);

  auto big_g = [&](const CVec& z) {
    // sum_k <S (K_z e_k), K_z e_k> over a random orthonormal frame
    CVec u(int(nus.size()));
    for (size_t i = 0; i < nus.size(); ++i) {
      Complex mono(1.0, 0.0);
      for (int q = 0; q < d; ++q)
        for (int rep = 0; rep < nus[i][q]; ++rep) mono *= z[q];
      u[int(i)] = std::conj(mono) * std::exp(-0.5 * log_wnu[i]);
    }
    const CMat frame = random_unitary(m, rng);
    CMat v(dim, m);
    for (int ip = 0; ip < int(nus.size()); ++ip)
      for (int j = 0; j < m; ++j)
        for (int k = 0; k < m; ++k) v(ip * m + j, k) = u[ip] * frame(j, k);
    return (v.adjoint() * (s * v)).trace().real();
  };

  const double rho_max = radial_decay_bound(w, 2.0 * basis_degree + d - 1 + 2);
  auto radial = [&](double rho) {
    const double r = rho * rho;
    double acc = 0.0;
    for (size_t i = 0; i < rule.points.size(); ++i)
      acc += rule.weights[i] * big_g(rho * rule.points[i]);
    return std::pow(rho, 2 * d - 1) * std::exp(-w.psi(r)) * acc;
  };
  out.rhs = quad::adaptive_gk(radial, 0.0, rho_max, 1e-8, 1e-16).value;
  out.rel_gap = std::abs(out.lhs - out.rhs) / std::max(std::abs(out.lhs), 1e-300);
  return out;
}

IdentityCheck hs_multiplier_identity_check(const MixedSymbol& r,
                                           const KernelCoeffs& kc,
                                           int basis_degree, int m) {
  const int d = kc.dimension();
  const WeightModel& wm = kc.weight();
  const std::vector<MultiIndex> nus = indices_up_to(d, basis_degree);
  IdentityCheck out;

  // direct side: sum_{nu,k} || R(.) e_nu f_k ||^2 by exact moment algebra
  double direct = 0.0;
  for (const MultiIndex& nu : nus) {
    const double lw_nu = kc.log_w(nu);
    for (int k = 0; k < m; ++k) {
      for (const MixedTerm& ta : r) {
        for (const MixedTerm& tb : r) {
          if (add(ta.holo, tb.anti) != add(tb.holo, ta.anti)) continue;
          const MultiIndex top = add(add(nu, ta.holo), tb.anti);
          if (total_degree(top) > kc.kmax())
            throw std::range_error("hs_multiplier_identity_check: moment table too short");
          const double wfac = std::exp(kc.log_w(top) - lw_nu);
          const Complex hh =
              ((tb.g * CVec::Unit(m, k)).adjoint() * (ta.g * CVec::Unit(m, k)))(0);
          direct += wfac * hh.real();
        }
      }
    }
  }
  out.lhs = direct;

  // integral side: quadrature of ||R(z)||_{S^2}^2 K_D(z,z) dmu
  std::vector<double> log_wnu(nus.size());
  for (size_t i = 0; i < nus.size(); ++i) log_wnu[i] = kc.log_w(nus[i]);
  int maxdeg = 0;
  for (const MixedTerm& tt : r)
    maxdeg = std::max(maxdeg, total_degree(tt.holo) + total_degree(tt.anti));
  SphereRule rule = sphere_rule(d, 2 * (basis_degree + maxdeg) + 5, 99);

  auto integrand = [&](const CVec& z) {
    CMat rv = CMat::Zero(m, m);
    for (const MixedTerm& tt : r)
      rv += mi_power(z, tt.holo) * std::conj(mi_power(z, tt.anti)) * tt.g;
    double kd = 0.0;
    for (size_t i = 0; i < nus.size(); ++i) {
      double mag2 = 1.0;
      for (int q = 0; q < d; ++q)
        for (int rep = 0; rep < nus[i][q]; ++rep) mag2 *= std::norm(z[q]);
      kd += mag2 * std::exp(-log_wnu[i]);
    }
    return rv.squaredNorm() * kd;
  };
  const double rho_max =
      radial_decay_bound(wm, 2.0 * (basis_degree + maxdeg) + d - 1 + 2);
  auto radial = [&](double rho) {
    const double rr = rho * rho;
    double acc = 0.0;
    for (size_t i = 0; i < rule.points.size(); ++i)
      acc += rule.weights[i] * integrand(rho * rule.points[i]);
    return std::pow(rho, 2 * d - 1) * std::exp(-wm.psi(rr)) * acc;
  };
  out.rhs = quad::adaptive_gk(radial, 0.0, rho_max, 1e-9, 1e-16).value;
  out.rel_gap = std::abs(out.lhs - out.rhs) / std::max(std::abs(out.lhs), 1e-300);
  return out;
}

}  // namespace fock
