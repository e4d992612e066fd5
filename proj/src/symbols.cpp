#include "fock/symbols.hpp"

#include <cmath>
#include <stdexcept>

namespace fock {

OperatorSymbol::OperatorSymbol(int d, int m, int max_degree)
    : d_(d), m_(m), max_degree_(max_degree) {
  if (d < 1 || m < 1) throw std::invalid_argument("OperatorSymbol: d, m >= 1");
}

int OperatorSymbol::degree() const {
  int deg = 0;
  for (const auto& [g, a] : terms_) deg = std::max(deg, total_degree(g));
  return deg;
}

void OperatorSymbol::set_term(const MultiIndex& gamma, const CMat& a) {
  if (int(gamma.size()) != d_)
    throw std::invalid_argument("set_term: index size != d");
  if (!nonnegative(gamma))
    throw std::invalid_argument("set_term: negative exponent");
  if (total_degree(gamma) > max_degree_)
    throw std::invalid_argument("set_term: degree above configured max");
  if (a.rows() != m_ || a.cols() != m_)
    throw std::invalid_argument("set_term: coefficient must be m x m");
  if (a.norm() == 0.0)
    terms_.erase(gamma);
  else
    terms_[gamma] = a;
}

CMat OperatorSymbol::eval(const CVec& z) const {
  CMat v = CMat::Zero(m_, m_);
  for (const auto& [g, a] : terms_) v += mi_power(z, g) * a;
  return v;
}

CMat OperatorSymbol::d_coord(int k, const CVec& z) const {
  CMat v = CMat::Zero(m_, m_);
  for (const auto& [g, a] : terms_) {
    if (g[k] == 0) continue;
    MultiIndex h(g);
    h[k] -= 1;
    v += double(g[k]) * mi_power(z, h) * a;
  }
  return v;
}

std::vector<CMat> OperatorSymbol::gradient(const CVec& z) const {
  std::vector<CMat> out;
  out.reserve(d_);
  for (int k = 0; k < d_; ++k) out.push_back(d_coord(k, z));
  return out;
}

CMat OperatorSymbol::radial(const CVec& z) const {
  // RT = sum_gamma |gamma| A_gamma z^gamma
  CMat v = CMat::Zero(m_, m_);
  for (const auto& [g, a] : terms_)
    v += double(total_degree(g)) * mi_power(z, g) * a;
  return v;
}

CMat OperatorSymbol::tangential(int i, int j, const CVec& z) const {
  return std::conj(z[i]) * d_coord(j, z) - std::conj(z[j]) * d_coord(i, z);
}

OperatorSymbol OperatorSymbol::fejer(int n) const {
  if (n < 0) throw std::invalid_argument("fejer: N < 0");
  OperatorSymbol out(d_, m_, max_degree_);
  for (const auto& [g, a] : terms_) {
    double mult = 1.0;
    for (int v : g) mult *= std::max(0.0, 1.0 - double(v) / (n + 1.0));
    if (mult > 0.0) out.set_term(g, mult * a);
  }
  return out;
}

OperatorSymbol OperatorSymbol::rotate(const std::vector<double>& theta) const {
  OperatorSymbol out(d_, m_, max_degree_);
  for (const auto& [g, a] : terms_) {
    double phase = 0.0;
    for (int k = 0; k < d_; ++k) phase += g[k] * theta[k];
    out.set_term(g, std::polar(1.0, phase) * a);
  }
  return out;
}

OperatorSymbol OperatorSymbol::operator+(const OperatorSymbol& other) const {
  OperatorSymbol out(*this);
  for (const auto& [g, a] : other.terms_) {
    auto it = out.terms_.find(g);
    if (it == out.terms_.end())
      out.terms_[g] = a;
    else {
      it->second += a;
      if (it->second.norm() == 0.0) out.terms_.erase(it);
    }
  }
  return out;
}

OperatorSymbol OperatorSymbol::operator-(const OperatorSymbol& other) const {
  return *this + other.scaled(Complex(-1.0, 0.0));
}

OperatorSymbol OperatorSymbol::scaled(Complex c) const {
  OperatorSymbol out(*this);
  for (auto& [g, a] : out.terms_) a *= c;
  return out;
}

OperatorSymbol random_symbol(int d, int m, int deg, std::mt19937_64& rng,
                             double density) {
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  OperatorSymbol t(d, m, std::max(8, deg));
  bool any = false;
  for (const MultiIndex& g : indices_up_to(d, deg)) {
    if (total_degree(g) > 0 && coin(rng) > density) continue;
    CMat a(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) a(i, j) = Complex(unif(rng), unif(rng));
    t.set_term(g, a);
    if (total_degree(g) > 0) any = true;
  }
  if (!any) {
    MultiIndex g(d, 0);
    g[0] = 1;
    CMat a(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) a(i, j) = Complex(unif(rng), unif(rng));
    t.set_term(g, a);
  }
  return t;
}

SymbolDerivatives symbol_derivatives(const OperatorSymbol& t, const CVec& z) {
  SymbolDerivatives out;
  out.value = t.eval(z);
  out.gradient = t.gradient(z);
  const int d = t.dimension();
  out.radial = CMat::Zero(t.fiber(), t.fiber());
  for (int k = 0; k < d; ++k) out.radial += z[k] * out.gradient[k];
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j)
      out.tangential[{i, j}] =
          std::conj(z[i]) * out.gradient[j] - std::conj(z[j]) * out.gradient[i];
  return out;
}

QMatrix q_matrix(const OperatorSymbol& t, const BergmanData& bd, QRoute route) {
  const int d = t.dimension();
  const int m = t.fiber();
  QMatrix out;
  out.z = bd.z;
  out.route = route;
  out.q = CMat::Zero(m, m);
  const std::vector<CMat> grad = t.gradient(bd.z);
  switch (route) {
    case QRoute::BInv: {
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
          out.q += std::conj(bd.B_inv(i, j)) * grad[j] * grad[i].adjoint();
      break;
    }
    case QRoute::Eigenvalue: {
      if (bd.r <= 0.0)
        throw std::invalid_argument(
            "q_matrix: eigenvalue route undefined at z = 0; use the B-inverse route");
      CMat rt = CMat::Zero(m, m);
      for (int k = 0; k < d; ++k) rt += bd.z[k] * grad[k];
      out.q = (1.0 / (bd.lambda * bd.r)) * rt * rt.adjoint();
      for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) {
          const CMat tij =
              std::conj(bd.z[i]) * grad[j] - std::conj(bd.z[j]) * grad[i];
          out.q += (1.0 / (bd.mu * bd.r)) * tij * tij.adjoint();
        }
      break;
    }
    case QRoute::Columns: {
      for (int j = 0; j < d; ++j) {
        CMat cj = CMat::Zero(m, m);
        for (int k = 0; k < d; ++k) cj += bd.B_inv_sqrt(k, j) * grad[k];
        out.q += cj * cj.adjoint();
      }
      break;
    }
  }
  // hermitize away roundoff
  out.q = 0.5 * (out.q + out.q.adjoint()).eval();
  return out;
}

double psd_norm(const CMat& q) {
  if (q.rows() == 1) return std::max(0.0, q(0, 0).real());
  Eigen::SelfAdjointEigenSolver<CMat> es(q, Eigen::EigenvaluesOnly);
  return std::max(0.0, es.eigenvalues().maxCoeff());
}

double op_norm(const CMat& a) {
  if (a.rows() == 1 && a.cols() == 1) return std::abs(a(0, 0));
  return std::sqrt(psd_norm(a * a.adjoint()));
}

BlochResult bloch_norm(const OperatorSymbol& t, const KernelCoeffs& kc,
                       const Grid& grid) {
  if (grid.radii.empty() || grid.directions.empty())
    throw std::invalid_argument("bloch_norm: empty grid");
  BlochResult res;
  const int d = kc.dimension();
  const CVec origin = CVec::Zero(d);
  for (double rho : grid.radii) {
    const double r = rho * rho;
    const DiagData dd = kc.diag(r);
    for (const CVec& u : grid.directions) {
      const CVec z = rho * u;
      BergmanData bd;
      bd.z = z;
      bd.r = r;
      bd.lambda = dd.lambda;
      bd.mu = dd.mu;
      bd.P = (z * z.adjoint()) / r;
      const CMat I = CMat::Identity(d, d);
      bd.B_inv = (1.0 / bd.mu) * I + (1.0 / bd.lambda - 1.0 / bd.mu) * bd.P;
      const QMatrix q = q_matrix(t, bd, QRoute::BInv);
      const double sem = q_seminorm(q.q);
      if (sem > res.seminorm) {
        res.seminorm = sem;
        res.argmax_radius = rho;
      }
    }
  }
  res.norm = op_norm(t.eval(origin)) + res.seminorm;
  return res;
}

double e_norm_ratio(const OperatorSymbol& t, const KernelCoeffs& kc,
                    const CVec& z, int n_dirs, std::uint64_t seed) {
  const BergmanData bd = bergman_data(kc, z);
  const QMatrix q = q_matrix(t, bd, QRoute::BInv);
  const double qn = q_seminorm(q.q);
  if (qn < 1e-14)
    throw std::domain_error("e_norm_ratio: Q_T vanishes at z");
  const int d = kc.dimension();
  std::vector<CVec> dirs = sphere_directions(d, n_dirs, seed);
  for (int j = 0; j < d; ++j) {
    CVec e = CVec::Zero(d);
    e[j] = 1.0;
    dirs.push_back(e);
    CVec c = bd.B_inv_sqrt.col(j);
    dirs.push_back(c / c.norm());
  }
  const std::vector<CMat> grad = t.gradient(z);
  double emax = 0.0;
  for (const CVec& xi : dirs) {
    CMat s = CMat::Zero(t.fiber(), t.fiber());
    for (int k = 0; k < d; ++k) s += xi[k] * grad[k];
    const double beta = bergman_metric(bd, xi);
    if (beta > 0.0) emax = std::max(emax, op_norm(s) / beta);
  }
  return emax / qn;
}

double little_bloch_tail(const OperatorSymbol& t, const KernelCoeffs& kc,
                         double R, const std::vector<CVec>& directions) {
  if (!(R > 0.0)) throw std::invalid_argument("little_bloch_tail: R <= 0");
  const int d = kc.dimension();
  double tail = 0.0;
  double rho = R;
  for (int j = 0; j < 4; ++j, rho *= 1.25) {
    const double r = rho * rho;
    const DiagData dd = kc.diag(r);
    for (const CVec& u : directions) {
      const CVec z = rho * u;
      BergmanData bd;
      bd.z = z;
      bd.r = r;
      bd.lambda = dd.lambda;
      bd.mu = dd.mu;
      bd.P = (z * z.adjoint()) / r;
      const CMat I = CMat::Identity(d, d);
      bd.B_inv = (1.0 / bd.mu) * I + (1.0 / bd.lambda - 1.0 / bd.mu) * bd.P;
      tail = std::max(tail, q_seminorm(q_matrix(t, bd, QRoute::BInv).q));
    }
  }
  return tail;
}

BergResult berg_norm(const OperatorSymbol& t, const KernelCoeffs& kc,
                     const std::vector<std::pair<CVec, CVec>>& pairs) {
  if (pairs.empty()) throw std::invalid_argument("berg_norm: no pairs");
  double rmax = 0.0;
  for (const auto& [z, w] : pairs)
    rmax = std::max({rmax, z.squaredNorm(), w.squaredNorm()});
  RadialProfile prof(kc, rmax * 3.3 + 4.0);
  BergResult res;
  for (const auto& [z, w] : pairs) {
    if ((z - w).norm() == 0.0)
      throw std::invalid_argument("berg_norm: z = w in pair list");
    const double dist = bergman_distance(kc, z, w, &prof).value;
    res.seminorm = std::max(res.seminorm, op_norm(t.eval(z) - t.eval(w)) / dist);
  }
  res.norm = res.seminorm + op_norm(t.eval(CVec::Zero(kc.dimension())));
  return res;
}

double lipschitz_ratio(const OperatorSymbol& t, const KernelCoeffs& kc,
                       double bloch_seminorm, const CVec& z, const CVec& w,
                       const RadialProfile* profile) {
  if ((z - w).norm() == 0.0)
    throw std::invalid_argument("lipschitz_ratio: z = w");
  const double dist = bergman_distance(kc, z, w, profile).value;
  return op_norm(t.eval(z) - t.eval(w)) / (bloch_seminorm * dist);
}

}  // namespace fock
