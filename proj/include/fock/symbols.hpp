#pragma once

#include <map>
#include <random>
#include <string>
#include <vector>

#include "fock/grids.hpp"
#include "fock/kernel.hpp"
#include "fock/types.hpp"

namespace fock {

// Holomorphic operator-valued polynomial T(z) = sum_gamma A_gamma z^gamma with
// m x m matrix coefficients (the fiber Hilbert space truncated to C^m).
class OperatorSymbol {
 public:
  OperatorSymbol(int d, int m, int max_degree = 8);

  int dimension() const { return d_; }
  int fiber() const { return m_; }
  int degree() const;
  bool constant() const { return degree() <= 0; }
  const std::map<MultiIndex, CMat>& terms() const { return terms_; }

  void set_term(const MultiIndex& gamma, const CMat& a);

  CMat eval(const CVec& z) const;
  CMat d_coord(int k, const CVec& z) const;        // D_k T(z)
  std::vector<CMat> gradient(const CVec& z) const;  // all D_k T(z)
  CMat radial(const CVec& z) const;                 // RT = sum z_k D_k T
  CMat tangential(int i, int j, const CVec& z) const;  // conj(z_i) D_j - conj(z_j) D_i

  // Coefficient multipliers prod_j max(0, 1 - gamma_j/(N+1)); equals the torus
  // convolution with the Fejer kernel for polynomial symbols.
  OperatorSymbol fejer(int n) const;

  OperatorSymbol rotate(const std::vector<double>& theta) const;  // T o R_theta

  OperatorSymbol operator+(const OperatorSymbol& other) const;
  OperatorSymbol operator-(const OperatorSymbol& other) const;
  OperatorSymbol scaled(Complex c) const;

 private:
  int d_, m_, max_degree_;
  std::map<MultiIndex, CMat> terms_;
};

OperatorSymbol random_symbol(int d, int m, int deg, std::mt19937_64& rng,
                             double density = 0.6);

struct SymbolDerivatives {
  CMat value;
  std::vector<CMat> gradient;
  CMat radial;
  std::map<std::pair<int, int>, CMat> tangential;  // pairs i < j
};
SymbolDerivatives symbol_derivatives(const OperatorSymbol& t, const CVec& z);

// Q_T(z) by three algebraically equivalent routes:
//   BInv:       sum_{ij} conj(B^{-1})_{ij} D_jT (D_iT)*
//   Eigenvalue: (1/(lambda r)) RT RT* + (1/(mu r)) sum_{i<j} T_ij T_ij*   (z != 0)
//   Columns:    sum_j C_j C_j*,  C_j = sum_k (B^{-1/2})_{kj} D_kT
enum class QRoute { BInv, Eigenvalue, Columns };

struct QMatrix {
  CVec z;
  CMat q;
  QRoute route;
};

QMatrix q_matrix(const OperatorSymbol& t, const BergmanData& bd, QRoute route);

// Operator norm of a hermitian PSD matrix (largest eigenvalue, clipped at
// -1e-10 below which it is an error upstream).
double psd_norm(const CMat& q);
double op_norm(const CMat& a);          // largest singular value
inline double q_seminorm(const CMat& q) { return std::sqrt(psd_norm(q)); }

struct BlochResult {
  double norm = 0.0;       // ||T(0)|| + sup-grid ||Q_T||^{1/2}
  double seminorm = 0.0;   // sup-grid ||Q_T||^{1/2}
  double argmax_radius = 0.0;
};
BlochResult bloch_norm(const OperatorSymbol& t, const KernelCoeffs& kc,
                       const Grid& grid);

// E(z)/||Q_T(z)||^{1/2}, E sampled over n_dirs random unit directions plus the
// canonical ones and B^{-1/2} e_j; lies in [1/sqrt(d), sqrt(d)] up to slack.
double e_norm_ratio(const OperatorSymbol& t, const KernelCoeffs& kc,
                    const CVec& z, int n_dirs, std::uint64_t seed);

// max over |z| in {R, 1.25R, 1.5625R, 1.953R} of ||Q_T(z)||^{1/2}
double little_bloch_tail(const OperatorSymbol& t, const KernelCoeffs& kc,
                         double R, const std::vector<CVec>& directions);

struct BergResult {
  double norm = 0.0;
  double seminorm = 0.0;
  bool lower_bound = true;  // distance is an upper bound, quotients are lower
};
BergResult berg_norm(const OperatorSymbol& t, const KernelCoeffs& kc,
                     const std::vector<std::pair<CVec, CVec>>& pairs);

// ||T(z)-T(w)|| / (bloch_seminorm * d_Psi(z,w)); expected <= sqrt(d)*(1+0.2).
double lipschitz_ratio(const OperatorSymbol& t, const KernelCoeffs& kc,
                       double bloch_seminorm, const CVec& z, const CVec& w,
                       const RadialProfile* profile = nullptr);

}  // namespace fock
