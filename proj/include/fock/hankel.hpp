#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "fock/kernel.hpp"
#include "fock/symbols.hpp"
#include "fock/types.hpp"

namespace fock {

// Finite expansion sum_i c_i conj(w)^{anti_i} w^{holo_i} with C^m coefficient
// vectors: the concrete form of (I - P) applied to anti-holomorphic symbol
// times monomial, living in L^2_phi(C^m).
class MixedExpansion {
 public:
  struct Term {
    MultiIndex anti, holo;
    CVec coeff;
  };

  explicit MixedExpansion(int m = 1) : m_(m) {}
  int fiber() const { return m_; }
  const std::vector<Term>& terms() const { return terms_; }
  void add(const MultiIndex& anti, const MultiIndex& holo, const CVec& c);

  // Exact inner product by the monomial rule
  //   <conj(w)^g w^n h, conj(w)^g' w^n' h'> = [n+g' == n'+g] w_{n+g'} <h,h'>.
  static Complex inner(const MixedExpansion& a, const MixedExpansion& b,
                       const KernelCoeffs& kc);
  double norm_sq(const KernelCoeffs& kc) const;

 private:
  int m_;
  std::vector<Term> terms_;
};

// Image of the normalized-domain generator w^nu f_j under f -> (I-P)(T^* f):
//   sum_gamma (A_gamma^* f_j) (x) [ conj(w)^gamma w^nu
//                                   - [nu >= gamma] (w_nu / w_{nu-gamma}) w^{nu-gamma} ].
MixedExpansion hankel_apply_basis(const OperatorSymbol& t,
                                  const KernelCoeffs& kc, const MultiIndex& nu,
                                  int j);

// Compression of the Hankel operator to the span of {w^nu f_j : |nu| <= N}.
// All Gram entries are exact in the moment algebra; singular values are the
// square roots of the eigenvalues of the Gram matrix and increase towards the
// full operator norms as N grows.
class TruncatedHankel {
 public:
  const OperatorSymbol& symbol() const { return symbol_; }
  int truncation() const { return n_; }
  bool degree_warning() const { return degree_warning_; }
  const std::vector<std::pair<MultiIndex, int>>& basis() const { return basis_; }
  const CMat& gram() const { return gram_; }
  const std::vector<double>& singular_values() const { return s_; }

  double operator_norm() const { return s_.empty() ? 0.0 : s_.front(); }
  double schatten_norm(double p) const;  // p >= 1
  double schatten_sq_sum() const;        // sum s_n^2

 private:
  friend TruncatedHankel assemble_hankel(const OperatorSymbol&,
                                         const KernelCoeffs&, int);
  OperatorSymbol symbol_{1, 1};
  int n_ = 0;
  bool degree_warning_ = false;
  std::vector<std::pair<MultiIndex, int>> basis_;
  CMat gram_;
  std::vector<double> s_;  // nonincreasing
};

TruncatedHankel assemble_hankel(const OperatorSymbol& t, const KernelCoeffs& kc,
                                int n);

// Gram matrix [ <H(k_z f_j), H(k_z f_i)> ]_{ij} of the Hankel images of the
// normalized kernel vector; equals MO^2 T^*(z) by the mean-oscillation
// identity. The k_z expansion is carried to the degree where its dropped mass
// is negligible; throws std::range_error when the coefficient table cannot
// reach it (tail above 1e-8).
CMat hankel_kernel_gram(const OperatorSymbol& t, const KernelCoeffs& kc,
                        const CVec& z);

// || H_{T^*}(k_z e) || for a unit fiber vector e.
double hankel_on_kernel(const OperatorSymbol& t, const KernelCoeffs& kc,
                        const CVec& z, const CVec& e);

struct PartialIntegralTable {
  double p = 2.0;
  std::vector<double> cutoffs;   // radii |z|
  std::vector<double> partials;  // cumulative integral up to each cutoff
  bool divergent = false;        // >5% growth per doubling across the table
  bool below_paper_regime = false;  // p < 2
  double value() const { return partials.empty() ? 0.0 : partials.back(); }
};

// int ||A(z)^{1/2}||_{S^p}^p K(z,z) dmu_phi(z) for a PSD-matrix field A,
// evaluated shell by shell (adaptive radial quadrature times a directional
// average) with cumulative partial values recorded at the given cutoffs.
PartialIntegralTable radial_schatten_integral(
    const std::function<CMat(const CVec&)>& psd_field, const KernelCoeffs& kc,
    double p, const std::vector<double>& cutoffs, int n_dirs,
    std::uint64_t seed);

// Specialization to A = Q_T (the Besov-type integral).
PartialIntegralTable besov_integral(const OperatorSymbol& t,
                                    const KernelCoeffs& kc, double p,
                                    const std::vector<double>& cutoffs,
                                    int n_dirs = 24, std::uint64_t seed = 42);

struct IdentityCheck {
  double lhs = 0.0;  // direct / trace side
  double rhs = 0.0;  // integral side
  double rel_gap = 0.0;
};

// trace(S) against int sum_k <S(K_z e_k^z), K_z e_k^z> dmu_phi(z) with a
// randomized orthonormal frame e_k^z per quadrature node. S acts on the
// truncated space span{w^nu f_j : |nu| <= basis_degree}, index-major in nu
// then j (flat index = nu_position * m + j).
IdentityCheck trace_identity_check(const CMat& s, const KernelCoeffs& kc,
                                   int basis_degree, int m, std::uint64_t seed);

// Matrix-valued multiplier R(z) = sum_t G_t z^{holo_t} conj(z)^{anti_t}.
struct MixedTerm {
  MultiIndex holo, anti;
  CMat g;
};
using MixedSymbol = std::vector<MixedTerm>;

// ||M_R||_{S^2}^2 summed over the truncated orthonormal basis against
// int ||R(z)||_{S^2}^2 K_D(z,z) dmu_phi(z) with the kernel truncated to the
// same degree (matched truncations; the integral side goes through numerical
// quadrature, the direct side through exact moment algebra).
IdentityCheck hs_multiplier_identity_check(const MixedSymbol& r,
                                           const KernelCoeffs& kc,
                                           int basis_degree, int m);

}  // namespace fock
