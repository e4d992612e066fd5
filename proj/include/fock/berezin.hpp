#pragma once

#include <cstdint>
#include <vector>

#include "fock/grids.hpp"
#include "fock/hankel.hpp"
#include "fock/kernel.hpp"
#include "fock/symbols.hpp"

namespace fock {

// Berezin transform of the matrix-valued mixed polynomial
// g(w) = sum_t G_t w^{holo_t} conj(w)^{anti_t} at the point z:
//   g~(z) = int g(w) |k_z(w)|^2 dmu_phi(w),
// evaluated by the exact monomial selection rule
//   sum_nu conj(z)^nu z^{nu+a-b} w_{nu+a} / (w_nu w_{nu+a-b}) / K(z,z)
// per term (a,b), with inadmissible exponents skipped. Throws
// std::range_error when the coefficient table cannot absorb the series tails.
CMat berezin_transform(const MixedSymbol& g, const KernelCoeffs& kc,
                       const CVec& z);

enum class MoRoute { Series, Hankel };

struct MOResult {
  CVec z;
  CMat mo;  // m x m hermitian PSD
  MoRoute route;
};

// MO^2 T^*(z): series route computes (T T^*)~(z) - T(z) T(z)^*; hankel route
// assembles [ <H(k_z f_j), H(k_z f_i)> ].
MOResult mo_squared(const OperatorSymbol& t, const KernelCoeffs& kc,
                    const CVec& z, MoRoute route);

// Max entrywise distance between the two routes at z.
double mo_route_gap(const OperatorSymbol& t, const KernelCoeffs& kc,
                    const CVec& z);

// Both routes with a mandatory cross-check; throws std::runtime_error when the
// routes disagree beyond tol (signals inadequate truncation).
MOResult mo_squared_checked(const OperatorSymbol& t, const KernelCoeffs& kc,
                            const CVec& z, double tol = 1e-6);

struct BmoResult {
  double norm = 0.0;      // sup-grid ||MO^2||^{1/2} + ||T(0)||
  double seminorm = 0.0;  // sup-grid ||MO^2||^{1/2}
  double argmax_radius = 0.0;
};
BmoResult bmo_norm(const OperatorSymbol& t, const KernelCoeffs& kc,
                   const Grid& grid);

// max over |z| in {R, 1.25R, 1.5625R, 1.953R} of ||MO^2 T^*(z)||
double bmo_decay(const OperatorSymbol& t, const KernelCoeffs& kc, double R,
                 const std::vector<CVec>& directions);

struct PolyballAverage {
  double lhs = 0.0;   // polyball Monte-Carlo average of ||(T(z)*-T(w)*)e||^2
  double rhs = 0.0;   // ||H_{T^*}(k_w e)||^2
  double ratio = 0.0;
};
PolyballAverage polyball_average_check(const OperatorSymbol& t,
                                       const KernelCoeffs& kc,
                                       const CVec& center, double a,
                                       const CVec& e, int n_samples,
                                       std::uint64_t seed);

struct NearConstancyRow {
  double a = 0.0;
  double min_ratio = 0.0;  // min over centers/samples of |K(z,w)|^2/(K(z,z)K(w,w))
  bool pass = false;       // min_ratio >= 1/2
};

// Sweeps the polyball parameter over a_list and reports, per a, the worst
// kernel near-constancy ratio over Monte-Carlo samples of D(center, a).
std::vector<NearConstancyRow> near_constancy_report(
    const KernelCoeffs& kc, const std::vector<CVec>& centers,
    const std::vector<double>& a_list, int n_samples, std::uint64_t seed);

// int ||(MO^2 T^*(z))^{1/2}||_{S^p}^p K(z,z) dmu_phi(z), series route.
PartialIntegralTable mo_schatten_integral(const OperatorSymbol& t,
                                          const KernelCoeffs& kc, double p,
                                          const std::vector<double>& cutoffs,
                                          int n_dirs = 12,
                                          std::uint64_t seed = 42);

}  // namespace fock
