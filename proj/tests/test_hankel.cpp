#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "fock/hankel.hpp"
#include "fock/quadrature.hpp"

using namespace fock;

namespace {

KernelCoeffs make_kc(const char* fam, double param, int d, int kmax) {
  const WeightModel w = make_weight(fam, param);
  return kernel_coeffs(w, compute_moments(w, d, kmax));
}

CVec pt1(Complex z) {
  CVec v(1);
  v[0] = z;
  return v;
}

CMat scalar1(Complex c) {
  CMat m(1, 1);
  m(0, 0) = c;
  return m;
}

OperatorSymbol coordinate_symbol(int d, int m, int coord) {
  OperatorSymbol t(d, m);
  MultiIndex g(d, 0);
  g[coord] = 1;
  t.set_term(g, CMat::Identity(m, m));
  return t;
}

}  // namespace

TEST_CASE("hankel image of basis monomials") {
  const KernelCoeffs kc = make_kc("gaussian", 0, 1, 60);
  SUBCASE("gaussian d=1, T(z)=z, nu=2: image is conj(w) w^2 - 2 w") {
    const OperatorSymbol t = coordinate_symbol(1, 1, 0);
    const MixedExpansion img = hankel_apply_basis(t, kc, {2}, 0);
    REQUIRE(img.terms().size() == 2);
    bool saw_main = false, saw_proj = false;
    for (const auto& term : img.terms()) {
      if (term.anti == MultiIndex{1} && term.holo == MultiIndex{2}) {
        saw_main = true;
        CHECK(std::abs(term.coeff[0] - Complex(1, 0)) < 1e-14);
      }
      if (term.anti == MultiIndex{0} && term.holo == MultiIndex{1}) {
        saw_proj = true;
        CHECK(std::abs(term.coeff[0] + Complex(2, 0)) < 1e-12);  // -w_2/w_1 = -2
      }
    }
    CHECK(saw_main);
    CHECK(saw_proj);
  }
  SUBCASE("constant symbol maps to zero") {
    OperatorSymbol t(1, 2);
    CMat c(2, 2);
    c << 1, 2, 3, 4;
    t.set_term({0}, c);
    CHECK(hankel_apply_basis(t, kc, {3}, 1).terms().empty());
  }
  SUBCASE("nu = 0: no holomorphic correction") {
    OperatorSymbol t(1, 1);
    t.set_term({2}, scalar1(1.0));
    const MixedExpansion img = hankel_apply_basis(t, kc, {0}, 0);
    REQUIRE(img.terms().size() == 1);
    CHECK(img.terms()[0].anti == MultiIndex{2});
    CHECK(img.terms()[0].holo == MultiIndex{0});
  }
}

TEST_CASE("Pythagoras: ||Hf||^2 = ||T^* f||^2 - ||P(T^* f)||^2") {
  // random polynomial f, random symbol; both sides in exact moment algebra
  std::mt19937_64 rng(11);
  const KernelCoeffs kc = make_kc("power", 2.0, 1, 80);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (int trial = 0; trial < 8; ++trial) {
    const int m = 1 + int(rng() % 2);
    const OperatorSymbol t = random_symbol(1, m, 3, rng);
    // f = sum_n a_n w^n f_{j_n}, n <= 4
    MixedExpansion tf(m);   // T^* f
    MixedExpansion ptf(m);  // P(T^* f)
    MixedExpansion hf(m);   // (I-P)(T^* f)
    for (int n = 0; n <= 4; ++n) {
      const int j = int(rng() % m);
      const Complex a(unif(rng), unif(rng));
      for (const auto& [gamma, ag] : t.terms()) {
        const CVec c = a * (ag.adjoint() * CVec::Unit(m, j));
        tf.add(gamma, {n}, c);
        if (gamma[0] <= n) {
          const double ratio = std::exp(kc.log_w({n}) - kc.log_w({n - gamma[0]}));
          ptf.add({0}, {n - gamma[0]}, ratio * c);
        }
      }
      const MixedExpansion img = hankel_apply_basis(t, kc, {n}, j);
      for (const auto& term : img.terms()) hf.add(term.anti, term.holo, a * term.coeff);
    }
    const double lhs = hf.norm_sq(kc);
    const double rhs = tf.norm_sq(kc) - ptf.norm_sq(kc);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
  }
}

TEST_CASE("gaussian isometry: all singular values equal 1") {
  // oracle: || conj(w) f ||^2 - ||f'||^2 = ||f||^2 in moment algebra, i.e.
  // w_{n+1} - n^2 w_{n-1} = w_n for w_n = pi n!
  for (int n = 1; n <= 20; ++n) {
    const double lhs = M_PI * (std::tgamma(n + 2.0) - n * n * std::tgamma(double(n)));
    CHECK(lhs == doctest::Approx(M_PI * std::tgamma(n + 1.0)).epsilon(1e-12));
  }
  const KernelCoeffs kc = make_kc("gaussian", 0, 1, 40);
  const OperatorSymbol t = coordinate_symbol(1, 1, 0);
  for (int n : {6, 10, 14}) {
    const TruncatedHankel th = assemble_hankel(t, kc, n);
    for (double s : th.singular_values())
      CHECK(s == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("constant symbol: zero spectrum") {
  const KernelCoeffs kc = make_kc("power", 2.0, 1, 40);
  OperatorSymbol t(1, 2);
  CMat c(2, 2);
  c << 5, 1, 1, 5;
  t.set_term({0}, c);
  const TruncatedHankel th = assemble_hankel(t, kc, 10);
  CHECK(th.operator_norm() == 0.0);
  CHECK(th.schatten_norm(2.0) == 0.0);
}

TEST_CASE("gaussian d=2 tensor structure: operator norm 1") {
  const KernelCoeffs kc = make_kc("gaussian", 0, 2, 40);
  const OperatorSymbol t = coordinate_symbol(2, 1, 0);
  const TruncatedHankel th = assemble_hankel(t, kc, 6);
  CHECK(th.operator_norm() == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("power-2 spectrum: telescoping Schatten-2 sum and decay") {
  // s_n^2 = g_n - g_{n-1} with g_n = M_{n+1}/M_n; sum s_n^2 = g_N
  const KernelCoeffs kc = make_kc("power", 2.0, 1, 60);
  const OperatorSymbol t = coordinate_symbol(1, 1, 0);
  const TruncatedHankel th = assemble_hankel(t, kc, 14);
  auto g = [&](int n) {
    return std::exp(kc.moments().log_m[n + 1] - kc.moments().log_m[n]);
  };
  CHECK(th.schatten_sq_sum() == doctest::Approx(g(14)).epsilon(1e-9));
  CHECK(th.operator_norm() == doctest::Approx(std::sqrt(g(0))).epsilon(1e-9));
  const auto& s = th.singular_values();
  for (size_t i = 1; i < s.size(); ++i) CHECK(s[i] < s[i - 1]);
}

TEST_CASE("singular values are nondecreasing in N and stabilize") {
  std::mt19937_64 rng(4242);
  const KernelCoeffs kc = make_kc("power", 2.0, 1, 80);
  const OperatorSymbol t = random_symbol(1, 2, 2, rng);
  double prev = 0.0;
  for (int n : {6, 8, 10, 12, 14}) {
    const double s = assemble_hankel(t, kc, n).operator_norm();
    CHECK(s >= prev - 1e-12);
    prev = s;
  }
  const double s14 = prev;
  const double s12 = assemble_hankel(t, kc, 12).operator_norm();
  CHECK(std::abs(s14 - s12) < 1e-4 * std::max(1.0, s14));
}

TEST_CASE("upper bound by the Bloch seminorm (m4)") {
  std::mt19937_64 rng(31415);
  const KernelCoeffs kc = make_kc("power", 2.0, 1, 12000);
  const Grid grid = sweep_grid(1, GridSpec{0.1, 8.0, 24, 16}, 42);
  for (int trial = 0; trial < 6; ++trial) {
    const OperatorSymbol t = random_symbol(1, 2, 2, rng);
    const double sem = bloch_norm(t, kc, grid).seminorm;
    const double hnorm = assemble_hankel(t, kc, 14).operator_norm();
    CHECK(hnorm <= 1.0 * sem * 1.1);  // sqrt(d) = 1 in d = 1
  }
}

TEST_CASE("no nontrivial Hilbert-Schmidt Hankel: sum s_n^2 keeps growing") {
  std::mt19937_64 rng(999);
  for (const char* fam : {"gaussian", "power"}) {
    const KernelCoeffs kc = make_kc(fam, 2.0, 1, 80);
    for (int trial = 0; trial < 3; ++trial) {
      const OperatorSymbol t = random_symbol(1, 2, 2, rng);
      double prev = 0.0;
      for (int n : {6, 10, 14, 18}) {
        const double cur = assemble_hankel(t, kc, n).schatten_sq_sum();
        if (prev > 0.0) CHECK(cur > 1.05 * prev);
        prev = cur;
      }
    }
  }
}

TEST_CASE("Hankel on normalized kernel vectors") {
  SUBCASE("gaussian d=1, T=z: isometry value 1 at every z") {
    const WeightModel w = make_weight("gaussian");
    const KernelCoeffs kc = kernel_coeffs(w, compute_moments(w, 1, 500));
    const OperatorSymbol t = coordinate_symbol(1, 1, 0);
    for (double rho : {0.5, 1.5, 3.0}) {
      const double v = hankel_on_kernel(t, kc, pt1(Complex(rho, 0.3)), CVec::Ones(1));
      CHECK(v == doctest::Approx(1.0).epsilon(1e-9));
    }
  }
  SUBCASE("constant symbol gives 0") {
    const KernelCoeffs kc = make_kc("power", 2.0, 1, 200);
    OperatorSymbol t(1, 1);
    t.set_term({0}, scalar1(3.0));
    CHECK(hankel_on_kernel(t, kc, pt1(1.0), CVec::Ones(1)) == 0.0);
  }
  SUBCASE("power-2, T=z, |z|=4: compact regime decay below 0.3") {
    const WeightModel w = make_weight("power", 2.0);
    const KernelCoeffs kc =
        kernel_coeffs(w, compute_moments(w, 1, suggest_kmax(w, 1, 16.0) + 4));
    const OperatorSymbol t = coordinate_symbol(1, 1, 0);
    const double v = hankel_on_kernel(t, kc, pt1(4.0), CVec::Ones(1));
    CHECK(v <= 0.3);
    CHECK(v > 0.0);
  }
  SUBCASE("non-unit e rejected, inadequate truncation rejected") {
    const KernelCoeffs kc = make_kc("gaussian", 0, 1, 40);
    const OperatorSymbol t = coordinate_symbol(1, 1, 0);
    CHECK_THROWS_AS(hankel_on_kernel(t, kc, pt1(1.0), 2.0 * CVec::Ones(1)),
                    std::invalid_argument);
    CHECK_THROWS_AS(hankel_on_kernel(t, kc, pt1(5.0), CVec::Ones(1)),
                    std::range_error);
  }
}

TEST_CASE("Besov-type integrals") {
  SUBCASE("gaussian T=z: divergent, partials grow like the squared cutoff") {
    const WeightModel w = make_weight("gaussian");
    const KernelCoeffs kc =
        kernel_coeffs(w, compute_moments(w, 1, suggest_kmax(w, 1, 150.0)));
    const OperatorSymbol t = coordinate_symbol(1, 1, 0);
    const PartialIntegralTable tab =
        besov_integral(t, kc, 4.0, {1.5, 3.0, 6.0, 12.0}, 16);
    CHECK(tab.divergent);
    // integrand = K e^{-Psi} = 1/pi: partial(R) = R^2, ratio 4 per doubling
    CHECK(tab.partials[2] / tab.partials[1] == doctest::Approx(4.0).epsilon(1e-4));
    CHECK(tab.partials[1] == doctest::Approx(9.0).epsilon(1e-6));
  }
  SUBCASE("constant symbol: zero") {
    const KernelCoeffs kc = make_kc("power", 2.0, 1, 700);
    OperatorSymbol t(1, 1);
    t.set_term({0}, scalar1(2.0));
    const PartialIntegralTable tab = besov_integral(t, kc, 4.0, {1.0, 2.0, 4.0}, 8);
    CHECK(tab.value() == 0.0);
    CHECK(!tab.divergent);
  }
  SUBCASE("power-2 T=z: converges at p=6, diverges at p=3") {
    const WeightModel w = make_weight("power", 2.0);
    const KernelCoeffs kc =
        kernel_coeffs(w, compute_moments(w, 1, suggest_kmax(w, 1, 145.0)));
    const OperatorSymbol t = coordinate_symbol(1, 1, 0);
    const std::vector<double> cuts = {1.5, 3.0, 6.0, 12.0};
    const PartialIntegralTable p6 = besov_integral(t, kc, 6.0, cuts, 12);
    CHECK(!p6.divergent);
    const PartialIntegralTable p3 = besov_integral(t, kc, 3.0, cuts, 12);
    CHECK(p3.divergent);
    CHECK(!p3.below_paper_regime);
    const PartialIntegralTable p15 = besov_integral(t, kc, 1.5, {1.0, 2.0}, 4);
    CHECK(p15.below_paper_regime);  // computed but flagged outside the regime
  }
}

TEST_CASE("trace identity") {
  SUBCASE("rank-one projector onto normalized z^n: both sides 1") {
    const KernelCoeffs kc = make_kc("gaussian", 0, 1, 80);
    const int deg = 5, m = 1, dim = 6;
    for (int n : {0, 2, 5}) {
      CMat s = CMat::Zero(dim, dim);
      s(n, n) = 1.0;
      const IdentityCheck chk = trace_identity_check(s, kc, deg, m, 7);
      CHECK(chk.lhs == doctest::Approx(1.0));
      CHECK(chk.rhs == doctest::Approx(1.0).epsilon(1e-6));
    }
  }
  SUBCASE("identity on a 5-dimensional truncation: both sides 5") {
    const KernelCoeffs kc = make_kc("power", 2.0, 1, 80);
    const CMat s = CMat::Identity(5, 5);
    const IdentityCheck chk = trace_identity_check(s, kc, 4, 1, 11);
    CHECK(chk.lhs == doctest::Approx(5.0));
    CHECK(chk.rel_gap < 1e-4);
  }
  SUBCASE("zero operator") {
    const KernelCoeffs kc = make_kc("gaussian", 0, 1, 60);
    const CMat s = CMat::Zero(8, 8);
    const IdentityCheck chk = trace_identity_check(s, kc, 7, 1, 3);
    CHECK(chk.lhs == 0.0);
    CHECK(std::abs(chk.rhs) < 1e-12);
  }
  SUBCASE("random PSD with random frames, d=1 and d=2, m=2") {
    std::mt19937_64 rng(2025);
    const KernelCoeffs kc1 = make_kc("gaussian", 0, 1, 80);
    const CMat s1 = random_psd(18, rng);  // deg <= 8, m = 2 -> dim 18
    const IdentityCheck c1 = trace_identity_check(s1, kc1, 8, 2, 5);
    CHECK(c1.rel_gap < 1e-4);
    const KernelCoeffs kc2 = make_kc("gaussian", 0, 2, 80);
    const CMat s2 = random_psd(20, rng);  // |nu| <= 3 in d=2 -> 10 indices, m=2
    const IdentityCheck c2 = trace_identity_check(s2, kc2, 3, 2, 5);
    CHECK(c2.rel_gap < 1e-3);
  }
  SUBCASE("non-PSD rejected") {
    const KernelCoeffs kc = make_kc("gaussian", 0, 1, 40);
    CMat s = CMat::Identity(4, 4);
    s(2, 2) = -1.0;
    CHECK_THROWS_AS(trace_identity_check(s, kc, 3, 1, 1), std::invalid_argument);
  }
}

TEST_CASE("Hilbert-Schmidt multiplier identity") {
  const KernelCoeffs kc = make_kc("gaussian", 0, 1, 80);
  SUBCASE("R = I on a degree <= 9 basis: both sides = basis size") {
    MixedSymbol r = {{{0}, {0}, CMat::Identity(1, 1)}};
    const IdentityCheck chk = hs_multiplier_identity_check(r, kc, 9, 1);
    CHECK(chk.lhs == doctest::Approx(10.0).epsilon(1e-12));
    CHECK(chk.rel_gap < 1e-6);
  }
  SUBCASE("R = 0") {
    MixedSymbol r = {{{0}, {0}, CMat::Zero(1, 1)}};
    const IdentityCheck chk = hs_multiplier_identity_check(r, kc, 5, 1);
    CHECK(chk.lhs == 0.0);
    CHECK(std::abs(chk.rhs) < 1e-14);
  }
  SUBCASE("R(z) = z on degree <= 10: sides agree within 2%") {
    MixedSymbol r = {{{1}, {0}, CMat::Identity(1, 1)}};
    const IdentityCheck chk = hs_multiplier_identity_check(r, kc, 10, 1);
    CHECK(chk.lhs == doctest::Approx(66.0).epsilon(1e-10));  // sum_{n<=10}(n+1)
    CHECK(chk.rel_gap < 0.02);
  }
  SUBCASE("R(z) = conj(z) mixes degrees and still matches quadrature") {
    MixedSymbol r = {{{0}, {1}, CMat::Identity(1, 1)}};
    const IdentityCheck chk = hs_multiplier_identity_check(r, kc, 6, 1);
    CHECK(chk.rel_gap < 1e-6);
  }
}
