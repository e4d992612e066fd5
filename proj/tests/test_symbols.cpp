#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "fock/quadrature.hpp"
#include "fock/symbols.hpp"

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

CVec pt2(Complex a, Complex b) {
  CVec v(2);
  v[0] = a;
  v[1] = b;
  return v;
}

CMat scalar1(Complex c) {
  CMat m(1, 1);
  m(0, 0) = c;
  return m;
}

// T(z) = z_k * A
OperatorSymbol linear(int d, int m, int coord, const CMat& a) {
  OperatorSymbol t(d, m);
  MultiIndex g(d, 0);
  g[coord] = 1;
  t.set_term(g, a);
  return t;
}

}  // namespace

TEST_CASE("symbol derivatives by direct substitution") {
  SUBCASE("T(z) = z1 A in d=2 at z=(1,2)") {
    CMat a(2, 2);
    a << Complex(1, 0), Complex(0, 1), Complex(2, 0), Complex(-1, 1);
    const OperatorSymbol t = linear(2, 2, 0, a);
    const CVec z = pt2(1.0, 2.0);
    const SymbolDerivatives sd = symbol_derivatives(t, z);
    CHECK((sd.radial - a).norm() < 1e-14);                 // RT = z1 A, z1 = 1
    CHECK((sd.tangential.at({0, 1}) + 2.0 * a).norm() < 1e-14);  // -conj(z2) A
    CHECK((sd.gradient[0] - a).norm() < 1e-14);
    CHECK(sd.gradient[1].norm() == 0.0);
  }
  SUBCASE("constant symbol has vanishing derivatives") {
    OperatorSymbol t(2, 3);
    t.set_term({0, 0}, CMat::Identity(3, 3));
    const SymbolDerivatives sd = symbol_derivatives(t, pt2(1.0, Complex(0, 2)));
    CHECK(sd.radial.norm() == 0.0);
    CHECK(sd.gradient[0].norm() == 0.0);
    CHECK(sd.tangential.at({0, 1}).norm() == 0.0);
  }
  SUBCASE("T(z) = z^2 B in d=1 at z=3") {
    CMat b(2, 2);
    b << 1, 2, 3, 4;
    OperatorSymbol t(1, 2);
    t.set_term({2}, b);
    const SymbolDerivatives sd = symbol_derivatives(t, pt1(3.0));
    CHECK((sd.gradient[0] - 6.0 * b).norm() < 1e-13);
    CHECK((sd.radial - 18.0 * b).norm() < 1e-13);
  }
}

TEST_CASE("Q_T: closed forms on the gaussian weight") {
  SUBCASE("d=1, T(z)=zA: Q = AA* everywhere") {
    const KernelCoeffs kc = make_kc("gaussian", 0, 1, 200);
    CMat a(2, 2);
    a << Complex(1, 1), 0, Complex(0, -2), 3;
    const OperatorSymbol t = linear(1, 2, 0, a);
    for (double rho : {0.3, 1.0, 2.5}) {
      const BergmanData bd = bergman_data(kc, pt1(Complex(rho, -rho / 3)));
      const CMat q = q_matrix(t, bd, QRoute::BInv).q;
      CHECK((q - a * a.adjoint()).norm() < 1e-10);
    }
  }
  SUBCASE("d=2, T(z)=z1 A at z=(1,1): all routes give AA*") {
    const KernelCoeffs kc = make_kc("gaussian", 0, 2, 200);
    CMat a(2, 2);
    a << 2, Complex(0, 1), 1, Complex(-1, -1);
    const OperatorSymbol t = linear(2, 2, 0, a);
    const BergmanData bd = bergman_data(kc, pt2(1.0, 1.0));
    const CMat expect = a * a.adjoint();
    CHECK((q_matrix(t, bd, QRoute::BInv).q - expect).norm() < 1e-10);
    CHECK((q_matrix(t, bd, QRoute::Eigenvalue).q - expect).norm() < 1e-10);
    CHECK((q_matrix(t, bd, QRoute::Columns).q - expect).norm() < 1e-10);
  }
  SUBCASE("constant T gives Q = 0; eigenvalue route rejects z=0") {
    const KernelCoeffs kc = make_kc("gaussian", 0, 2, 40);
    OperatorSymbol t(2, 2);
    t.set_term({0, 0}, CMat::Identity(2, 2));
    const BergmanData bd0 = bergman_data(kc, pt2(0.0, 0.0));
    CHECK(q_matrix(t, bd0, QRoute::BInv).q.norm() == 0.0);
    CHECK_THROWS_AS(q_matrix(t, bd0, QRoute::Eigenvalue), std::invalid_argument);
  }
}

TEST_CASE("Q_T route agreement on random symbols (property)") {
  std::mt19937_64 rng(20240901);
  std::uniform_real_distribution<double> radius(0.2, 2.2);
  const KernelCoeffs kc1g = make_kc("gaussian", 0, 1, 260);
  const KernelCoeffs kc1p = make_kc("power", 2.0, 1, 260);
  const KernelCoeffs kc2g = make_kc("gaussian", 0, 2, 260);
  const KernelCoeffs kc2p = make_kc("power", 2.0, 2, 260);
  const KernelCoeffs* tables[4] = {&kc1g, &kc1p, &kc2g, &kc2p};
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const KernelCoeffs& kc = *tables[trial % 4];
    const int d = kc.dimension();
    const int m = 1 + int(rng() % 4);
    const OperatorSymbol t = random_symbol(d, m, 4, rng);
    for (int p = 0; p < 20; ++p) {
      CVec z = random_point(d, radius(rng), rng);
      if (z.norm() < 1e-3) z[0] += 0.5;
      const BergmanData bd = bergman_data(kc, z);
      const CMat qa = q_matrix(t, bd, QRoute::BInv).q;
      const CMat qb = q_matrix(t, bd, QRoute::Eigenvalue).q;
      const CMat qcm = q_matrix(t, bd, QRoute::Columns).q;
      worst = std::max(worst, (qa - qb).cwiseAbs().maxCoeff());
      worst = std::max(worst, (qa - qcm).cwiseAbs().maxCoeff());
    }
  }
  CHECK(worst <= 1e-9);
}

TEST_CASE("seminorm triangle inequality (property)") {
  std::mt19937_64 rng(7771);
  const KernelCoeffs kc = make_kc("power", 2.0, 2, 200);
  for (int trial = 0; trial < 30; ++trial) {
    const int m = 1 + int(rng() % 3);
    const OperatorSymbol t = random_symbol(2, m, 3, rng);
    const OperatorSymbol s = random_symbol(2, m, 3, rng);
    CVec z = random_point(2, 1.8, rng);
    if (z.norm() < 1e-3) z[0] += 0.3;
    const BergmanData bd = bergman_data(kc, z);
    const double qt = q_seminorm(q_matrix(t, bd, QRoute::BInv).q);
    const double qs = q_seminorm(q_matrix(s, bd, QRoute::BInv).q);
    const double qts = q_seminorm(q_matrix(t + s, bd, QRoute::BInv).q);
    CHECK(qts <= qt + qs + 1e-10);
  }
}

TEST_CASE("rotation covariance Q_{T o R}(z) = Q_T(Rz)") {
  std::mt19937_64 rng(5150);
  const KernelCoeffs kc = make_kc("power", 3.0, 2, 200);
  for (int trial = 0; trial < 10; ++trial) {
    const OperatorSymbol t = random_symbol(2, 2, 3, rng);
    const std::vector<double> theta = {0.7, -1.3};
    const OperatorSymbol tr = t.rotate(theta);
    CVec z = random_point(2, 1.5, rng);
    if (z.norm() < 1e-3) z[1] += 0.4;
    CVec rz = z;
    rz[0] *= std::polar(1.0, theta[0]);
    rz[1] *= std::polar(1.0, theta[1]);
    const CMat q1 = q_matrix(tr, bergman_data(kc, z), QRoute::BInv).q;
    const CMat q2 = q_matrix(t, bergman_data(kc, rz), QRoute::BInv).q;
    CHECK((q1 - q2).cwiseAbs().maxCoeff() < 1e-11 * (1.0 + q2.norm()));
  }
}

TEST_CASE("Bloch norm") {
  const GridSpec spec;
  SUBCASE("gaussian, T(z)=zA: norm equals ||A||") {
    const KernelCoeffs kc = make_kc("gaussian", 0, 1, 400);
    CMat a(2, 2);
    a << 3, 1, 0, Complex(0, 2);
    const OperatorSymbol t = linear(1, 2, 0, a);
    const Grid grid = sweep_grid(1, spec, 42);
    const BlochResult br = bloch_norm(t, kc, grid);
    CHECK(br.norm == doctest::Approx(op_norm(a)).epsilon(1e-9));
  }
  SUBCASE("constant symbol: norm equals ||C||") {
    const KernelCoeffs kc = make_kc("power", 2.0, 1, 10000);
    OperatorSymbol t(1, 2);
    CMat c(2, 2);
    c << 1, 2, 2, 1;
    t.set_term({0}, c);
    const Grid grid = sweep_grid(1, spec, 42);
    CHECK(bloch_norm(t, kc, grid).norm == doctest::Approx(op_norm(c)));
  }
}

TEST_CASE("E(z) against the Q seminorm") {
  const KernelCoeffs kc = make_kc("power", 2.0, 2, 300);
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 6; ++trial) {
    const OperatorSymbol t = random_symbol(2, 2, 3, rng);
    CVec z = random_point(2, 2.0, rng);
    if (z.norm() < 1e-3) z[0] += 1.0;
    const double ratio = e_norm_ratio(t, kc, z, 200, 1234 + trial);
    const double sd = std::sqrt(2.0);
    CHECK(ratio >= (1.0 / sd) * 0.9);
    CHECK(ratio <= sd * 1.1);
  }
}

TEST_CASE("little Bloch tail") {
  const std::vector<CVec> dirs = sphere_directions(1, 8, 3);
  SUBCASE("power-2, T(z)=z: tail <= 1.5/(2R) for R >= 5") {
    const WeightModel w = make_weight("power", 2.0);
    const KernelCoeffs kc =
        kernel_coeffs(w, compute_moments(w, 1, suggest_kmax(w, 1, 100.0)));
    const OperatorSymbol t = linear(1, 1, 0, scalar1(1.0));
    for (double R : {5.0, 7.0}) {
      const double tail = little_bloch_tail(t, kc, R, dirs);
      CHECK(tail <= 1.5 / (2.0 * R));
      CHECK(tail > 0.0);
    }
  }
  SUBCASE("gaussian, T(z)=z: tail stays 1") {
    const KernelCoeffs kc = make_kc("gaussian", 0, 1, 700);
    const OperatorSymbol t = linear(1, 1, 0, scalar1(1.0));
    CHECK(little_bloch_tail(t, kc, 5.0, dirs) == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("Fejer approximation") {
  SUBCASE("coefficient multipliers") {
    OperatorSymbol t(1, 1);
    t.set_term({2}, scalar1(1.0));
    const OperatorSymbol t2 = t.fejer(2);
    CHECK(std::abs(t2.terms().at({2})(0, 0) - Complex(1.0 / 3.0, 0)) < 1e-15);
    // N = 0 keeps only the constant term
    OperatorSymbol s(1, 1);
    s.set_term({0}, scalar1(2.0));
    s.set_term({1}, scalar1(5.0));
    const OperatorSymbol s0 = s.fejer(0);
    CHECK(s0.terms().count({1}) == 0);
    CHECK(std::abs(s0.terms().at({0})(0, 0) - Complex(2.0, 0)) < 1e-15);
    // multipliers tend to 1
    const OperatorSymbol sN = s.fejer(100000);
    CHECK(std::abs(sN.terms().at({1})(0, 0) - Complex(5.0, 0)) < 1e-4);
  }
  SUBCASE("d=1 multipliers equal the direct torus convolution") {
    // T_N(z) = int T(e^{-i theta} z) F_N(e^{i theta}) dtheta / (2 pi), with the
    // Fejer kernel evaluated explicitly; trapezoid is exact for trig polys.
    std::mt19937_64 rng(314);
    const OperatorSymbol t = random_symbol(1, 2, 4, rng);
    const int N = 3;
    const OperatorSymbol tn = t.fejer(N);
    const CVec z = pt1(Complex(0.8, -0.5));
    const int nth = 64;
    CMat acc = CMat::Zero(2, 2);
    for (int i = 0; i < nth; ++i) {
      const double th = 2.0 * M_PI * i / nth;
      double fejer = 0.0;
      for (int mth = -N; mth <= N; ++mth)
        fejer += (1.0 - std::abs(mth) / double(N + 1)) * std::cos(mth * th);
      CVec zr = z;
      zr[0] *= std::polar(1.0, -th);
      acc += t.eval(zr) * fejer;
    }
    acc /= double(nth);
    CHECK((acc - tn.eval(z)).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("exact recovery: sup-grid seminorm of T_N - T collapses for large N") {
    const KernelCoeffs kc = make_kc("power", 2.0, 1, 400);
    OperatorSymbol t(1, 1);
    t.set_term({1}, scalar1(1.0));
    t.set_term({3}, scalar1(1.0));
    const Grid grid = sweep_grid(1, GridSpec{0.1, 0.5, 8, 8}, 42);
    double prev = 1e300;
    for (int N : {4, 8, 16, 32, 64}) {
      const OperatorSymbol diff = t.fejer(N) - t;
      const double sem = bloch_norm(diff, kc, grid).seminorm;
      CHECK(sem < prev);
      prev = sem;
    }
    CHECK(prev < 0.05);  // N = 64 falls below the threshold on this grid
  }
}

TEST_CASE("Berg norm and Lipschitz estimate") {
  SUBCASE("gaussian, T(z)=zA: quotient is exactly ||A||") {
    const KernelCoeffs kc = make_kc("gaussian", 0, 1, 300);
    CMat a(2, 2);
    a << 1, Complex(0, 2), 0, 1;
    const OperatorSymbol t = linear(1, 2, 0, a);
    std::vector<std::pair<CVec, CVec>> pairs = {
        {pt1(1.0), pt1(0.0)},
        {pt1(Complex(1, 1)), pt1(Complex(-0.5, 0.25))},
        {pt1(Complex(0, 2)), pt1(Complex(0.5, 0))}};
    const BergResult br = berg_norm(t, kc, pairs);
    CHECK(br.seminorm == doctest::Approx(op_norm(a)).epsilon(1e-8));
  }
  SUBCASE("gaussian d=2 straight-line case") {
    const KernelCoeffs kc = make_kc("gaussian", 0, 2, 300);
    CMat a = CMat::Identity(2, 2) * 2.0;
    const OperatorSymbol t = linear(2, 2, 0, a);
    std::vector<std::pair<CVec, CVec>> pairs = {{pt2(1.0, 0.0), pt2(0.0, 0.0)}};
    CHECK(berg_norm(t, kc, pairs).seminorm ==
          doctest::Approx(2.0).epsilon(1e-8));
  }
  SUBCASE("constant symbol: zero quotient; coincident pair rejected") {
    const KernelCoeffs kc = make_kc("gaussian", 0, 1, 300);
    OperatorSymbol t(1, 1);
    t.set_term({0}, scalar1(4.0));
    std::vector<std::pair<CVec, CVec>> pairs = {{pt1(1.0), pt1(0.0)}};
    CHECK(berg_norm(t, kc, pairs).seminorm == 0.0);
    pairs.push_back({pt1(1.0), pt1(1.0)});
    CHECK_THROWS_AS(berg_norm(t, kc, pairs), std::invalid_argument);
  }
  SUBCASE("Lipschitz quotient bounded by sqrt(d) with slack") {
    std::mt19937_64 rng(2024);
    const KernelCoeffs kc = make_kc("power", 2.0, 2, 300);
    const GridSpec spec{0.1, 3.0, 12, 12};
    const Grid grid = sweep_grid(2, spec, 42);
    for (int trial = 0; trial < 5; ++trial) {
      const OperatorSymbol t = random_symbol(2, 2, 2, rng);
      const double sem = bloch_norm(t, kc, grid).seminorm;
      const CVec z = random_point(2, 2.0, rng);
      CVec w = random_point(2, 2.0, rng);
      if ((z - w).norm() < 1e-3) w[0] += 0.5;
      const double ratio = lipschitz_ratio(t, kc, sem, z, w);
      CHECK(ratio <= std::sqrt(2.0) * 1.2);
    }
  }
}
