#pragma once

#include <vector>

#include "fock/weights.hpp"

namespace fock {

// Radial moments M_k = int_0^inf s^{k+d-1} exp(-Psi(s)) ds, stored as
// log M_k (the raw values overflow double well before desk-scale kmax).
struct MomentTable {
  int dimension = 1;
  int kmax = 0;
  std::vector<double> log_m;    // log M_k, k = 0..kmax
  std::vector<double> rel_err;  // per-entry quadrature error estimate
  double max_rel_err = 0.0;
  long total_evals = 0;
};

// log of int_0^inf s^alpha exp(-Psi(s)) ds for real alpha >= 0. The integrand
// is evaluated as exp(L(s) - L*) around the peak of L(s) = alpha log s - Psi(s)
// (at s* = Phi^{-1}(alpha)) and cut off where it drops below 1e-30 of its max.
double log_radial_moment(const WeightModel& w, double alpha,
                         double* rel_err = nullptr, long* evals = nullptr);

// Throws std::runtime_error naming the offending k if the quadrature fails to
// reach relative error 1e-10 on some entry.
MomentTable compute_moments(const WeightModel& w, int d, int kmax);

// Smallest coefficient-table size that keeps kernel-series tails negligible
// at squared radius r = |z|^2 (peak index ~ Phi(r), Gaussian width
// ~ sqrt(r Phi'(r))).
int suggest_kmax(const WeightModel& w, int d, double r);

}  // namespace fock
