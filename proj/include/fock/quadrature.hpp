#pragma once

#include <cmath>
#include <functional>
#include <vector>

namespace fock::quad {

struct Result {
  double value = 0.0;
  double abs_err = 0.0;
  long evals = 0;
  bool converged = true;
};

// Adaptive Gauss-Kronrod (G7/K15) on [a,b]. Stops when the local error
// estimate is below max(rel_tol*|I|, abs_tol) on every subinterval.
Result adaptive_gk(const std::function<double(double)>& f, double a, double b,
                   double rel_tol = 1e-11, double abs_tol = 0.0,
                   int max_intervals = 4000);

// Gauss-Legendre nodes/weights on [-1,1]; cached per n.
struct GLRule {
  std::vector<double> x, w;
};
const GLRule& gl_rule(int n);

// Fixed-order Gauss-Legendre on [a,b].
double fixed_gl(const std::function<double(double)>& f, double a, double b,
                int n);

}  // namespace fock::quad
