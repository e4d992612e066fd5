#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace fock {

using Complex = std::complex<double>;
using CVec = Eigen::VectorXcd;  // points in C^d and fiber vectors in C^m
using CMat = Eigen::MatrixXcd;

// Multi-index in N^d. Kept as a plain vector; helpers below.
using MultiIndex = std::vector<int>;

inline int total_degree(const MultiIndex& a) {
  int s = 0;
  for (int v : a) s += v;
  return s;
}

inline bool leq(const MultiIndex& a, const MultiIndex& b) {
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

inline MultiIndex add(const MultiIndex& a, const MultiIndex& b) {
  MultiIndex c(a);
  for (size_t i = 0; i < a.size(); ++i) c[i] += b[i];
  return c;
}

// Componentwise difference; caller guarantees a >= b.
inline MultiIndex sub(const MultiIndex& a, const MultiIndex& b) {
  MultiIndex c(a);
  for (size_t i = 0; i < a.size(); ++i) c[i] -= b[i];
  return c;
}

inline bool nonnegative(const MultiIndex& a) {
  for (int v : a)
    if (v < 0) return false;
  return true;
}

// log(nu!) = sum_i lgamma(nu_i + 1)
double log_factorial(const MultiIndex& nu);

// z^nu; zero exponents contribute 1 even when z_i = 0.
Complex mi_power(const CVec& z, const MultiIndex& nu);

// All nu in N^d with |nu| <= N, graded lexicographic (stable enumeration order).
std::vector<MultiIndex> indices_up_to(int d, int N);

// Numerically stable log(sum exp(v_i)) for a sequence accumulated online.
class LogSumAcc {
 public:
  void add(double log_term);
  double value() const;  // -inf when empty
  bool empty() const { return n_ == 0; }

 private:
  double max_ = -1e308;
  double sum_ = 0.0;  // sum of exp(term - max_)
  long n_ = 0;
};

}  // namespace fock
