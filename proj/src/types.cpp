#include "fock/types.hpp"

#include <cmath>

namespace fock {

double log_factorial(const MultiIndex& nu) {
  double s = 0.0;
  for (int v : nu) s += std::lgamma(double(v) + 1.0);
  return s;
}

Complex mi_power(const CVec& z, const MultiIndex& nu) {
  Complex p(1.0, 0.0);
  for (size_t i = 0; i < nu.size(); ++i) {
    for (int k = 0; k < nu[i]; ++k) p *= z[long(i)];
  }
  return p;
}

static void enumerate_rec(int d, int pos, int remaining, MultiIndex& cur,
                          std::vector<MultiIndex>& out) {
  if (pos == d - 1) {
    cur[pos] = remaining;
    out.push_back(cur);
    return;
  }
  for (int v = remaining; v >= 0; --v) {
    cur[pos] = v;
    enumerate_rec(d, pos + 1, remaining - v, cur, out);
  }
}

std::vector<MultiIndex> indices_up_to(int d, int N) {
  std::vector<MultiIndex> out;
  MultiIndex cur(d, 0);
  for (int total = 0; total <= N; ++total) enumerate_rec(d, 0, total, cur, out);
  return out;
}

void LogSumAcc::add(double log_term) {
  if (std::isinf(log_term) && log_term < 0) return;
  ++n_;
  if (log_term <= max_) {
    sum_ += std::exp(log_term - max_);
  } else {
    sum_ = sum_ * std::exp(max_ - log_term) + 1.0;
    max_ = log_term;
  }
}

double LogSumAcc::value() const {
  if (n_ == 0) return -std::numeric_limits<double>::infinity();
  return max_ + std::log(sum_);
}

}  // namespace fock
