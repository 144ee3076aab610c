#pragma once

#include <cmath>
#include <cstdlib>

#include <Eigen/Dense>

#include "spinnet/spin.hpp"

namespace spinnet {

inline bool admissible(Spin j1, Spin j2, Spin j) {
  return j.twice_j >= std::abs(j1.twice_j - j2.twice_j) && j.twice_j <= j1.twice_j + j2.twice_j &&
         (j1.twice_j + j2.twice_j + j.twice_j) % 2 == 0;
}

namespace detail {

inline long double factorial(int n) {
  long double r = 1.0L;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

// <j1 m1; j2 m2 | j m> by the Racah formula. All arguments are doubled.
inline double cg_coefficient(int j1, int m1, int j2, int m2, int j, int m) {
  if (m1 + m2 != m) return 0.0;
  if (std::abs(m1) > j1 || std::abs(m2) > j2 || std::abs(m) > j) return 0.0;
  const int a = (j1 + j2 - j) / 2, b = (j1 - j2 + j) / 2, c = (-j1 + j2 + j) / 2;
  long double pref = (j + 1) * factorial(a) * factorial(b) * factorial(c) /
                     factorial((j1 + j2 + j) / 2 + 1);
  pref *= factorial((j1 + m1) / 2) * factorial((j1 - m1) / 2) * factorial((j2 + m2) / 2) *
          factorial((j2 - m2) / 2) * factorial((j + m) / 2) * factorial((j - m) / 2);
  long double sum = 0.0L;
  for (int k = 0; k <= a; ++k) {
    int t1 = (j1 - m1) / 2 - k;
    int t2 = (j2 + m2) / 2 - k;
    int t3 = (j - j2 + m1) / 2 + k;
    int t4 = (j - j1 - m2) / 2 + k;
    if (t1 < 0 || t2 < 0 || t3 < 0 || t4 < 0) continue;
    long double term = 1.0L / (factorial(k) * factorial(a - k) * factorial(t1) * factorial(t2) *
                               factorial(t3) * factorial(t4));
    sum += (k % 2 == 0) ? term : -term;
  }
  return static_cast<double>(std::sqrt(pref) * sum);
}

}  // namespace detail

/// Coupling isometry V_{j1} (x) V_{j2} -> V_J in the Condon-Shortley convention.
/// Row index k1 * dim(j2) + k2 labels |j1 m1> (x) |j2 m2> with m = j - k;
/// column K labels |J, J - K>. Columns are orthonormal.
inline Eigen::MatrixXd clebsch_gordan(Spin j1, Spin j2, Spin J) {
  require_valid(j1);
  require_valid(j2);
  if (J.twice_j < 0 || !admissible(j1, j2, J))
    throw AdmissibilityError("inadmissible coupling (" + to_string(j1) + ", " + to_string(j2) +
                             ") -> " + to_string(J));
  const int d1 = j1.dim(), d2 = j2.dim(), dJ = J.dim();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(d1 * d2, dJ);
  for (int k1 = 0; k1 < d1; ++k1) {
    int m1 = j1.twice_j - 2 * k1;
    for (int k2 = 0; k2 < d2; ++k2) {
      int m2 = j2.twice_j - 2 * k2;
      int m = m1 + m2;
      if (std::abs(m) > J.twice_j) continue;
      int K = (J.twice_j - m) / 2;
      out(k1 * d2 + k2, K) = detail::cg_coefficient(j1.twice_j, m1, j2.twice_j, m2, J.twice_j, m);
    }
  }
  return out;
}

}  // namespace spinnet
