#pragma once

#include <array>
#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "spinnet/rep/group_element.hpp"
#include "spinnet/spin.hpp"

namespace spinnet {

namespace detail {

// Coefficients of the symmetric power Sym^n(U) in the orthonormal monomial
// basis f_p = u^p v^(n-p) / sqrt(p! (n-p)!). Row/column index k corresponds to
// p = n - k, i.e. to m = j - k (descending weights).
struct SymPowerTerm {
  int row, col;
  int pa, pb, pc, pd;  // exponents of a, b, c, d in U = [[a, b], [c, d]]
  double coefficient;
};

inline std::vector<SymPowerTerm> build_sym_power_terms(int n) {
  std::vector<double> fact(n + 1, 1.0);
  for (int i = 1; i <= n; ++i) fact[i] = fact[i - 1] * i;
  auto binom = [&](int a, int b) { return fact[a] / (fact[b] * fact[a - b]); };

  std::vector<SymPowerTerm> terms;
  for (int k_out = 0; k_out <= n; ++k_out) {
    int p_out = n - k_out;
    for (int k_in = 0; k_in <= n; ++k_in) {
      int p = n - k_in;
      double norm = std::sqrt(fact[p_out] * fact[n - p_out] / (fact[p] * fact[n - p]));
      int r_lo = std::max(0, p_out - (n - p));
      int r_hi = std::min(p, p_out);
      for (int r = r_lo; r <= r_hi; ++r) {
        terms.push_back({k_out, k_in, r, p_out - r, p - r, n - p - p_out + r,
                         binom(p, r) * binom(n - p, p_out - r) * norm});
      }
    }
  }
  return terms;
}

inline const std::vector<SymPowerTerm>& sym_power_terms(int n) {
  static const auto tables = [] {
    std::array<std::vector<SymPowerTerm>, kMaxTwiceJ + 1> t;
    for (int i = 0; i <= kMaxTwiceJ; ++i) t[i] = build_sym_power_terms(i);
    return t;
  }();
  return tables[n];
}

template <class Matrix2>
Eigen::MatrixXcd sym_power(int n, const Matrix2& u) {
  const cplx a = u(0, 0), b = u(0, 1), c = u(1, 0), d = u(1, 1);
  std::array<cplx, kMaxTwiceJ + 1> pa, pb, pc, pd;
  pa[0] = pb[0] = pc[0] = pd[0] = 1.0;
  for (int i = 1; i <= n; ++i) {
    pa[i] = pa[i - 1] * a;
    pb[i] = pb[i - 1] * b;
    pc[i] = pc[i - 1] * c;
    pd[i] = pd[i - 1] * d;
  }
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(n + 1, n + 1);
  for (const auto& t : sym_power_terms(n))
    out(t.row, t.col) += t.coefficient * pa[t.pa] * pb[t.pb] * pc[t.pc] * pd[t.pd];
  return out;
}

}  // namespace detail

/// D^j(g): the spin-j matrix of g in the basis |j, j>, |j, j-1>, ..., |j, -j>.
/// Built as the orthonormalized symmetric power of the defining 2x2 matrix, so
/// it is exactly multiplicative and unitary.
inline Eigen::MatrixXcd wigner_matrix(Spin j, const GroupElement& g) {
  require_valid(j);
  return detail::sym_power(j.twice_j, g.matrix());
}

inline cplx character(Spin j, const GroupElement& g) { return wigner_matrix(j, g).trace(); }

/// Conjugator C_j with conj(D^j(g)) = C_j D^j(g) C_j^{-1}. It is D^j of the
/// element [[0, 1], [-1, 0]], hence a real signed permutation with
/// C_j C_j^* = (-1)^{2j}.
inline Eigen::MatrixXcd epsilon(Spin j) {
  return wigner_matrix(j, GroupElement{0.0, 0.0, 1.0, 0.0});
}

}  // namespace spinnet
