#pragma once

// Independent reference computations used only by tests. None of these go
// through Clebsch-Gordan coupling or the contraction engine.

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "spinnet/rep/random.hpp"
#include "spinnet/rep/wigner.hpp"

namespace oracle {

using spinnet::cplx;
using spinnet::GroupElement;
using spinnet::Spin;

inline Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

/// Tensor-product representation matrix; `dual[k]` selects conj(D) on leg k.
inline Eigen::MatrixXcd product_rep(const std::vector<Spin>& spins, const std::vector<bool>& dual,
                                    const GroupElement& g) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(1, 1);
  for (std::size_t k = 0; k < spins.size(); ++k) {
    Eigen::MatrixXcd d = spinnet::wigner_matrix(spins[k], g);
    if (!dual.empty() && dual[k]) d = d.conjugate().eval();
    m = kron(m, d);
  }
  return m;
}

/// Orthonormal basis (columns) of the common fixed space of a few random group
/// elements, found by SVD. Generic elements generate a dense subgroup, so this
/// is the invariant subspace.
inline Eigen::MatrixXcd invariant_subspace(const std::vector<Spin>& spins, const std::vector<bool>& dual = {},
                                           std::uint64_t seed = 99) {
  spinnet::CounterRng rng(seed, 12345);
  Eigen::Index n = 1;
  for (auto s : spins) n *= s.dim();
  const int probes = 3;
  Eigen::MatrixXcd stacked(probes * n, n);
  for (int p = 0; p < probes; ++p)
    stacked.block(p * n, 0, n, n) =
        product_rep(spins, dual, spinnet::haar_sample(rng)) - Eigen::MatrixXcd::Identity(n, n);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(stacked, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  std::vector<Eigen::Index> null_cols;
  for (Eigen::Index i = 0; i < n; ++i)
    if (i >= sv.size() || sv(i) < 1e-8) null_cols.push_back(i);
  Eigen::MatrixXcd basis(n, static_cast<Eigen::Index>(null_cols.size()));
  for (std::size_t c = 0; c < null_cols.size(); ++c) basis.col(static_cast<Eigen::Index>(c)) = svd.matrixV().col(null_cols[c]);
  return basis;
}

}  // namespace oracle
