#pragma once

#include <algorithm>
#include <map>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "spinnet/rep/intertwiner.hpp"
#include "spinnet/rep/wigner.hpp"
#include "spinnet/tensor/contraction.hpp"

namespace spinnet {

/// One matrix-element factor X(g)_{row, col} of a group variable g, where X is
/// D^j(g), conj(D^j(g)), D^j(g^{-1}) or conj(D^j(g^{-1})). The row leg is ket,
/// the column leg bra.
struct GroupFactor {
  int variable = 0;
  Spin spin;
  bool conjugated = false;
  bool inverted = false;
  LegId row_leg, col_leg;
};

/// X(g) for a single factor.
inline Eigen::MatrixXcd factor_matrix(const GroupFactor& f, const GroupElement& g) {
  Eigen::MatrixXcd d = wigner_matrix(f.spin, f.inverted ? g.inverse() : g);
  if (f.conjugated) d = d.conjugate().eval();
  return d;
}

inline LabeledTensor factor_tensor(const GroupFactor& f, const Eigen::MatrixXcd& x) {
  std::vector<Leg> legs{{f.row_leg, f.spin, Variance::ket}, {f.col_leg, f.spin, Variance::bra}};
  const int d = f.spin.dim();
  std::vector<cplx> data(static_cast<std::size_t>(d * d));
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) data[static_cast<std::size_t>(r * d + c)] = x(r, c);
  return LabeledTensor(std::move(legs), std::move(data));
}

/// Integral over Haar measure of the product of `factors` (all of one
/// variable), as a tensor on their row and column legs. Computed as
/// sum_b |b><b| over an orthonormal basis of the invariant subspace of the
/// factors' spins, after rewriting conjugated/inverted factors as D^j with
/// indices conjugated by C_j and/or transposed. Legs are ordered as the ket
/// ("output") legs of every factor followed by the matching bra legs.
inline LabeledTensor haar_project(std::span<const GroupFactor> factors) {
  if (factors.empty()) return LabeledTensor::scalar(1.0);
  for (const auto& f : factors)
    if (f.variable != factors.front().variable)
      throw ContractionError("haar_project: factors reference different variables");

  // Sorted spin signature so cached bases are reused across permutations.
  std::vector<GroupFactor> sorted(factors.begin(), factors.end());
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const GroupFactor& a, const GroupFactor& b) { return a.spin < b.spin; });

  std::vector<IntertwinerLeg> sig;
  std::vector<int> dims;
  for (const auto& f : sorted) {
    sig.push_back({f.spin, Direction::out});
    dims.push_back(f.spin.dim());
  }
  const auto basis = intertwiner_basis(sig);

  // For D_{a b}: ket part on the row leg. For D(g^{-1})_{a b} = conj(D_{b a}) the
  // roles of the legs swap. Conjugation (xor inversion) brings in C_j.
  std::vector<Leg> ket_legs, bra_legs;
  for (const auto& f : sorted) {
    LegId ket = f.inverted ? f.col_leg : f.row_leg;
    LegId bra = f.inverted ? f.row_leg : f.col_leg;
    ket_legs.push_back({ket, f.spin, f.inverted ? Variance::bra : Variance::ket});
    bra_legs.push_back({bra, f.spin, f.inverted ? Variance::ket : Variance::bra});
  }

  const std::size_t n = dense::volume(dims);
  Eigen::MatrixXcd vecs(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(basis.size()));
  for (std::size_t b = 0; b < basis.size(); ++b) {
    std::vector<cplx> v = basis[b].components;
    for (std::size_t a = 0; a < sorted.size(); ++a)
      if (sorted[a].conjugated != sorted[a].inverted) v = dense::apply_to_axis(v, dims, a, epsilon(sorted[a].spin));
    for (std::size_t i = 0; i < n; ++i) vecs(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(b)) = v[i];
  }
  Eigen::MatrixXcd proj = vecs * vecs.adjoint();

  std::vector<Leg> legs = ket_legs;
  legs.insert(legs.end(), bra_legs.begin(), bra_legs.end());
  std::vector<cplx> data(n * n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c)
      data[r * n + c] = proj(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
  return LabeledTensor(std::move(legs), std::move(data));
}

/// Tensor network whose entries may depend on group variables: fixed tensors
/// plus group factors, joined by pairings.
struct GroupNetwork {
  std::vector<LabeledTensor> tensors;
  std::vector<GroupFactor> factors;
  std::vector<Pairing> pairings;

  std::vector<int> variables() const {
    std::vector<int> v;
    for (const auto& f : factors) v.push_back(f.variable);
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
  }
};

/// Exact Haar integral of a group network: each variable's factors are
/// replaced by their projector, then everything is contracted.
inline LabeledTensor integrate_exact(const GroupNetwork& net) {
  std::map<int, std::vector<GroupFactor>> by_variable;
  for (const auto& f : net.factors) by_variable[f.variable].push_back(f);
  std::vector<LabeledTensor> all = net.tensors;
  for (const auto& [var, fs] : by_variable) all.push_back(haar_project(fs));
  return contract(all, net.pairings);
}

}  // namespace spinnet
