#pragma once

#include <algorithm>
#include <map>
#include <vector>

#include "spinnet/state/evaluate.hpp"
#include "spinnet/tensor/haar.hpp"
#include "spinnet/tensor/monte_carlo.hpp"

namespace spinnet {

struct InnerProduct {
  cplx value{};
  bool structural_zero = false;
};

namespace detail {

inline void require_same_registry(const SpinNetwork& a, const SpinNetwork& b) {
  if (!a.registry || !b.registry || !same_registry(a.registry, b.registry))
    throw ValidationError("", "networks use different segment registries");
}

// Spins of every factor on each segment, over both networks.
inline std::map<SegmentId, std::vector<Spin>> segment_spins(const SpinNetwork& a, const SpinNetwork& b) {
  std::map<SegmentId, std::vector<Spin>> spins;
  for (const auto* n : {&a, &b})
    for (const auto& e : n->edges)
      for (const auto& s : e.word) spins[s.id].push_back(e.spin);
  return spins;
}

// A segment whose factors admit no invariant forces the integral to vanish.
inline bool has_structural_zero(const std::map<SegmentId, std::vector<Spin>>& spins) {
  for (auto [s, js] : spins) {
    if (js.size() == 1) return true;
    std::sort(js.begin(), js.end());
    std::vector<IntertwinerLeg> legs;
    for (auto j : js) legs.push_back({j, Direction::out});
    if (intertwiner_basis(legs).empty()) return true;
  }
  return false;
}

// Leg ids of one side of the combined network.
struct SideLegs {
  std::uint64_t base;
  LegId end(std::size_t e, End which) const { return LegId{base + end_leg(e, which).value}; }
  LegId factor(std::size_t e, std::size_t i, bool row) const {
    return LegId{base + (std::uint64_t{1} << 32) + 2 * ((static_cast<std::uint64_t>(e) << 16) + i) + (row ? 0u : 1u)};
  }
};

// Vertex tensors plus one group factor per traversed segment, consecutive
// factors of an edge joined directly.
inline void add_side(GroupNetwork& net, const SpinNetwork& n, SideLegs legs, bool conjugated) {
  for (const auto& [p, t] : n.vertices) {
    LabeledTensor v = vertex_tensor(n, p);
    std::vector<LegId> ids;
    for (const auto& l : v.legs()) ids.push_back(legs.end(leg_edge(l.id), leg_end(l.id)));
    v = v.relabeled(ids);
    net.tensors.push_back(conjugated ? v.conjugated() : v);
  }
  for (std::size_t e = 0; e < n.edges.size(); ++e) {
    const Edge& edge = n.edges[e];
    for (std::size_t i = 0; i < edge.word.size(); ++i) {
      net.factors.push_back({edge.word[i].id, edge.spin, conjugated, edge.word[i].reversed, legs.factor(e, i, true),
                             legs.factor(e, i, false)});
      if (i > 0) net.pairings.emplace_back(legs.factor(e, i - 1, true), legs.factor(e, i, false));
    }
    net.pairings.emplace_back(legs.factor(e, edge.word.size() - 1, true), legs.end(e, End::target));
    net.pairings.emplace_back(legs.end(e, End::source), legs.factor(e, 0, false));
  }
}

}  // namespace detail

/// The Haar integral of conj(psi_a) psi_b over all segment holonomies, with
/// an exact zero reported before any numerics when some segment's factors
/// admit no invariant.
inline InnerProduct exact_inner_product_detailed(const SpinNetwork& a, const SpinNetwork& b) {
  detail::require_same_registry(a, b);
  if (detail::has_structural_zero(detail::segment_spins(a, b))) return {cplx{}, true};
  GroupNetwork net;
  detail::add_side(net, a, {0}, true);
  detail::add_side(net, b, {std::uint64_t{1} << 48}, false);
  return {integrate_exact(net).scalar_value(), false};
}

/// <psi_a, psi_b>, antilinear in `a`.
inline cplx exact_inner_product(const SpinNetwork& a, const SpinNetwork& b) {
  return exact_inner_product_detailed(a, b).value;
}

/// Monte Carlo estimate of the same integral with independent Haar
/// holonomies on every segment.
inline McEstimate mc_inner_product(const SpinNetwork& a, const SpinNetwork& b, std::size_t n_samples,
                                   std::uint64_t seed, McOptions opts = {}) {
  detail::require_same_registry(a, b);
  std::vector<SegmentId> vars = a.graph().segments;
  for (SegmentId s : b.graph().segments) vars.push_back(s);
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  const StateEvaluator ea(a, vars), eb(b, vars);
  auto integrand = [&](std::span<const GroupElement> g) { return std::conj(ea(g)) * eb(g); };
  return mc_expectation(vars.size(), integrand, n_samples, seed, opts);
}

}  // namespace spinnet
