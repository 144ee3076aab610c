#pragma once

#include <map>
#include <utility>

#include "spinnet/network/spin_network.hpp"

namespace spinnet {

namespace detail {

inline LabeledTensor identity_junction(LegId in_leg, LegId out_leg, Spin j) {
  const int d = j.dim();
  std::vector<cplx> data(static_cast<std::size_t>(d * d));
  for (int k = 0; k < d; ++k) data[static_cast<std::size_t>(k * d + k)] = 1.0;
  return LabeledTensor({{in_leg, j, Variance::bra}, {out_leg, j, Variance::ket}}, std::move(data));
}

}  // namespace detail

/// Splits every edge into single-segment edges joined by identity bivalent
/// intertwiners. Where a junction falls on an existing vertex or another
/// junction the identities are tensored into that vertex. The state is
/// unchanged.
inline SpinNetwork refine(const SpinNetwork& n) {
  const auto& reg = *n.registry;
  SpinNetwork out{n.registry, {}, {}};
  std::vector<std::size_t> first(n.edges.size()), last(n.edges.size());
  std::map<PointId, LabeledTensor> tensors;

  for (std::size_t k = 0; k < n.edges.size(); ++k) {
    const Edge& e = n.edges[k];
    first[k] = out.edges.size();
    for (std::size_t i = 0; i < e.word.size(); ++i) {
      std::string name = e.word.size() == 1 ? e.name : e.name + "#" + std::to_string(i);
      out.edges.push_back({std::move(name), {e.word[i]}, e.word[i].start(reg), e.word[i].end(reg), e.spin});
      if (i > 0) {
        const std::size_t prev = out.edges.size() - 2, cur = out.edges.size() - 1;
        auto junction = detail::identity_junction(end_leg(prev, End::target), end_leg(cur, End::source), e.spin);
        const PointId p = e.word[i].start(reg);
        auto it = tensors.find(p);
        tensors[p] = it == tensors.end() ? junction : outer(it->second, junction);
      }
    }
    last[k] = out.edges.size() - 1;
  }

  for (const auto& [p, t] : n.vertices) {
    LabeledTensor v = vertex_tensor(n, p);
    std::vector<LegId> ids;
    for (const auto& l : v.legs())
      ids.push_back(leg_end(l.id) == End::source ? end_leg(first[leg_edge(l.id)], End::source)
                                                  : end_leg(last[leg_edge(l.id)], End::target));
    v = v.relabeled(ids);
    auto it = tensors.find(p);
    tensors[p] = it == tensors.end() ? v : outer(v, it->second);
  }
  for (const auto& [p, t] : tensors) out.vertices[p] = to_intertwiner(t, out.edges, p);
  return out;
}

/// Both networks re-expressed with single-segment edges, so that every
/// segment is one shared group variable.
inline std::pair<SpinNetwork, SpinNetwork> common_refinement(const SpinNetwork& a, const SpinNetwork& b) {
  if (!same_registry(a.registry, b.registry)) throw ValidationError("", "networks use different segment registries");
  return {refine(a), refine(b)};
}

}  // namespace spinnet
