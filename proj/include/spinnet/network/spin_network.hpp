#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "spinnet/network/registry.hpp"
#include "spinnet/rep/intertwiner.hpp"
#include "spinnet/tensor/labeled_tensor.hpp"

namespace spinnet {

struct Edge {
  std::string name;
  Word word;
  PointId source = 0;
  PointId target = 0;
  Spin spin;
  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Edges carry nontrivial spins and run along segment words; every edge
/// endpoint hosts an intertwiner. The legs of the intertwiner at a point list
/// the incident edge ends in edge order, a source end (out) before a target
/// end (in) of the same edge. Segments may be shared between edges (spin web
/// at finite truncation); `is_graph` tells whether the support is a graph.
struct SpinNetwork {
  RegistryPtr registry;
  std::vector<Edge> edges;
  std::map<PointId, Intertwiner> vertices;

  EmbeddedGraph graph() const {
    std::vector<SegmentId> s;
    for (const auto& e : edges)
      for (const auto& seg : e.word) s.push_back(seg.id);
    return EmbeddedGraph(registry, std::move(s));
  }

  friend bool operator==(const SpinNetwork& a, const SpinNetwork& b) {
    return same_registry(a.registry, b.registry) && a.edges == b.edges && a.vertices == b.vertices;
  }
};

enum class End { source, target };

/// Leg id of an edge end inside a vertex tensor; ordering the ids reproduces
/// the vertex leg convention.
inline LegId end_leg(std::size_t edge, End end) {
  return LegId{2 * static_cast<std::uint64_t>(edge) + (end == End::target ? 1u : 0u)};
}
inline std::size_t leg_edge(LegId id) { return static_cast<std::size_t>(id.value / 2); }
inline End leg_end(LegId id) { return id.value % 2 ? End::target : End::source; }

struct EdgeEnd {
  std::size_t edge;
  End end;
};

inline std::vector<EdgeEnd> incident_ends(const std::vector<Edge>& edges, PointId p) {
  std::vector<EdgeEnd> ends;
  for (std::size_t e = 0; e < edges.size(); ++e) {
    if (edges[e].source == p) ends.push_back({e, End::source});
    if (edges[e].target == p) ends.push_back({e, End::target});
  }
  return ends;
}

inline std::vector<IntertwinerLeg> expected_legs(const std::vector<Edge>& edges, PointId p) {
  std::vector<IntertwinerLeg> legs;
  for (auto [e, end] : incident_ends(edges, p))
    legs.push_back({edges[e].spin, end == End::source ? Direction::out : Direction::in});
  return legs;
}

/// Vertex intertwiner at `p` as a labeled tensor with `end_leg` ids.
inline LabeledTensor vertex_tensor(const SpinNetwork& n, PointId p) {
  std::vector<LegId> ids;
  for (auto [e, end] : incident_ends(n.edges, p)) ids.push_back(end_leg(e, end));
  return LabeledTensor::from_intertwiner(n.vertices.at(p), ids);
}

/// Inverse of `vertex_tensor`: orders the legs of `t` by the vertex convention
/// for `edges` at `p`.
inline Intertwiner to_intertwiner(const LabeledTensor& t, const std::vector<Edge>& edges, PointId p) {
  std::vector<LegId> order;
  Intertwiner out;
  for (auto [e, end] : incident_ends(edges, p)) {
    order.push_back(end_leg(e, end));
    out.legs.push_back({edges[e].spin, end == End::source ? Direction::out : Direction::in});
  }
  if (order.size() != t.rank()) throw ValidationError("", "vertex tensor does not match incident edges");
  auto sorted = t.permuted(order);
  for (std::size_t a = 0; a < order.size(); ++a)
    if (sorted.legs()[a].spin != out.legs[a].spin)
      throw ValidationError("", "vertex tensor leg spin mismatch");
  out.components.assign(sorted.data().begin(), sorted.data().end());
  return out;
}

namespace detail {

inline const std::vector<GroupElement>& equivariance_probes() {
  static const std::vector<GroupElement> probes{
      GroupElement{0.5, 0.5, 0.5, 0.5},
      GroupElement{0.1, -0.7, 0.3, 0.2}.normalized(),
      GroupElement{-0.6, 0.2, -0.1, 0.77}.normalized(),
  };
  return probes;
}

inline std::string edge_path(const Edge& e, std::size_t index) {
  return "edges/" + (e.name.empty() ? std::to_string(index) : e.name);
}

}  // namespace detail

/// Throws ValidationError naming the offending edge or vertex.
inline void validate(const SpinNetwork& n) {
  if (!n.registry) throw ValidationError("", "network has no segment registry");
  const auto& reg = *n.registry;
  std::set<std::string> names;
  std::set<PointId> endpoints;
  for (std::size_t k = 0; k < n.edges.size(); ++k) {
    const Edge& e = n.edges[k];
    const std::string path = detail::edge_path(e, k);
    if (!names.insert(e.name).second) throw ValidationError(path, "duplicate edge name");
    if (e.spin.twice_j <= 0 || e.spin.twice_j > kMaxTwiceJ)
      throw ValidationError(path + "/twice_j", "spin 2j=" + std::to_string(e.spin.twice_j) + " must be in [1, " +
                                                   std::to_string(kMaxTwiceJ) + "]");
    if (e.word.empty()) throw ValidationError(path + "/word", "empty segment word");
    for (std::size_t i = 0; i < e.word.size(); ++i) {
      const auto id = e.word[i].id;
      if (id < 0 || static_cast<std::size_t>(id) >= reg.segment_count())
        throw ValidationError(path + "/word/" + std::to_string(i), "unknown segment");
      if (i > 0 && e.word[i - 1].end(reg) != e.word[i].start(reg))
        throw ValidationError(path + "/word/" + std::to_string(i), "word is not a connected path");
    }
    if (e.word.front().start(reg) != e.source)
      throw ValidationError(path + "/source", "source is not the start of the word");
    if (e.word.back().end(reg) != e.target)
      throw ValidationError(path + "/target", "target is not the end of the word");
    endpoints.insert(e.source);
    endpoints.insert(e.target);
  }
  for (const auto& [p, t] : n.vertices)
    if (!endpoints.contains(p))
      throw ValidationError("intertwiners/" + reg.point_name(p), "vertex has no incident edges");
  for (PointId p : endpoints) {
    const std::string path = "intertwiners/" + reg.point_name(p);
    auto it = n.vertices.find(p);
    if (it == n.vertices.end()) throw ValidationError(path, "missing intertwiner");
    const Intertwiner& t = it->second;
    if (t.legs != expected_legs(n.edges, p))
      throw ValidationError(path, "intertwiner legs do not match incident edges");
    if (t.components.size() != dense::volume(t.dims()))
      throw ValidationError(path, "component count does not match leg dimensions");
    double scale = 1.0;
    for (auto c : t.components) scale = std::max(scale, std::abs(c));
    for (const auto& g : detail::equivariance_probes())
      if (equivariance_residual(t, g) > 1e-9 * scale)
        throw ValidationError(path, "components are not an intertwiner");
  }
}

/// True when no segment is used twice and edges meet only at their endpoints.
inline bool is_graph(const SpinNetwork& n) {
  const auto& reg = *n.registry;
  std::set<SegmentId> used;
  std::set<PointId> vertex_points, interior;
  for (const auto& e : n.edges) {
    vertex_points.insert(e.source);
    vertex_points.insert(e.target);
  }
  for (const auto& e : n.edges) {
    for (std::size_t i = 0; i < e.word.size(); ++i) {
      if (!used.insert(e.word[i].id).second) return false;
      if (i + 1 < e.word.size()) {
        PointId p = e.word[i].end(reg);
        if (vertex_points.contains(p) || !interior.insert(p).second) return false;
      }
    }
  }
  return true;
}

/// Largest componentwise difference of two networks with identical structure;
/// infinity when the structure differs.
inline double max_abs_diff(const SpinNetwork& a, const SpinNetwork& b) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  if (!same_registry(a.registry, b.registry) || a.edges != b.edges || a.vertices.size() != b.vertices.size())
    return inf;
  double d = 0.0;
  for (const auto& [p, t] : a.vertices) {
    auto it = b.vertices.find(p);
    if (it == b.vertices.end() || it->second.legs != t.legs) return inf;
    d = std::max(d, dense::max_abs_diff(t.components, it->second.components));
  }
  return d;
}

}  // namespace spinnet
