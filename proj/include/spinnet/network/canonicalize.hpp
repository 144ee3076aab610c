#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <vector>

#include "spinnet/network/decomposition.hpp"
#include "spinnet/network/refinement.hpp"

namespace spinnet {

namespace detail {

// Reverses edge `e` in place: the leg at each end picks up C_j^{-1} and
// trades its in/out role.
inline void reverse_edge(std::vector<Edge>& edges, std::map<PointId, LabeledTensor>& tensors, std::size_t e) {
  Edge& edge = edges[e];
  const Eigen::MatrixXcd c_inv = epsilon(edge.spin).inverse();
  const LegId src = end_leg(e, End::source), tgt = end_leg(e, End::target);
  tensors.at(edge.source) = tensors.at(edge.source).transformed(src, c_inv);
  tensors.at(edge.target) = tensors.at(edge.target).transformed(tgt, c_inv);
  for (PointId p : {edge.source, edge.target}) {
    LabeledTensor& t = tensors.at(p);
    const auto a_src = t.find(src), a_tgt = t.find(tgt);
    if (a_src >= 0) t.set_leg(static_cast<std::size_t>(a_src), {tgt, edge.spin, Variance::bra});
    if (a_tgt >= 0) t.set_leg(static_cast<std::size_t>(a_tgt), {src, edge.spin, Variance::ket});
    if (edge.source == edge.target) break;
  }
  edge.word = reversed_word(edge.word);
  std::swap(edge.source, edge.target);
}

// lambda with t = lambda * identity for a bivalent tensor joining the target
// end of `in_edge` to the source end of `out_edge`.
inline cplx bivalent_scalar(const LabeledTensor& t, const std::vector<Edge>& edges, std::size_t in_edge,
                            std::size_t out_edge, const SegmentRegistry& reg, PointId p) {
  const Spin a = edges[in_edge].spin, b = edges[out_edge].spin;
  if (a != b)
    throw ValidationError("intertwiners/" + reg.point_name(p),
                          "bivalent vertex joins unequal spins " + to_string(a) + " and " + to_string(b));
  std::array<LegId, 2> order{end_leg(in_edge, End::target), end_leg(out_edge, End::source)};
  auto m = t.permuted(order);
  const int d = a.dim();
  cplx tr{};
  for (int k = 0; k < d; ++k) tr += m.data()[static_cast<std::size_t>(k * d + k)];
  return tr / static_cast<double>(d);
}

}  // namespace detail

/// Canonical form of a spin network supported on a graph: one edge per
/// decomposition interval or circle, oriented so that its least segment is
/// traversed forwards, named "e0", "e1", ... by ascending least segment.
/// Bivalent vertices inside a piece are absorbed as scalars into the
/// interval's source vertex; a circle keeps one bivalent marker vertex
/// (scalar times the identity) at the start of its least segment.
inline SpinNetwork canonicalize(const SpinNetwork& n) {
  validate(n);
  if (!is_graph(n)) throw ValidationError("", "canonicalize needs a network supported on a graph");
  const auto& reg = *n.registry;
  SpinNetwork r = refine(n);
  std::map<PointId, LabeledTensor> tensors;
  for (const auto& [p, t] : r.vertices) tensors.emplace(p, vertex_tensor(r, p));

  std::map<SegmentId, std::size_t> edge_of;
  for (std::size_t e = 0; e < r.edges.size(); ++e) edge_of[r.edges[e].word[0].id] = e;

  const GraphDecomposition d = decompose(r.graph());
  for (const auto* list : {&d.intervals, &d.circles})
    for (const Chain& c : *list)
      for (const auto& s : c.word)
        if (r.edges[edge_of.at(s.id)].word[0].reversed != s.reversed) detail::reverse_edge(r.edges, tensors, edge_of.at(s.id));

  struct Piece {
    const Chain* chain;
    bool circle;
  };
  std::vector<Piece> pieces;
  for (const auto& c : d.intervals) pieces.push_back({&c, false});
  for (const auto& c : d.circles) pieces.push_back({&c, true});
  std::sort(pieces.begin(), pieces.end(),
            [](const Piece& a, const Piece& b) { return a.chain->least() < b.chain->least(); });

  SpinNetwork out{n.registry, {}, {}};
  std::map<std::uint64_t, LegId> relabel;  // refined end leg -> canonical end leg
  std::map<PointId, cplx> scale;
  for (std::size_t k = 0; k < pieces.size(); ++k) {
    const Chain& c = *pieces[k].chain;
    std::vector<std::size_t> es;
    for (const auto& s : c.word) es.push_back(edge_of.at(s.id));
    const Spin j = r.edges[es.front()].spin;
    cplx lambda = 1.0;
    const std::size_t joints = pieces[k].circle ? es.size() : es.size() - 1;
    for (std::size_t i = 0; i < joints; ++i) {
      const std::size_t in = es[i], next = es[(i + 1) % es.size()];
      const PointId p = r.edges[in].target;
      lambda *= detail::bivalent_scalar(tensors.at(p), r.edges, in, next, reg, p);
      tensors.erase(p);
    }
    out.edges.push_back({"e" + std::to_string(k), c.word, c.start, c.end, j});
    if (pieces[k].circle) {
      Intertwiner marker = canonical_bivalent({j, Direction::out}, {j, Direction::in});
      for (auto& x : marker.components) x *= lambda;
      out.vertices[c.start] = std::move(marker);
    } else {
      relabel[end_leg(es.front(), End::source).value] = end_leg(k, End::source);
      relabel[end_leg(es.back(), End::target).value] = end_leg(k, End::target);
      auto [it, fresh] = scale.emplace(c.start, lambda);
      if (!fresh) it->second *= lambda;
    }
  }
  for (PointId p : d.points) {
    const LabeledTensor& t = tensors.at(p);
    std::vector<LegId> ids;
    for (const auto& l : t.legs()) ids.push_back(relabel.at(l.id.value));
    LabeledTensor v = t.relabeled(ids);
    if (auto it = scale.find(p); it != scale.end()) v = v.scaled(it->second);
    out.vertices[p] = to_intertwiner(v, out.edges, p);
  }
  return out;
}

}  // namespace spinnet
