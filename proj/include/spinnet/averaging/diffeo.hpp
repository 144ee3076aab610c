#pragma once

#include <functional>
#include <map>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "spinnet/network/canonicalize.hpp"
#include "spinnet/network/decomposition.hpp"
#include "spinnet/state/inner_product.hpp"

namespace spinnet {

/// Image of one interval or circle: its index in the target decomposition and
/// whether it is traversed against the target's canonical orientation.
struct PieceImage {
  std::size_t index = 0;
  bool reversed = false;
  friend auto operator<=>(const PieceImage&, const PieceImage&) = default;
};

/// A bijection between the points, intervals and circles of two
/// decompositions that respects incidence; it stands for one class of
/// diffeomorphisms carrying the first graph onto the second.
struct Correspondence {
  std::map<PointId, PointId> points;
  std::vector<PieceImage> intervals;
  std::vector<PieceImage> circles;
  friend auto operator<=>(const Correspondence&, const Correspondence&) = default;
};

struct AveragingOptions {
  /// Only correspondences that keep every piece's canonical orientation.
  bool orientation_preserving_only = false;
};

/// Every incidence-compatible correspondence from `from` to `to`, in
/// lexicographic order of (interval images, circle images). Empty when the
/// piece counts differ.
inline std::vector<Correspondence> enumerate_correspondences(const GraphDecomposition& from,
                                                             const GraphDecomposition& to,
                                                             AveragingOptions opts = {}) {
  std::vector<Correspondence> out;
  if (from.points.size() != to.points.size() || from.intervals.size() != to.intervals.size() ||
      from.circles.size() != to.circles.size())
    return out;
  const std::vector<bool> flags = opts.orientation_preserving_only ? std::vector<bool>{false}
                                                                    : std::vector<bool>{false, true};
  Correspondence cur;
  std::map<PointId, PointId> inverse;
  std::vector<bool> used_interval(to.intervals.size()), used_circle(to.circles.size());

  auto bind = [&](PointId p, PointId q, std::vector<PointId>& added) {
    auto it = cur.points.find(p);
    if (it != cur.points.end()) return it->second == q;
    if (inverse.contains(q)) return false;
    cur.points[p] = q;
    inverse[q] = p;
    added.push_back(p);
    return true;
  };
  auto unbind = [&](const std::vector<PointId>& added) {
    for (PointId p : added) {
      inverse.erase(cur.points.at(p));
      cur.points.erase(p);
    }
  };

  std::function<void(std::size_t)> circles = [&](std::size_t k) {
    if (k == from.circles.size()) {
      out.push_back(cur);
      return;
    }
    for (std::size_t t = 0; t < to.circles.size(); ++t) {
      if (used_circle[t]) continue;
      used_circle[t] = true;
      for (bool rev : flags) {
        cur.circles.push_back({t, rev});
        circles(k + 1);
        cur.circles.pop_back();
      }
      used_circle[t] = false;
    }
  };
  std::function<void(std::size_t)> intervals = [&](std::size_t k) {
    if (k == from.intervals.size()) {
      if (cur.points.size() == from.points.size()) circles(0);
      return;
    }
    const Chain& src = from.intervals[k];
    for (std::size_t t = 0; t < to.intervals.size(); ++t) {
      if (used_interval[t]) continue;
      const Chain& dst = to.intervals[t];
      for (bool rev : flags) {
        std::vector<PointId> added;
        const bool ok = bind(src.start, rev ? dst.end : dst.start, added) &&
                        bind(src.end, rev ? dst.start : dst.end, added);
        if (ok) {
          used_interval[t] = true;
          cur.intervals.push_back({t, rev});
          intervals(k + 1);
          cur.intervals.pop_back();
          used_interval[t] = false;
        }
        unbind(added);
      }
    }
  };
  intervals(0);
  return out;
}

namespace detail {

inline std::optional<std::size_t> find_chain(const std::vector<Chain>& chains, const Word& w) {
  for (std::size_t i = 0; i < chains.size(); ++i)
    if (chains[i].word == w) return i;
  return std::nullopt;
}

}  // namespace detail

/// Moves a network along a correspondence from its own decomposition to
/// `to`: each edge is laid onto the image piece (backwards when the piece is
/// reversed) and vertex intertwiners move to the image points. The result is
/// canonicalized, which dualizes reversed edges with C_j.
inline SpinNetwork transport(const SpinNetwork& n, const GraphDecomposition& to, const Correspondence& c) {
  const SpinNetwork cn = canonicalize(n);
  const GraphDecomposition from = decompose(cn.graph());
  if (c.intervals.size() != from.intervals.size() || c.circles.size() != from.circles.size() ||
      c.points.size() != from.points.size())
    throw ValidationError("", "correspondence does not match the network's decomposition");

  SpinNetwork out{cn.registry, cn.edges, {}};
  std::map<PointId, PointId> point_map = c.points;
  for (std::size_t e = 0; e < cn.edges.size(); ++e) {
    Edge& edge = out.edges[e];
    if (auto i = detail::find_chain(from.intervals, cn.edges[e].word)) {
      const PieceImage img = c.intervals.at(*i);
      const Chain& dst = to.intervals.at(img.index);
      const PointId s = img.reversed ? dst.end : dst.start, t = img.reversed ? dst.start : dst.end;
      if (point_map.at(cn.edges[e].source) != s || point_map.at(cn.edges[e].target) != t)
        throw ValidationError("", "correspondence is not incidence compatible");
      edge.word = img.reversed ? reversed_word(dst.word) : dst.word;
      edge.source = s;
      edge.target = t;
    } else if (auto k = detail::find_chain(from.circles, cn.edges[e].word)) {
      const PieceImage img = c.circles.at(*k);
      const Chain& dst = to.circles.at(img.index);
      edge.word = img.reversed ? reversed_word(dst.word) : dst.word;
      edge.source = edge.target = dst.start;
      point_map[cn.edges[e].source] = dst.start;
    } else {
      throw ValidationError("", "network edge is not a decomposition piece");
    }
  }
  for (const auto& [p, t] : cn.vertices) {
    const PointId q = point_map.at(p);
    out.vertices[q] = to_intertwiner(vertex_tensor(cn, p), out.edges, q);
  }
  return canonicalize(out);
}

struct AveragedInnerProduct {
  cplx value{};
  std::size_t correspondences = 0;
};

/// Sum over correspondences c from a's decomposition to b's of
/// <transport(a, c), b>; antilinear in `a`.
inline AveragedInnerProduct averaged_inner_product_detailed(const SpinNetwork& a, const SpinNetwork& b,
                                                            AveragingOptions opts = {}) {
  detail::require_same_registry(a, b);
  const SpinNetwork ca = canonicalize(a), cb = canonicalize(b);
  const GraphDecomposition da = decompose(ca.graph()), db = decompose(cb.graph());
  AveragedInnerProduct r;
  for (const auto& c : enumerate_correspondences(da, db, opts)) {
    r.value += exact_inner_product(transport(ca, db, c), cb);
    ++r.correspondences;
  }
  return r;
}

inline cplx averaged_inner_product(const SpinNetwork& a, const SpinNetwork& b, AveragingOptions opts = {}) {
  return averaged_inner_product_detailed(a, b, opts).value;
}

struct WeightedNetwork {
  cplx weight{1.0};
  SpinNetwork network;
};

/// A finite linear combination of spin-network states.
using Combination = std::vector<WeightedNetwork>;

/// Gram matrix of the averaged form on `states`, extended sesquilinearly.
/// Every entry is computed independently (no symmetrization).
inline Eigen::MatrixXcd averaged_gram(const std::vector<Combination>& states, AveragingOptions opts = {}) {
  std::vector<const SpinNetwork*> terms;
  std::vector<std::pair<std::size_t, std::size_t>> owner;  // (state, term)
  for (std::size_t i = 0; i < states.size(); ++i)
    for (std::size_t k = 0; k < states[i].size(); ++k) {
      terms.push_back(&states[i][k].network);
      owner.emplace_back(i, k);
    }
  std::vector<SpinNetwork> canonical;
  for (const auto* t : terms) canonical.push_back(canonicalize(*t));
  const auto n = static_cast<Eigen::Index>(states.size());
  Eigen::MatrixXcd gram = Eigen::MatrixXcd::Zero(n, n);
  for (std::size_t x = 0; x < terms.size(); ++x)
    for (std::size_t y = 0; y < terms.size(); ++y) {
      const auto [i, k] = owner[x];
      const auto [j, l] = owner[y];
      const cplx w = std::conj(states[i][k].weight) * states[j][l].weight;
      if (w == cplx{}) continue;
      gram(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) +=
          w * averaged_inner_product(canonical[x], canonical[y], opts);
    }
  return gram;
}

}  // namespace spinnet
