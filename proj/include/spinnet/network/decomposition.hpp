#pragma once

#include <map>
#include <vector>

#include "spinnet/network/registry.hpp"

namespace spinnet {

/// An interval (open chain between decomposition points) or a circle, as a
/// signed segment word. Intervals run from `start` to `end`; circles have
/// start == end. The least segment id is always traversed forwards and a
/// circle word begins with it.
struct Chain {
  Word word;
  PointId start = 0;
  PointId end = 0;

  SegmentId least() const {
    SegmentId m = word.front().id;
    for (const auto& s : word) m = std::min(m, s.id);
    return m;
  }
  friend bool operator==(const Chain&, const Chain&) = default;
};

struct GraphDecomposition {
  std::vector<PointId> points;
  std::vector<Chain> intervals;
  std::vector<Chain> circles;

  std::size_t piece_count() const { return points.size() + intervals.size() + circles.size(); }
  friend bool operator==(const GraphDecomposition&, const GraphDecomposition&) = default;
};

/// Unique splitting of a graph into points (segment degree other than two,
/// loops counted twice), maximal intervals between them and circles.
/// Pieces are listed by ascending least point or segment id.
inline GraphDecomposition decompose(const EmbeddedGraph& g) {
  const SegmentRegistry& reg = *g.registry;
  std::map<PointId, std::vector<SignedSegment>> leaving;  // segment ends at a point, oriented away from it
  for (SegmentId s : g.segments) {
    leaving[reg.segment(s).source].push_back({s, false});
    leaving[reg.segment(s).target].push_back({s, true});
  }
  GraphDecomposition d;
  for (const auto& [p, ends] : leaving)
    if (ends.size() != 2) d.points.push_back(p);
  auto is_point = [&](PointId p) { return leaving.at(p).size() != 2; };

  // The other end at a degree-two point, continuing the walk that arrived
  // through `arrived` (oriented into the point).
  auto continue_from = [&](SignedSegment arrived) {
    const PointId p = arrived.end(reg);
    const auto& ends = leaving.at(p);
    const SignedSegment back = arrived.flipped();
    return ends[0] == back ? ends[1] : ends[0];
  };

  std::map<SegmentId, bool> seen;
  for (SegmentId s : g.segments) {
    if (seen[s]) continue;
    const SignedSegment first{s, false};
    Word forward{first};
    seen[s] = true;
    bool closed = false;
    SignedSegment cur = first;
    while (!is_point(cur.end(reg))) {
      SignedSegment next = continue_from(cur);
      if (next == first) {
        closed = true;
        break;
      }
      seen[next.id] = true;
      forward.push_back(next);
      cur = next;
    }
    if (closed) {
      d.circles.push_back({forward, first.start(reg), first.start(reg)});
      continue;
    }
    Word backward;  // walked from first's start, oriented away from first
    cur = first.flipped();
    while (!is_point(cur.end(reg))) {
      SignedSegment next = continue_from(cur);
      seen[next.id] = true;
      backward.push_back(next);
      cur = next;
    }
    Word word = reversed_word(backward);
    word.insert(word.end(), forward.begin(), forward.end());
    d.intervals.push_back({word, word.front().start(reg), word.back().end(reg)});
  }
  return d;
}

}  // namespace spinnet
