#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <memory>
#include <string>
#include <vector>

#include "spinnet/spin.hpp"

namespace spinnet {

using PointId = int;
using SegmentId = int;

struct Segment {
  std::string name;
  PointId source = 0;
  PointId target = 0;
  friend bool operator==(const Segment&, const Segment&) = default;
};

/// Combinatorial stand-in for the ambient manifold: named points and oriented
/// embedded segments between them. Segments are ranges; two segments never
/// overlap except at endpoints, so a graph in M is a set of segment ids.
class SegmentRegistry {
 public:
  PointId add_point(const std::string& name) {
    if (auto it = point_index_.find(name); it != point_index_.end()) return it->second;
    point_index_.emplace(name, static_cast<PointId>(points_.size()));
    points_.push_back(name);
    return static_cast<PointId>(points_.size() - 1);
  }

  SegmentId add_segment(const std::string& name, PointId source, PointId target) {
    if (name.empty() || name.back() == '~')
      throw ValidationError("", "segment name '" + name + "' is empty or ends in '~'");
    if (segment_index_.contains(name)) throw ValidationError("", "duplicate segment '" + name + "'");
    check_point(source);
    check_point(target);
    segment_index_.emplace(name, static_cast<SegmentId>(segments_.size()));
    segments_.push_back({name, source, target});
    return static_cast<SegmentId>(segments_.size() - 1);
  }

  SegmentId add_segment(const std::string& name, const std::string& source, const std::string& target) {
    const PointId s = add_point(source);
    const PointId t = add_point(target);
    return add_segment(name, s, t);
  }

  std::size_t point_count() const { return points_.size(); }
  std::size_t segment_count() const { return segments_.size(); }
  const std::string& point_name(PointId p) const { return points_.at(static_cast<std::size_t>(p)); }
  const Segment& segment(SegmentId s) const { return segments_.at(static_cast<std::size_t>(s)); }
  const std::vector<Segment>& segments() const { return segments_; }
  const std::vector<std::string>& points() const { return points_; }

  std::optional<SegmentId> find_segment(const std::string& name) const {
    auto it = segment_index_.find(name);
    if (it == segment_index_.end()) return std::nullopt;
    return it->second;
  }
  std::optional<PointId> find_point(const std::string& name) const {
    auto it = point_index_.find(name);
    if (it == point_index_.end()) return std::nullopt;
    return it->second;
  }

  friend bool operator==(const SegmentRegistry& a, const SegmentRegistry& b) {
    return a.points_ == b.points_ && a.segments_ == b.segments_;
  }

 private:
  void check_point(PointId p) const {
    if (p < 0 || static_cast<std::size_t>(p) >= points_.size())
      throw ValidationError("", "unknown point " + std::to_string(p));
  }

  std::vector<std::string> points_;
  std::vector<Segment> segments_;
  std::map<std::string, PointId> point_index_;
  std::map<std::string, SegmentId> segment_index_;
};

using RegistryPtr = std::shared_ptr<const SegmentRegistry>;

inline bool same_registry(const RegistryPtr& a, const RegistryPtr& b) {
  return a == b || (a && b && *a == *b);
}

/// A segment traversed forwards or backwards.
struct SignedSegment {
  SegmentId id = 0;
  bool reversed = false;

  SignedSegment flipped() const { return {id, !reversed}; }
  PointId start(const SegmentRegistry& r) const { return reversed ? r.segment(id).target : r.segment(id).source; }
  PointId end(const SegmentRegistry& r) const { return reversed ? r.segment(id).source : r.segment(id).target; }

  friend auto operator<=>(const SignedSegment&, const SignedSegment&) = default;
};

using Word = std::vector<SignedSegment>;

inline Word reversed_word(const Word& w) {
  Word out;
  for (auto it = w.rbegin(); it != w.rend(); ++it) out.push_back(it->flipped());
  return out;
}

/// A graph in M: a finite set of registry segments. Equality of graphs is
/// equality of the segment sets.
struct EmbeddedGraph {
  RegistryPtr registry;
  std::vector<SegmentId> segments;  // sorted, unique

  EmbeddedGraph(RegistryPtr r, std::vector<SegmentId> s) : registry(std::move(r)), segments(std::move(s)) {
    std::sort(segments.begin(), segments.end());
    segments.erase(std::unique(segments.begin(), segments.end()), segments.end());
  }

  bool contains(SegmentId s) const { return std::binary_search(segments.begin(), segments.end(), s); }

  friend bool operator==(const EmbeddedGraph& a, const EmbeddedGraph& b) {
    return same_registry(a.registry, b.registry) && a.segments == b.segments;
  }
};

}  // namespace spinnet
