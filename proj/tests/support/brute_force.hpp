#pragma once

// Exhaustive correspondence counting over all bijections of points,
// intervals and circles with all orientation flags.

#include <algorithm>
#include <numeric>
#include <vector>

#include "spinnet/network/decomposition.hpp"

namespace oracle {

inline std::size_t brute_force_correspondences(const spinnet::GraphDecomposition& a,
                                               const spinnet::GraphDecomposition& b, bool preserving_only) {
  if (a.points.size() != b.points.size() || a.intervals.size() != b.intervals.size() ||
      a.circles.size() != b.circles.size())
    return 0;
  const std::size_t np = a.points.size(), ni = a.intervals.size(), nc = a.circles.size();
  auto index_of = [](const std::vector<spinnet::PointId>& pts, spinnet::PointId p) {
    return static_cast<std::size_t>(std::find(pts.begin(), pts.end(), p) - pts.begin());
  };
  std::vector<std::size_t> pp(np), ip(ni);
  std::iota(pp.begin(), pp.end(), 0);
  std::size_t count = 0;
  do {
    std::iota(ip.begin(), ip.end(), 0);
    do {
      const std::size_t flag_sets = preserving_only ? 1 : (std::size_t{1} << ni);
      for (std::size_t mask = 0; mask < flag_sets; ++mask) {
        bool ok = true;
        for (std::size_t k = 0; k < ni && ok; ++k) {
          const auto& s = a.intervals[k];
          const auto& t = b.intervals[ip[k]];
          const bool rev = (mask >> k) & 1;
          const auto ps = b.points[pp[index_of(a.points, s.start)]];
          const auto pe = b.points[pp[index_of(a.points, s.end)]];
          ok = ps == (rev ? t.end : t.start) && pe == (rev ? t.start : t.end);
        }
        if (!ok) continue;
        std::vector<std::size_t> cp(nc);
        std::iota(cp.begin(), cp.end(), 0);
        do {
          count += preserving_only ? 1 : (std::size_t{1} << nc);
        } while (std::next_permutation(cp.begin(), cp.end()));
      }
    } while (std::next_permutation(ip.begin(), ip.end()));
  } while (std::next_permutation(pp.begin(), pp.end()));
  return count;
}

}  // namespace oracle
