#pragma once

#include <memory>
#include <string>

#include "spinnet/network/spin_network.hpp"

namespace spinnet {

/// A single closed edge along `word` carrying spin `j`, with the identity as
/// its bivalent vertex, so the state is the character of the loop holonomy.
inline SpinNetwork loop_network(RegistryPtr reg, const Word& word, Spin j, const std::string& name = "loop") {
  const PointId p = word.front().start(*reg);
  if (word.back().end(*reg) != p) throw ValidationError("edges/" + name + "/word", "loop word is not closed");
  SpinNetwork n{std::move(reg), {{name, word, p, p, j}}, {}};
  n.vertices[p] = canonical_bivalent({j, Direction::out}, {j, Direction::in});
  return n;
}

/// A registry holding a single circle made of `segments` consecutive
/// segments named prefix0, prefix1, ...
inline std::shared_ptr<SegmentRegistry> circle_registry(int segments, const std::string& prefix = "s") {
  auto reg = std::make_shared<SegmentRegistry>();
  for (int k = 0; k < segments; ++k)
    reg->add_segment(prefix + std::to_string(k), prefix + "p" + std::to_string(k),
                     prefix + "p" + std::to_string((k + 1) % segments));
  return reg;
}

}  // namespace spinnet
