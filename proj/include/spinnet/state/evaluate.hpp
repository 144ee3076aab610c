#pragma once

#include <map>
#include <span>
#include <vector>

#include "spinnet/network/spin_network.hpp"
#include "spinnet/rep/wigner.hpp"
#include "spinnet/tensor/contraction.hpp"

namespace spinnet {

/// Holonomy of every segment a state depends on.
class HolonomyAssignment {
 public:
  HolonomyAssignment() = default;
  explicit HolonomyAssignment(std::map<SegmentId, GroupElement> values) : values_(std::move(values)) {}

  void set(SegmentId s, const GroupElement& g) { values_[s] = g; }
  bool contains(SegmentId s) const { return values_.contains(s); }
  const std::map<SegmentId, GroupElement>& values() const { return values_; }

  const GroupElement& at(SegmentId s, const SegmentRegistry* reg = nullptr) const {
    auto it = values_.find(s);
    if (it == values_.end())
      throw ValidationError("holonomies", "missing holonomy for segment " +
                                              (reg ? "'" + reg->segment(s).name + "'" : std::to_string(s)));
    return it->second;
  }

 private:
  std::map<SegmentId, GroupElement> values_;
};

/// Holonomy along a word: later segments multiply on the left, and a
/// reversed segment contributes the inverse.
template <class Lookup>
GroupElement word_holonomy(const Word& w, const Lookup& lookup) {
  GroupElement h = GroupElement::identity();
  for (const auto& s : w) {
    const GroupElement& g = lookup(s.id);
    h = (s.reversed ? g.inverse() : g) * h;
  }
  return h;
}

/// A state compiled for repeated evaluation: the contraction order of vertex
/// intertwiners and edge Wigner matrices is planned once.
class StateEvaluator {
 public:
  /// `variables` fixes the order of the holonomies passed to `operator()`;
  /// by default the network's own segments in ascending order.
  explicit StateEvaluator(const SpinNetwork& n) : StateEvaluator(n, n.graph().segments) {}

  StateEvaluator(const SpinNetwork& n, std::span<const SegmentId> variables)
      : network_(n), variables_(variables.begin(), variables.end()), plan_(build(n)) {
    std::map<SegmentId, std::size_t> index;
    for (std::size_t k = 0; k < variables_.size(); ++k) index[variables_[k]] = k;
    for (const auto& e : n.edges) {
      std::vector<std::pair<std::size_t, bool>> w;
      for (const auto& s : e.word) {
        auto it = index.find(s.id);
        if (it == index.end())
          throw ValidationError("holonomies", "missing holonomy for segment '" + n.registry->segment(s.id).name + "'");
        w.emplace_back(it->second, s.reversed);
      }
      words_.push_back(std::move(w));
    }
    for (const auto& [p, t] : n.vertices) vertex_data_.push_back(t.components);
  }

  const std::vector<SegmentId>& variables() const { return variables_; }

  cplx operator()(std::span<const GroupElement> holonomies) const {
    std::vector<std::vector<cplx>> edge_data;
    edge_data.reserve(words_.size());
    for (std::size_t e = 0; e < words_.size(); ++e) {
      GroupElement h = GroupElement::identity();
      for (auto [k, rev] : words_[e]) h = (rev ? holonomies[k].inverse() : holonomies[k]) * h;
      const Eigen::MatrixXcd d = wigner_matrix(network_.edges[e].spin, h);
      std::vector<cplx> data(static_cast<std::size_t>(d.size()));
      Eigen::Map<Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(data.data(), d.rows(), d.cols()) = d;
      edge_data.push_back(std::move(data));
    }
    std::vector<std::span<const cplx>> ops;
    for (const auto& v : vertex_data_) ops.push_back(v);
    for (const auto& v : edge_data) ops.push_back(v);
    return plan_.execute(ops)[0];
  }

  cplx operator()(const HolonomyAssignment& h) const {
    std::vector<GroupElement> g;
    for (SegmentId s : variables_) g.push_back(h.at(s, network_.registry.get()));
    return (*this)(std::span<const GroupElement>(g));
  }

  /// Leg ids used for the Wigner matrix of edge `e` (row is ket, column bra).
  static LegId row_leg(std::size_t edge_count, std::size_t e) { return LegId{2 * edge_count + 2 * e}; }
  static LegId col_leg(std::size_t edge_count, std::size_t e) { return LegId{2 * edge_count + 2 * e + 1}; }

 private:
  static ContractionPlan build(const SpinNetwork& n) {
    std::vector<std::vector<Leg>> shapes;
    for (const auto& [p, t] : n.vertices) shapes.push_back(vertex_tensor(n, p).legs());
    std::vector<Pairing> pairings;
    const std::size_t m = n.edges.size();
    for (std::size_t e = 0; e < m; ++e) {
      const Spin j = n.edges[e].spin;
      shapes.push_back({{row_leg(m, e), j, Variance::ket}, {col_leg(m, e), j, Variance::bra}});
      pairings.emplace_back(row_leg(m, e), end_leg(e, End::target));
      pairings.emplace_back(end_leg(e, End::source), col_leg(m, e));
    }
    ContractionPlan plan(std::move(shapes), std::move(pairings));
    if (!plan.output_legs().empty()) throw ValidationError("", "state network has unpaired legs");
    return plan;
  }

  SpinNetwork network_;
  std::vector<SegmentId> variables_;
  ContractionPlan plan_;
  std::vector<std::vector<std::pair<std::size_t, bool>>> words_;
  std::vector<std::vector<cplx>> vertex_data_;
};

/// Value of the state of `n` at the holonomies `h`.
inline cplx evaluate(const SpinNetwork& n, const HolonomyAssignment& h) {
  return StateEvaluator(n)(h);
}

}  // namespace spinnet
