#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "spinnet/tensor/labeled_tensor.hpp"

namespace spinnet {

/// Precomputed contraction of a fixed network shape. The pairwise order is
/// chosen greedily (smallest intermediate first) once, so repeated evaluation
/// with fresh operand data (Monte Carlo) only pays for the arithmetic.
class ContractionPlan {
 public:
  ContractionPlan(std::vector<std::vector<Leg>> operands, std::vector<Pairing> pairings)
      : operand_count_(operands.size()) {
    build(std::move(operands), pairings);
  }

  std::size_t operand_count() const { return operand_count_; }
  const std::vector<Leg>& output_legs() const { return output_legs_; }

  /// Flops-free estimate of the largest intermediate, for diagnostics.
  std::size_t peak_size() const { return peak_size_; }

  std::vector<cplx> execute(std::span<const std::span<const cplx>> operands) const {
    if (operands.size() != operand_count_) throw ContractionError("operand count mismatch");
    std::vector<std::vector<cplx>> owned(steps_.size());
    auto slot = [&](int s) -> std::span<const cplx> {
      if (static_cast<std::size_t>(s) < operand_count_) return operands[static_cast<std::size_t>(s)];
      return owned[static_cast<std::size_t>(s) - operand_count_];
    };
    for (std::size_t n = 0; n < steps_.size(); ++n) {
      const Step& st = steps_[n];
      auto& out = owned[n];
      out.assign(st.m * st.n, cplx{});
      auto a = slot(st.lhs);
      if (st.rhs < 0) {
        for (std::size_t o = 0; o < st.m; ++o) {
          cplx s{};
          for (std::size_t t = 0; t < st.k; ++t) s += a[st.gather_lhs[o * st.k + t]];
          out[o] = s;
        }
        continue;
      }
      auto b = slot(st.rhs);
      using RowMat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
      RowMat am(static_cast<Eigen::Index>(st.m), static_cast<Eigen::Index>(st.k));
      RowMat bm(static_cast<Eigen::Index>(st.k), static_cast<Eigen::Index>(st.n));
      for (std::size_t i = 0; i < st.m * st.k; ++i) am.data()[i] = a[st.gather_lhs[i]];
      for (std::size_t i = 0; i < st.k * st.n; ++i) bm.data()[i] = b[st.gather_rhs[i]];
      Eigen::Map<RowMat> om(out.data(), static_cast<Eigen::Index>(st.m), static_cast<Eigen::Index>(st.n));
      om.noalias() = am * bm;
    }
    if (steps_.empty()) {
      if (operand_count_ == 0) return {cplx{1.0}};
      auto s = slot(0);
      return {s.begin(), s.end()};
    }
    return std::move(owned.back());
  }

 private:
  struct Step {
    int lhs = 0, rhs = -1;
    std::vector<std::uint32_t> gather_lhs, gather_rhs;
    std::size_t m = 1, k = 1, n = 1;
  };

  // Flat positions of `legs` for the row-major multi-index over `first`
  // followed by `second` (each a list of axes; an inner vector of several
  // axes means those axes share one index, as for a trace).
  static std::vector<std::uint32_t> gather(const std::vector<Leg>& legs,
                                           const std::vector<std::vector<std::size_t>>& groups) {
    std::vector<int> dims;
    for (const auto& l : legs) dims.push_back(l.spin.dim());
    auto strides = dense::strides(dims);
    std::vector<int> gdims;
    std::vector<std::size_t> gstride;
    for (const auto& g : groups) {
      gdims.push_back(dims[g.front()]);
      std::size_t s = 0;
      for (auto a : g) s += strides[a];
      gstride.push_back(s);
    }
    std::vector<std::uint32_t> out;
    out.reserve(dense::volume(gdims));
    dense::for_each_index(gdims, [&](std::span<const int> idx) {
      std::size_t pos = 0;
      for (std::size_t a = 0; a < idx.size(); ++a) pos += gstride[a] * static_cast<std::size_t>(idx[a]);
      out.push_back(static_cast<std::uint32_t>(pos));
    });
    return out;
  }

  static std::size_t volume(const std::vector<Leg>& legs) {
    std::size_t v = 1;
    for (const auto& l : legs) v *= static_cast<std::size_t>(l.spin.dim());
    return v;
  }

  void build(std::vector<std::vector<Leg>> operands, std::span<const Pairing> pairings) {
    std::map<LegId, std::pair<std::size_t, std::size_t>> where;  // leg -> (operand, axis)
    for (std::size_t o = 0; o < operands.size(); ++o)
      for (std::size_t a = 0; a < operands[o].size(); ++a)
        if (!where.emplace(operands[o][a].id, std::pair{o, a}).second)
          throw ContractionError("leg " + std::to_string(operands[o][a].id.value) + " appears twice");

    std::map<LegId, LegId> partner;
    for (const auto& [x, y] : pairings) {
      auto ix = where.find(x), iy = where.find(y);
      if (ix == where.end() || iy == where.end())
        throw ContractionError("dangling leg in pairing (" + std::to_string(x.value) + ", " +
                               std::to_string(y.value) + ")");
      const Leg& lx = operands[ix->second.first][ix->second.second];
      const Leg& ly = operands[iy->second.first][iy->second.second];
      if (lx.spin != ly.spin)
        throw ContractionError("spin mismatch between legs " + std::to_string(x.value) + " (" +
                               to_string(lx.spin) + ") and " + std::to_string(y.value) + " (" +
                               to_string(ly.spin) + ")");
      if (lx.variance == ly.variance)
        throw ContractionError("pairing joins two legs of the same variance");
      if (x == y || !partner.emplace(x, y).second || !partner.emplace(y, x).second)
        throw ContractionError("leg paired more than once");
    }

    // Output order: unpaired legs in order of appearance.
    for (const auto& op : operands)
      for (const auto& l : op)
        if (!partner.contains(l.id)) output_legs_.push_back(l);

    std::vector<std::optional<std::vector<Leg>>> active(operands.size());
    for (std::size_t o = 0; o < operands.size(); ++o) active[o] = operands[o];
    auto slot_of = [&](LegId id) -> int {
      for (std::size_t s = 0; s < active.size(); ++s)
        if (active[s])
          for (const auto& l : *active[s])
            if (l.id == id) return static_cast<int>(s);
      return -1;
    };

    auto push = [&](Step st, std::vector<Leg> legs) {
      peak_size_ = std::max(peak_size_, volume(legs));
      steps_.push_back(std::move(st));
      active.push_back(std::move(legs));
    };

    // Self-pairings (traces) first.
    for (std::size_t o = 0; o < operands.size(); ++o) {
      const auto& legs = operands[o];
      std::vector<std::vector<std::size_t>> groups, traced;
      std::vector<Leg> kept;
      for (std::size_t a = 0; a < legs.size(); ++a) {
        auto p = partner.find(legs[a].id);
        if (p != partner.end() && where[p->second].first == o) {
          std::size_t b = where[p->second].second;
          if (a < b) traced.push_back({a, b});
          continue;
        }
        groups.push_back({a});
        kept.push_back(legs[a]);
      }
      if (traced.empty()) continue;
      Step st;
      st.lhs = static_cast<int>(o);
      st.m = volume(kept);
      st.k = 1;
      for (const auto& t : traced) st.k *= static_cast<std::size_t>(legs[t.front()].spin.dim());
      groups.insert(groups.end(), traced.begin(), traced.end());
      st.gather_lhs = gather(legs, groups);
      active[o].reset();
      push(std::move(st), std::move(kept));
    }

    for (;;) {
      std::vector<std::size_t> live;
      for (std::size_t s = 0; s < active.size(); ++s)
        if (active[s]) live.push_back(s);
      if (live.size() <= 1) break;

      std::size_t best_i = 0, best_j = 0, best_cost = std::numeric_limits<std::size_t>::max();
      bool found = false;
      for (std::size_t x = 0; x < live.size(); ++x)
        for (std::size_t y = x + 1; y < live.size(); ++y) {
          const auto& lx = *active[live[x]];
          const auto& ly = *active[live[y]];
          bool shared = false;
          std::size_t cost = 1;
          for (const auto& l : lx) {
            auto p = partner.find(l.id);
            bool inner = p != partner.end() && slot_of(p->second) == static_cast<int>(live[y]);
            shared |= inner;
            if (!inner) cost *= static_cast<std::size_t>(l.spin.dim());
          }
          for (const auto& l : ly) {
            auto p = partner.find(l.id);
            bool inner = p != partner.end() && slot_of(p->second) == static_cast<int>(live[x]);
            if (!inner) cost *= static_cast<std::size_t>(l.spin.dim());
          }
          if (shared && cost < best_cost) {
            best_cost = cost;
            best_i = live[x];
            best_j = live[y];
            found = true;
          }
        }
      if (!found) {
        best_i = live[0];
        best_j = live[1];
      }

      const auto lhs = *active[best_i];
      const auto rhs = *active[best_j];
      std::vector<std::vector<std::size_t>> lhs_groups, rhs_groups, lhs_inner, rhs_inner;
      std::vector<Leg> lhs_free, rhs_free;
      for (std::size_t a = 0; a < lhs.size(); ++a) {
        auto p = partner.find(lhs[a].id);
        if (p != partner.end() && slot_of(p->second) == static_cast<int>(best_j)) {
          lhs_inner.push_back({a});
          const auto& r = rhs;
          auto it = std::find_if(r.begin(), r.end(), [&](const Leg& l) { return l.id == p->second; });
          rhs_inner.push_back({static_cast<std::size_t>(it - r.begin())});
        } else {
          lhs_groups.push_back({a});
          lhs_free.push_back(lhs[a]);
        }
      }
      for (std::size_t a = 0; a < rhs.size(); ++a) {
        auto p = partner.find(rhs[a].id);
        if (!(p != partner.end() && slot_of(p->second) == static_cast<int>(best_i))) {
          rhs_groups.push_back({a});
          rhs_free.push_back(rhs[a]);
        }
      }
      Step st;
      st.lhs = static_cast<int>(best_i);
      st.rhs = static_cast<int>(best_j);
      st.m = volume(lhs_free);
      st.n = volume(rhs_free);
      st.k = 1;
      for (const auto& g : lhs_inner) st.k *= static_cast<std::size_t>(lhs[g.front()].spin.dim());
      auto lg = lhs_groups;
      lg.insert(lg.end(), lhs_inner.begin(), lhs_inner.end());
      auto rg = rhs_inner;
      rg.insert(rg.end(), rhs_groups.begin(), rhs_groups.end());
      st.gather_lhs = gather(lhs, lg);
      st.gather_rhs = gather(rhs, rg);
      std::vector<Leg> legs = lhs_free;
      legs.insert(legs.end(), rhs_free.begin(), rhs_free.end());
      active[best_i].reset();
      active[best_j].reset();
      push(std::move(st), std::move(legs));
    }

    // Final axis order.
    std::size_t last = active.size();
    for (std::size_t s = 0; s < active.size(); ++s)
      if (active[s]) last = s;
    if (last == active.size()) return;  // no operands
    const auto& legs = *active[last];
    std::vector<std::vector<std::size_t>> groups;
    bool identity = true;
    for (std::size_t a = 0; a < output_legs_.size(); ++a) {
      auto it = std::find_if(legs.begin(), legs.end(), [&](const Leg& l) { return l.id == output_legs_[a].id; });
      groups.push_back({static_cast<std::size_t>(it - legs.begin())});
      identity &= groups.back().front() == a;
    }
    if (identity && !steps_.empty()) return;
    Step st;
    st.lhs = static_cast<int>(last);
    st.m = volume(legs);
    st.k = 1;
    st.gather_lhs = gather(legs, groups);
    steps_.push_back(std::move(st));
  }

  std::size_t operand_count_;
  std::vector<Step> steps_;
  std::vector<Leg> output_legs_;
  std::size_t peak_size_ = 1;
};

/// Full contraction of `tensors` over `pairings`. Unpaired legs remain, in the
/// order they appear in the inputs.
inline LabeledTensor contract(std::span<const LabeledTensor> tensors, std::span<const Pairing> pairings) {
  std::vector<std::vector<Leg>> shapes;
  std::vector<std::span<const cplx>> data;
  for (const auto& t : tensors) {
    shapes.push_back(t.legs());
    data.push_back(t.data());
  }
  ContractionPlan plan(std::move(shapes), {pairings.begin(), pairings.end()});
  return LabeledTensor(plan.output_legs(), plan.execute(data));
}

}  // namespace spinnet
