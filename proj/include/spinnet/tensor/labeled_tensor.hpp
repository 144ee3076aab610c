#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "spinnet/rep/intertwiner.hpp"
#include "spinnet/spin.hpp"
#include "spinnet/tensor/dense.hpp"

namespace spinnet {

struct LegId {
  std::uint64_t value = 0;
  friend constexpr auto operator<=>(LegId, LegId) = default;
};

/// ket legs are upper (output) indices, bra legs lower (input) indices; a
/// contraction always joins a ket leg to a bra leg.
enum class Variance { ket, bra };

inline Variance opposite(Variance v) { return v == Variance::ket ? Variance::bra : Variance::ket; }

struct Leg {
  LegId id;
  Spin spin;
  Variance variance = Variance::ket;
  friend bool operator==(const Leg&, const Leg&) = default;
};

using Pairing = std::pair<LegId, LegId>;

class ContractionError : public Error {
 public:
  using Error::Error;
};

class LabeledTensor {
 public:
  LabeledTensor() : data_{cplx{1.0}} {}

  LabeledTensor(std::vector<Leg> legs, std::vector<cplx> data) : legs_(std::move(legs)), data_(std::move(data)) {
    if (data_.size() != dense::volume(dims()))
      throw ContractionError("tensor data size " + std::to_string(data_.size()) +
                             " does not match leg dimensions");
  }

  static LabeledTensor scalar(cplx v) { return LabeledTensor({}, {v}); }

  static LabeledTensor zeros(std::vector<Leg> legs) {
    LabeledTensor t;
    t.legs_ = std::move(legs);
    t.data_.assign(dense::volume(t.dims()), cplx{});
    return t;
  }

  /// Intertwiner components with in legs as bra and out legs as ket.
  static LabeledTensor from_intertwiner(const Intertwiner& t, std::span<const LegId> ids) {
    std::vector<Leg> legs;
    for (std::size_t a = 0; a < t.legs.size(); ++a)
      legs.push_back({ids[a], t.legs[a].spin,
                      t.legs[a].direction == Direction::out ? Variance::ket : Variance::bra});
    return LabeledTensor(std::move(legs), t.components);
  }

  const std::vector<Leg>& legs() const { return legs_; }
  std::span<const cplx> data() const { return data_; }
  std::vector<cplx>& mutable_data() { return data_; }
  std::size_t rank() const { return legs_.size(); }
  std::size_t size() const { return data_.size(); }

  std::vector<int> dims() const {
    std::vector<int> d;
    d.reserve(legs_.size());
    for (const auto& l : legs_) d.push_back(l.spin.dim());
    return d;
  }

  std::ptrdiff_t find(LegId id) const {
    auto it = std::find_if(legs_.begin(), legs_.end(), [&](const Leg& l) { return l.id == id; });
    return it == legs_.end() ? -1 : it - legs_.begin();
  }

  std::size_t axis(LegId id) const {
    auto a = find(id);
    if (a < 0) throw ContractionError("unknown leg " + std::to_string(id.value));
    return static_cast<std::size_t>(a);
  }

  cplx scalar_value() const {
    if (!legs_.empty()) throw ContractionError("tensor is not a scalar");
    return data_[0];
  }

  /// Same tensor with axes reordered to `order`.
  LabeledTensor permuted(std::span<const LegId> order) const {
    if (order.size() != legs_.size()) throw ContractionError("permutation size mismatch");
    std::vector<int> perm;
    std::vector<Leg> legs;
    for (auto id : order) {
      perm.push_back(static_cast<int>(axis(id)));
      legs.push_back(legs_[perm.back()]);
    }
    auto d = dims();
    return LabeledTensor(std::move(legs), dense::permute(data_, d, perm));
  }

  LabeledTensor relabeled(std::span<const LegId> ids) const {
    LabeledTensor t = *this;
    for (std::size_t a = 0; a < ids.size(); ++a) t.legs_[a].id = ids[a];
    return t;
  }

  LabeledTensor conjugated() const {
    LabeledTensor t = *this;
    for (auto& x : t.data_) x = std::conj(x);
    return t;
  }

  LabeledTensor scaled(cplx s) const {
    LabeledTensor t = *this;
    for (auto& x : t.data_) x *= s;
    return t;
  }

  /// Applies `m` to the axis of leg `id` (new[x] = sum_y m(x, y) old[y]).
  LabeledTensor transformed(LegId id, const Eigen::MatrixXcd& m) const {
    LabeledTensor t = *this;
    auto d = dims();
    t.data_ = dense::apply_to_axis(data_, d, axis(id), m);
    return t;
  }

  void set_leg(std::size_t a, Leg leg) { legs_[a] = leg; }

 private:
  std::vector<Leg> legs_;
  std::vector<cplx> data_;
};

inline LabeledTensor outer(const LabeledTensor& a, const LabeledTensor& b) {
  std::vector<Leg> legs = a.legs();
  legs.insert(legs.end(), b.legs().begin(), b.legs().end());
  std::vector<cplx> data;
  data.reserve(a.size() * b.size());
  for (auto x : a.data())
    for (auto y : b.data()) data.push_back(x * y);
  return LabeledTensor(std::move(legs), std::move(data));
}

inline double max_abs_diff(const LabeledTensor& a, const LabeledTensor& b) {
  std::vector<LegId> order;
  for (const auto& l : a.legs()) order.push_back(l.id);
  auto bp = b.permuted(order);
  return dense::max_abs_diff(a.data(), bp.data());
}

}  // namespace spinnet
