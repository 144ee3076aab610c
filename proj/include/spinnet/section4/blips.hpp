#pragma once

#include <algorithm>
#include <array>
#include <memory>
#include <string>
#include <vector>

#include "spinnet/state/inner_product.hpp"
#include "spinnet/tensor/haar.hpp"

namespace spinnet::blips {

/// Points x_{-N}..x_N and, for each -N <= i < N, the two blips b{i}+ and
/// b{i}- from x_i to x_{i+1}.
class BlipAlphabet {
 public:
  explicit BlipAlphabet(int truncation) : n_(truncation) {
    if (truncation < 1) throw ValidationError("truncation", "truncation must be at least 1");
    auto reg = std::make_shared<SegmentRegistry>();
    for (int i = -n_; i <= n_; ++i) reg->add_point("x" + std::to_string(i));
    for (int i = -n_; i < n_; ++i)
      for (bool plus : {true, false})
        reg->add_segment("b" + std::to_string(i) + (plus ? "+" : "-"), point(i), point(i + 1));
    registry_ = std::move(reg);
  }

  int truncation() const { return n_; }
  const RegistryPtr& registry() const { return registry_; }
  PointId point(int i) const { return i + n_; }
  SegmentId segment(int i, bool plus) const { return 2 * (i + n_) + (plus ? 0 : 1); }
  bool contains(int i) const { return i >= -n_ && i < n_; }

 private:
  int n_;
  RegistryPtr registry_;
};

/// Sign choice at every blip index, stored for -N <= i < N.
class CurveWord {
 public:
  CurveWord() = default;
  CurveWord(int truncation, std::vector<bool> plus) : n_(truncation), plus_(std::move(plus)) {}

  static CurveWord from_rule(int truncation, bool (*rule)(int)) {
    std::vector<bool> p;
    for (int i = -truncation; i < truncation; ++i) p.push_back(rule(i));
    return {truncation, std::move(p)};
  }

  int truncation() const { return n_; }
  bool plus(int i) const { return plus_.at(static_cast<std::size_t>(i + n_)); }
  void set(int i, bool plus) { plus_.at(static_cast<std::size_t>(i + n_)) = plus; }

  /// "+" and "-" in ascending i.
  std::string signs() const {
    std::string s;
    for (bool p : plus_) s += p ? '+' : '-';
    return s;
  }

  Word word(const BlipAlphabet& a) const {
    Word w;
    for (int i = -n_; i < n_; ++i) w.push_back({a.segment(i, plus(i)), false});
    return w;
  }

  friend bool operator==(const CurveWord&, const CurveWord&) = default;

 private:
  int n_ = 0;
  std::vector<bool> plus_;
};

using Curves = std::array<CurveWord, 4>;

inline bool is_even(int i) { return i % 2 == 0; }

/// c1 all plus, c2 all minus, c3 plus at even i, c4 plus at odd i.
inline Curves tassel_curves(int truncation) {
  return {CurveWord::from_rule(truncation, [](int) { return true; }),
          CurveWord::from_rule(truncation, [](int) { return false; }),
          CurveWord::from_rule(truncation, [](int i) { return is_even(i); }),
          CurveWord::from_rule(truncation, [](int i) { return !is_even(i); })};
}

/// Singlet of (c1, c2) tensored with the singlet of (c3, c4), on four legs
/// of one direction.
inline Intertwiner endpoint_intertwiner(Direction dir) {
  const Spin h = Spin::half();
  const Intertwiner pair = intertwiner_basis({{h, dir}, {h, dir}}).at(0);
  Intertwiner t{{{h, dir}, {h, dir}, {h, dir}, {h, dir}}, {}};
  for (auto x : pair.components)
    for (auto y : pair.components) t.components.push_back(x * y);
  return t;
}

/// The state of four spin-1/2 curves from x_{-N} to x_N along `curves`.
inline SpinNetwork curve_state(const BlipAlphabet& a, const Curves& curves) {
  const int n = a.truncation();
  SpinNetwork s{a.registry(), {}, {}};
  for (std::size_t k = 0; k < 4; ++k)
    s.edges.push_back({"c" + std::to_string(k + 1), curves[k].word(a), a.point(-n), a.point(n), Spin::half()});
  s.vertices[a.point(-n)] = endpoint_intertwiner(Direction::out);
  s.vertices[a.point(n)] = endpoint_intertwiner(Direction::in);
  return s;
}

struct Tassel {
  BlipAlphabet alphabet;
  Curves curves;
  SpinNetwork psi;
};

inline Tassel build_tassel(int truncation) {
  BlipAlphabet a(truncation);
  Curves c = tassel_curves(truncation);
  SpinNetwork psi = curve_state(a, c);
  return {std::move(a), std::move(c), std::move(psi)};
}

/// c2 and c3 take the plus blip at the odd index i0.
inline Curves phi_curves(int truncation, int i0) {
  if (i0 % 2 == 0) throw ValidationError("i0", "i0 must be odd");
  if (i0 < -truncation || i0 >= truncation)
    throw ValidationError("i0", "i0 must lie in [-N, N)");
  Curves c = tassel_curves(truncation);
  c[1].set(i0, true);
  c[2].set(i0, true);
  return c;
}

inline SpinNetwork build_phi(const BlipAlphabet& a, int i0) {
  return curve_state(a, phi_curves(a.truncation(), i0));
}

/// g_i: every curve switches blip at index i.
inline Curves swap_at(Curves c, int i) {
  for (auto& w : c) w.set(i, !w.plus(i));
  return c;
}

/// <state(a), state(b)> by a transfer matrix over ascending blip index: an
/// operator on the eight curve slots (four conjugated, four plain) starting
/// from the source intertwiners, hit by the Haar projector of each blip, and
/// closed with the target intertwiners.
inline cplx transfer_inner_product(int truncation, const Curves& a, const Curves& b) {
  const std::vector<int> dims(8, 2);
  const Intertwiner src = endpoint_intertwiner(Direction::out), tgt = endpoint_intertwiner(Direction::in);
  std::vector<cplx> x;
  for (auto u : src.components)
    for (auto v : src.components) x.push_back(std::conj(u) * v);

  for (int i = -truncation; i < truncation; ++i) {
    for (bool plus : {true, false}) {
      std::vector<GroupFactor> factors;
      std::vector<int> slots;
      for (int k = 0; k < 8; ++k) {
        const Curves& side = k < 4 ? a : b;
        if (side[static_cast<std::size_t>(k % 4)].plus(i) != plus) continue;
        slots.push_back(k);
        factors.push_back({0, Spin::half(), k < 4, false, LegId{static_cast<std::uint64_t>(2 * k)},
                           LegId{static_cast<std::uint64_t>(2 * k + 1)}});
      }
      if (factors.empty()) continue;
      const LabeledTensor p = haar_project(factors);
      // Move the blip's slots to the front, apply P, and move them back.
      std::vector<int> perm = slots;
      for (int k = 0; k < 8; ++k)
        if (std::find(slots.begin(), slots.end(), k) == slots.end()) perm.push_back(k);
      std::vector<int> pdims;
      for (int k : perm) pdims.push_back(dims[static_cast<std::size_t>(k)]);
      std::vector<cplx> moved = dense::permute(x, dims, perm);
      const std::size_t m = std::size_t{1} << slots.size(), rest = moved.size() / m;
      std::vector<cplx> next(moved.size());
      for (std::size_t r = 0; r < m; ++r)
        for (std::size_t c = 0; c < m; ++c) {
          const cplx pv = p.data()[r * m + c];
          if (pv == cplx{}) continue;
          for (std::size_t t = 0; t < rest; ++t) next[r * rest + t] += pv * moved[c * rest + t];
        }
      std::vector<int> inverse(8);
      for (int k = 0; k < 8; ++k) inverse[static_cast<std::size_t>(perm[static_cast<std::size_t>(k)])] = k;
      x = dense::permute(next, pdims, inverse);
    }
  }
  cplx total{};
  std::size_t idx = 0;
  for (auto u : tgt.components)
    for (auto v : tgt.components) total += std::conj(u) * v * x[idx++];
  return total;
}

struct ObservationOne {
  int truncation = 0;
  int i0 = 0;
  cplx value{};                  // <Psi, Phi> at N
  cplx value_extended{};         // <Psi, Phi> at N + 2
  cplx engine_value{};           // same at N from the generic contraction engine
  cplx psi_norm2{};
  cplx phi_norm2{};
  double stability_gap = 0.0;    // |value - value_extended|
  bool nonzero = false;
  bool stable = false;
};

inline ObservationOne observation_one(int truncation, int i0, double stability_tolerance = 1e-9) {
  ObservationOne r;
  r.truncation = truncation;
  r.i0 = i0;
  const BlipAlphabet a(truncation);
  const Curves psi = tassel_curves(truncation), phi = phi_curves(truncation, i0);
  r.value = transfer_inner_product(truncation, psi, phi);
  r.value_extended = transfer_inner_product(truncation + 2, tassel_curves(truncation + 2), phi_curves(truncation + 2, i0));
  r.engine_value = exact_inner_product(curve_state(a, psi), curve_state(a, phi));
  r.psi_norm2 = transfer_inner_product(truncation, psi, psi);
  r.phi_norm2 = transfer_inner_product(truncation, phi, phi);
  r.stability_gap = std::abs(r.value - r.value_extended);
  r.nonzero = std::abs(r.value) > 1e-6;
  r.stable = r.stability_gap <= stability_tolerance;
  return r;
}

struct ObservationTwo {
  int i = 0;
  cplx value{};          // <Psi, g_i Psi>
  double distance2 = 0;  // ||Psi - g_i Psi||^2
  bool nonzero = false;
  bool distinct = false;
};

inline ObservationTwo observation_two(int truncation, int i) {
  const BlipAlphabet a(truncation);
  if (!a.contains(i)) throw ValidationError("i", "blip index outside [-N, N)");
  const Curves psi = tassel_curves(truncation), moved = swap_at(psi, i);
  ObservationTwo r;
  r.i = i;
  r.value = transfer_inner_product(truncation, psi, moved);
  const cplx pp = transfer_inner_product(truncation, psi, psi);
  const cplx mm = transfer_inner_product(truncation, moved, moved);
  r.distance2 = (pp + mm - 2.0 * r.value.real()).real();
  r.nonzero = std::abs(r.value) > 1e-6;
  r.distinct = r.distance2 > 1e-6;
  return r;
}

}  // namespace spinnet::blips
