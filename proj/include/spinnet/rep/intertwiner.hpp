#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

#include "spinnet/rep/clebsch_gordan.hpp"
#include "spinnet/rep/group_element.hpp"
#include "spinnet/rep/wigner.hpp"
#include "spinnet/tensor/dense.hpp"

namespace spinnet {

/// `out` legs transform with D(g), `in` legs with D(g)^{-1} acting from the
/// right (equivalently conj(D(g)) acting on the index).
enum class Direction { in, out };

struct IntertwinerLeg {
  Spin spin;
  Direction direction = Direction::in;
  friend auto operator<=>(const IntertwinerLeg&, const IntertwinerLeg&) = default;
};

/// Dense components of an intertwiner, one axis per leg in the listed order.
struct Intertwiner {
  std::vector<IntertwinerLeg> legs;
  std::vector<cplx> components;

  std::vector<int> dims() const {
    std::vector<int> d;
    d.reserve(legs.size());
    for (const auto& l : legs) d.push_back(l.spin.dim());
    return d;
  }

  friend bool operator==(const Intertwiner&, const Intertwiner&) = default;
};

/// Hilbert-Schmidt inner product, antilinear in the first argument.
inline cplx hs_inner(const Intertwiner& a, const Intertwiner& b) {
  cplx s{};
  for (std::size_t i = 0; i < a.components.size(); ++i) s += std::conj(a.components[i]) * b.components[i];
  return s;
}

/// Acts with g on every leg: D(g) on out legs, conj(D(g)) on in legs.
inline std::vector<cplx> act(const Intertwiner& t, const GroupElement& g) {
  auto dims = t.dims();
  std::vector<cplx> data = t.components;
  for (std::size_t a = 0; a < t.legs.size(); ++a) {
    Eigen::MatrixXcd d = wigner_matrix(t.legs[a].spin, g);
    if (t.legs[a].direction == Direction::in) d = d.conjugate().eval();
    data = dense::apply_to_axis(data, dims, a, d);
  }
  return data;
}

inline double equivariance_residual(const Intertwiner& t, const GroupElement& g) {
  return dense::max_abs_diff(act(t, g), t.components);
}

namespace detail {

// Left-comb coupling of ket legs: each returned column is an invariant vector
// of the full tensor product, labeled by one admissible intermediate sequence.
inline std::vector<std::vector<cplx>> invariant_vectors(const std::vector<Spin>& spins) {
  std::vector<std::vector<cplx>> result;
  if (spins.empty()) {
    result.push_back({cplx{1.0}});
    return result;
  }
  std::vector<int> remaining(spins.size() + 1, 0);
  for (std::size_t i = spins.size(); i-- > 0;) remaining[i] = remaining[i + 1] + spins[i].twice_j;

  std::function<void(std::size_t, const Eigen::MatrixXcd&, Spin)> recurse =
      [&](std::size_t next, const Eigen::MatrixXcd& t, Spin total) {
        if (total.twice_j > remaining[next]) return;
        if (next == spins.size()) {
          if (total.twice_j == 0)
            result.emplace_back(t.data(), t.data() + t.size());
          return;
        }
        const Spin j = spins[next];
        const Eigen::Index rows = t.rows(), dJ = t.cols(), dj = j.dim();
        for (int tj = std::abs(total.twice_j - j.twice_j); tj <= total.twice_j + j.twice_j; tj += 2) {
          const Spin coupled(tj);
          Eigen::MatrixXd cg = clebsch_gordan(total, j, coupled);
          Eigen::MatrixXcd grown = Eigen::MatrixXcd::Zero(rows * dj, coupled.dim());
          for (Eigen::Index r = 0; r < rows; ++r)
            for (Eigen::Index k = 0; k < dj; ++k)
              for (Eigen::Index K = 0; K < dJ; ++K) {
                const cplx v = t(r, K);
                if (v == cplx{}) continue;
                grown.row(r * dj + k) += v * cg.row(K * dj + k);
              }
          recurse(next + 1, grown, coupled);
        }
      };
  Eigen::MatrixXcd start = Eigen::MatrixXcd::Identity(spins[0].dim(), spins[0].dim());
  recurse(1, start, spins[0]);
  return result;
}

}  // namespace detail

/// Orthonormal basis of the intertwiners on `legs`, from left-comb binary
/// coupling over admissible intermediate spins. Empty when the space is zero.
inline std::vector<Intertwiner> intertwiner_basis(const std::vector<IntertwinerLeg>& legs) {
  using Cache = std::map<std::vector<IntertwinerLeg>, std::shared_ptr<const std::vector<Intertwiner>>>;
  static Cache cache;
  static std::mutex mutex;
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(legs); it != cache.end()) return *it->second;
  }

  std::vector<Spin> spins;
  for (const auto& l : legs) {
    require_valid(l.spin);
    spins.push_back(l.spin);
  }
  std::vector<int> dims;
  for (auto s : spins) dims.push_back(s.dim());

  auto basis = std::make_shared<std::vector<Intertwiner>>();
  for (auto& v : detail::invariant_vectors(spins)) {
    // Ket-form invariant vector; in legs are dualized with C_j.
    for (std::size_t a = 0; a < legs.size(); ++a)
      if (legs[a].direction == Direction::in) v = dense::apply_to_axis(v, dims, a, epsilon(legs[a].spin));
    basis->push_back({legs, std::move(v)});
  }

  std::lock_guard lock(mutex);
  cache.emplace(legs, basis);
  return *basis;
}

/// The canonical bivalent intertwiner between two legs of equal spin: the
/// identity for an (in, out) pair and the conjugator C_j for two legs of the
/// same direction. Not normalized.
inline Intertwiner canonical_bivalent(const IntertwinerLeg& first, const IntertwinerLeg& second) {
  if (first.spin != second.spin)
    throw ValidationError("", "bivalent intertwiner between unequal spins " + to_string(first.spin) +
                                  " and " + to_string(second.spin));
  const int d = first.spin.dim();
  Eigen::MatrixXcd m = first.direction == second.direction ? epsilon(first.spin)
                                                           : Eigen::MatrixXcd::Identity(d, d);
  Intertwiner t{{first, second}, std::vector<cplx>(static_cast<std::size_t>(d * d))};
  for (int x = 0; x < d; ++x)
    for (int y = 0; y < d; ++y) t.components[static_cast<std::size_t>(x * d + y)] = m(x, y);
  return t;
}

}  // namespace spinnet
