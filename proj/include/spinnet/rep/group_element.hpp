#pragma once

#include <cmath>

#include <Eigen/Dense>

#include "spinnet/spin.hpp"

namespace spinnet {

/// SU(2) element stored as a unit quaternion (w, x, y, z). The defining
/// representation is U = w I + i (x sx + y sy + z sz), and the product below is
/// the one for which U(a * b) = U(a) U(b).
struct GroupElement {
  double w = 1.0, x = 0.0, y = 0.0, z = 0.0;

  static constexpr GroupElement identity() { return {}; }

  GroupElement inverse() const { return {w, -x, -y, -z}; }

  double norm2() const { return w * w + x * x + y * y + z * z; }

  bool is_unit(double tol = 1e-12) const { return std::abs(norm2() - 1.0) <= tol; }

  GroupElement normalized() const {
    double n = std::sqrt(norm2());
    return {w / n, x / n, y / n, z / n};
  }

  Eigen::Matrix2cd matrix() const {
    Eigen::Matrix2cd u;
    u << cplx(w, z), cplx(y, x), cplx(-y, x), cplx(w, -z);
    return u;
  }

  friend GroupElement operator*(const GroupElement& a, const GroupElement& b) {
    // w = w1 w2 - v1.v2,  v = w1 v2 + w2 v1 - v1 x v2
    return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
            a.w * b.x + b.w * a.x - (a.y * b.z - a.z * b.y),
            a.w * b.y + b.w * a.y - (a.z * b.x - a.x * b.z),
            a.w * b.z + b.w * a.z - (a.x * b.y - a.y * b.x)};
  }

  friend bool operator==(const GroupElement&, const GroupElement&) = default;
};

}  // namespace spinnet
