#pragma once

#include <compare>
#include <complex>
#include <stdexcept>
#include <string>

#ifndef SPINNET_MAX_TWICE_J
#define SPINNET_MAX_TWICE_J 12
#endif

namespace spinnet {

using cplx = std::complex<double>;

/// Largest 2j accepted anywhere in the library.
inline constexpr int kMaxTwiceJ = SPINNET_MAX_TWICE_J;

/// Structural tolerance used by consistency checks (Schur reductions,
/// equivariance, projector comparisons).
inline constexpr double kStructuralTolerance = 1e-9;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input that does not describe a valid object. `path` locates the offending
/// item, e.g. "/edges/2/twice_j".
class ValidationError : public Error {
 public:
  ValidationError(std::string path, const std::string& reason)
      : Error(path.empty() ? reason : path + ": " + reason), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

class AdmissibilityError : public Error {
 public:
  using Error::Error;
};

/// Irreducible SU(2) representation label, stored as 2j.
struct Spin {
  int twice_j = 0;

  constexpr Spin() = default;
  constexpr explicit Spin(int twice) : twice_j(twice) {}

  static constexpr Spin half() { return Spin(1); }
  static constexpr Spin one() { return Spin(2); }

  constexpr int dim() const { return twice_j + 1; }
  constexpr bool is_trivial() const { return twice_j == 0; }
  constexpr double j() const { return 0.5 * twice_j; }

  friend constexpr auto operator<=>(Spin, Spin) = default;
};

inline void require_valid(Spin s) {
  if (s.twice_j < 0 || s.twice_j > kMaxTwiceJ)
    throw std::domain_error("spin 2j=" + std::to_string(s.twice_j) + " outside [0, " +
                            std::to_string(kMaxTwiceJ) + "]");
}

inline std::string to_string(Spin s) {
  return s.twice_j % 2 == 0 ? std::to_string(s.twice_j / 2) : std::to_string(s.twice_j) + "/2";
}

}  // namespace spinnet
