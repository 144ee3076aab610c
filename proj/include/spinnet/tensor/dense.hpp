#pragma once

#include <cstddef>
#include <functional>
#include <numeric>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "spinnet/spin.hpp"

namespace spinnet::dense {

// Row-major dense tensors: the first axis varies slowest.

inline std::size_t volume(std::span<const int> dims) {
  return std::accumulate(dims.begin(), dims.end(), std::size_t{1},
                         [](std::size_t a, int d) { return a * static_cast<std::size_t>(d); });
}

inline std::vector<std::size_t> strides(std::span<const int> dims) {
  std::vector<std::size_t> s(dims.size(), 1);
  for (std::size_t i = dims.size(); i-- > 1;) s[i - 1] = s[i] * static_cast<std::size_t>(dims[i]);
  return s;
}

/// Visits every multi-index in row-major order.
inline void for_each_index(std::span<const int> dims,
                           const std::function<void(std::span<const int>)>& f) {
  std::vector<int> idx(dims.size(), 0);
  std::size_t n = volume(dims);
  for (std::size_t flat = 0; flat < n; ++flat) {
    f(idx);
    for (std::size_t a = dims.size(); a-- > 0;) {
      if (++idx[a] < dims[a]) break;
      idx[a] = 0;
    }
  }
}

/// out[..x..] = sum_y m(x, y) in[..y..] along `axis`.
inline std::vector<cplx> apply_to_axis(std::span<const cplx> data, std::span<const int> dims,
                                       std::size_t axis, const Eigen::MatrixXcd& m) {
  const std::size_t d = static_cast<std::size_t>(dims[axis]);
  std::size_t inner = 1;
  for (std::size_t a = axis + 1; a < dims.size(); ++a) inner *= static_cast<std::size_t>(dims[a]);
  const std::size_t outer = data.size() / (d * inner);
  std::vector<cplx> out(data.size(), cplx{});
  for (std::size_t o = 0; o < outer; ++o)
    for (std::size_t x = 0; x < d; ++x)
      for (std::size_t y = 0; y < d; ++y) {
        const cplx c = m(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y));
        if (c == cplx{}) continue;
        const cplx* src = data.data() + (o * d + y) * inner;
        cplx* dst = out.data() + (o * d + x) * inner;
        for (std::size_t i = 0; i < inner; ++i) dst[i] += c * src[i];
      }
  return out;
}

/// Axis permutation: result axis a is input axis perm[a].
inline std::vector<cplx> permute(std::span<const cplx> data, std::span<const int> dims,
                                 std::span<const int> perm) {
  std::vector<int> out_dims(perm.size());
  for (std::size_t a = 0; a < perm.size(); ++a) out_dims[a] = dims[perm[a]];
  auto in_strides = strides(dims);
  std::vector<cplx> out(data.size());
  std::size_t flat = 0;
  for_each_index(out_dims, [&](std::span<const int> idx) {
    std::size_t src = 0;
    for (std::size_t a = 0; a < perm.size(); ++a) src += in_strides[perm[a]] * idx[a];
    out[flat++] = data[src];
  });
  return out;
}

inline double norm2(std::span<const cplx> v) {
  double s = 0.0;
  for (auto x : v) s += std::norm(x);
  return s;
}

inline double max_abs_diff(std::span<const cplx> a, std::span<const cplx> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace spinnet::dense
