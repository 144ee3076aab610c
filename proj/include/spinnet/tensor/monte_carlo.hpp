#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <span>
#include <thread>
#include <vector>

#include "spinnet/rep/random.hpp"
#include "spinnet/tensor/haar.hpp"

namespace spinnet {

/// Monte Carlo mean with standard errors of the real and imaginary parts.
struct McEstimate {
  cplx mean{};
  double stderr_re = 0.0;
  double stderr_im = 0.0;
  std::size_t samples = 0;

  /// Standard error of the complex mean, sqrt(E|mean - mu|^2).
  double stderr() const { return std::hypot(stderr_re, stderr_im); }

  double sigmas_from(cplx expected) const {
    double d = std::abs(mean - expected);
    if (d == 0.0) return 0.0;
    return stderr() > 0.0 ? d / stderr() : std::numeric_limits<double>::infinity();
  }

  bool agrees_with(cplx expected, double k_sigma) const {
    return std::abs(mean - expected) <= k_sigma * stderr() + 1e-12;
  }
};

/// Samples per independently seeded chunk. Chunk c draws from
/// CounterRng(seed, c) and chunk sums are reduced in chunk order, so the
/// result is bit-identical for any thread count.
inline constexpr std::size_t kMcChunkSize = 4096;

struct McOptions {
  unsigned threads = 0;  // 0: hardware concurrency
};

/// E[f(g_1, ..., g_n)] for independent Haar-distributed g_i.
/// `f` is called concurrently and must not mutate shared state.
template <class Integrand>
McEstimate mc_expectation(std::size_t n_variables, const Integrand& f, std::size_t n_samples,
                          std::uint64_t seed, McOptions opts = {}) {
  if (n_samples < 2) throw std::invalid_argument("mc_expectation needs at least 2 samples");
  const std::size_t chunks = (n_samples + kMcChunkSize - 1) / kMcChunkSize;
  struct Sums {
    double re = 0, im = 0, re2 = 0, im2 = 0;
  };
  std::vector<Sums> partial(chunks);

  auto run_chunk = [&](std::size_t c) {
    CounterRng rng(seed, c);
    std::vector<GroupElement> g(n_variables);
    Sums s;
    const std::size_t begin = c * kMcChunkSize;
    const std::size_t end = std::min(n_samples, begin + kMcChunkSize);
    for (std::size_t i = begin; i < end; ++i) {
      for (auto& x : g) x = haar_sample(rng);
      const cplx v = f(std::span<const GroupElement>(g));
      s.re += v.real();
      s.im += v.imag();
      s.re2 += v.real() * v.real();
      s.im2 += v.imag() * v.imag();
    }
    partial[c] = s;
  };

  unsigned threads = opts.threads ? opts.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, chunks));
  if (threads <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) run_chunk(c);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t)
      pool.emplace_back([&, t] {
        for (std::size_t c = t; c < chunks; c += threads) run_chunk(c);
      });
    for (auto& th : pool) th.join();
  }

  Sums total;
  for (const auto& s : partial) {
    total.re += s.re;
    total.im += s.im;
    total.re2 += s.re2;
    total.im2 += s.im2;
  }
  const double n = static_cast<double>(n_samples);
  McEstimate est;
  est.samples = n_samples;
  est.mean = {total.re / n, total.im / n};
  auto stderr_of = [&](double sum, double sum2) {
    double var = (sum2 - sum * sum / n) / (n - 1.0);
    return std::sqrt(std::max(var, 0.0) / n);
  };
  est.stderr_re = stderr_of(total.re, total.re2);
  est.stderr_im = stderr_of(total.im, total.im2);
  return est;
}

/// Monte Carlo estimate of the Haar integral of a scalar group network.
inline McEstimate mc_expectation(const GroupNetwork& net, std::size_t n_samples, std::uint64_t seed,
                                 McOptions opts = {}) {
  const auto vars = net.variables();
  std::vector<std::vector<Leg>> shapes;
  for (const auto& t : net.tensors) shapes.push_back(t.legs());
  for (const auto& f : net.factors)
    shapes.push_back({{f.row_leg, f.spin, Variance::ket}, {f.col_leg, f.spin, Variance::bra}});
  const ContractionPlan plan(std::move(shapes), net.pairings);
  if (!plan.output_legs().empty()) throw ContractionError("mc_expectation needs a scalar network");

  std::vector<std::size_t> var_index;
  for (const auto& f : net.factors)
    var_index.push_back(static_cast<std::size_t>(std::lower_bound(vars.begin(), vars.end(), f.variable) - vars.begin()));

  auto integrand = [&](std::span<const GroupElement> g) {
    std::vector<std::vector<cplx>> factor_data;
    factor_data.reserve(net.factors.size());
    for (std::size_t k = 0; k < net.factors.size(); ++k) {
      auto t = factor_tensor(net.factors[k], factor_matrix(net.factors[k], g[var_index[k]]));
      factor_data.emplace_back(t.data().begin(), t.data().end());
    }
    std::vector<std::span<const cplx>> ops;
    for (const auto& t : net.tensors) ops.push_back(t.data());
    for (const auto& d : factor_data) ops.push_back(d);
    return plan.execute(ops)[0];
  };
  return mc_expectation(vars.size(), integrand, n_samples, seed, opts);
}

}  // namespace spinnet
