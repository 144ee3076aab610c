#pragma once

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "spinnet/averaging/diffeo.hpp"
#include "spinnet/io/document.hpp"
#include "spinnet/section4/geometry.hpp"

namespace spinnet::cli {

using io::json;

enum ExitCode : int { kOk = 0, kValidation = 2, kTolerance = 3 };

struct CommandResult {
  json report;
  int exit_code = kOk;
};

inline json complex_json(cplx z) { return {{"re", z.real()}, {"im", z.imag()}}; }

/// Seed from SPINNET_SEED when set, otherwise `fallback`.
inline std::uint64_t default_seed(std::uint64_t fallback = 0) {
  const char* env = std::getenv("SPINNET_SEED");
  if (!env || !*env) return fallback;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(env, &end, 10);
  if (*end != '\0') throw ValidationError("SPINNET_SEED", "not an unsigned integer");
  return v;
}

inline json read_json_file(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw ValidationError(file, "cannot open file");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError(file, std::string("malformed JSON: ") + e.what());
  }
}

/// Evaluates a network; without a holonomy file every segment carries the
/// identity.
inline CommandResult cmd_eval(const std::string& file, const std::optional<std::string>& holonomy_file) {
  io::DocumentReader reader;
  const SpinNetwork n = reader.read_file(file);
  HolonomyAssignment h;
  if (holonomy_file) {
    try {
      h = io::read_holonomies(read_json_file(*holonomy_file), *n.registry);
    } catch (const ValidationError& e) {
      throw ValidationError(*holonomy_file, e.what());
    }
  } else {
    for (SegmentId s : n.graph().segments) h.set(s, GroupElement::identity());
  }
  return {complex_json(evaluate(n, h))};
}

inline CommandResult cmd_ip(const std::string& file_a, const std::string& file_b, std::size_t mc_samples,
                            std::uint64_t seed) {
  io::DocumentReader reader;
  const SpinNetwork a = reader.read_file(file_a), b = reader.read_file(file_b);
  if (mc_samples == 0) {
    const auto r = exact_inner_product_detailed(a, b);
    json out = complex_json(r.value);
    out["structural_zero"] = r.structural_zero;
    return {out};
  }
  const McEstimate m = mc_inner_product(a, b, mc_samples, seed);
  json out = complex_json(m.mean);
  out["stderr"] = m.stderr();
  out["samples"] = m.samples;
  out["seed"] = seed;
  return {out};
}

inline CommandResult cmd_dip(const std::string& file_a, const std::string& file_b, bool preserving_only) {
  io::DocumentReader reader;
  const SpinNetwork a = reader.read_file(file_a), b = reader.read_file(file_b);
  const auto r = averaged_inner_product_detailed(a, b, {preserving_only});
  json out = complex_json(r.value);
  out["correspondences"] = r.correspondences;
  out["orientation_preserving_only"] = preserving_only;
  return {out};
}

/// Gram matrix of the exact (or averaged) inner product over the given
/// documents, as rows of [re, im] pairs.
inline CommandResult cmd_gram(const std::vector<std::string>& files, bool averaged, bool preserving_only) {
  io::DocumentReader reader;
  std::vector<SpinNetwork> nets;
  for (const auto& f : files) nets.push_back(reader.read_file(f));
  json rows = json::array();
  for (const auto& a : nets) {
    json row = json::array();
    for (const auto& b : nets)
      row.push_back(io::complex_pair(averaged ? averaged_inner_product(a, b, {preserving_only})
                                              : exact_inner_product(a, b)));
    rows.push_back(row);
  }
  return {{{"averaged", averaged}, {"matrix", rows}}};
}

/// Spin labels such as "1/2", "1", "3/2" or "0.5".
inline Spin parse_spin(const std::string& s) {
  const std::string path = "--spins";
  try {
    std::size_t used = 0;
    if (auto slash = s.find('/'); slash != std::string::npos) {
      if (s.substr(slash + 1) != "2") throw ValidationError(path, "spin '" + s + "' must be an integer or half-integer");
      const int twice = std::stoi(s.substr(0, slash), &used);
      if (used != slash) throw std::invalid_argument(s);
      return Spin(twice);
    }
    const double j = std::stod(s, &used);
    if (used != s.size() || j * 2 != std::floor(j * 2)) throw std::invalid_argument(s);
    return Spin(static_cast<int>(j * 2));
  } catch (const std::logic_error&) {
    throw ValidationError(path, "cannot read spin '" + s + "'");
  }
}

inline CommandResult cmd_haar_projector(const std::vector<std::string>& spin_labels) {
  if (spin_labels.empty()) throw ValidationError("--spins", "need at least one spin");
  std::vector<GroupFactor> factors;
  json spins = json::array();
  std::uint64_t leg = 0;
  for (const auto& label : spin_labels) {
    const Spin j = parse_spin(label);
    if (j.twice_j < 0 || j.twice_j > kMaxTwiceJ)
      throw ValidationError("--spins", "spin '" + label + "' outside the supported range");
    spins.push_back(j.twice_j);
    factors.push_back({0, j, false, false, LegId{leg}, LegId{leg + 1}});
    leg += 2;
  }
  const LabeledTensor p = haar_project(factors);
  const auto n = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(p.data().size()))));
  json rows = json::array();
  cplx trace{};
  for (std::size_t r = 0; r < n; ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < n; ++c) row.push_back(io::complex_pair(p.data()[r * n + c]));
    trace += p.data()[r * n + r];
    rows.push_back(row);
  }
  return {{{"twice_j", spins}, {"dimension", n}, {"rank", std::llround(trace.real())}, {"matrix", rows}}};
}

struct Section4Options {
  int truncation = 2;
  int i0 = 1;
  std::string which = "obs1";
  std::optional<std::string> emit_curves;
};

inline CommandResult cmd_section4(const Section4Options& o) {
  if (o.truncation < 1 || o.truncation > 64) throw ValidationError("--truncation", "must lie in [1, 64]");
  CommandResult res;
  json& out = res.report;
  out["truncation"] = o.truncation;
  if (o.which == "obs1") {
    const auto r = blips::observation_one(o.truncation, o.i0);
    out["which"] = "obs1";
    out["i0"] = o.i0;
    out["value"] = complex_json(r.value);
    out["value_truncation_plus_2"] = complex_json(r.value_extended);
    out["engine_value"] = complex_json(r.engine_value);
    out["psi_norm2"] = r.psi_norm2.real();
    out["phi_norm2"] = r.phi_norm2.real();
    out["stability_gap"] = r.stability_gap;
    out["nonzero"] = r.nonzero;
    out["stable"] = r.stable;
    if (!r.nonzero || !r.stable) res.exit_code = kTolerance;
  } else if (o.which == "obs2") {
    out["which"] = "obs2";
    json list = json::array();
    bool ok = true;
    for (int i = -o.truncation; i < o.truncation; ++i) {
      const auto r = blips::observation_two(o.truncation, i);
      list.push_back({{"i", i}, {"value", complex_json(r.value)}, {"distance2", r.distance2},
                      {"nonzero", r.nonzero}, {"distinct", r.distinct}});
      ok = ok && r.nonzero && r.distinct;
    }
    out["translates"] = list;
    if (!ok) res.exit_code = kTolerance;
  } else {
    throw ValidationError("--which", "expected obs1 or obs2");
  }
  if (o.emit_curves) {
    const auto g = blips::curve_geometry(o.truncation);
    std::ofstream csv(*o.emit_curves);
    if (!csv) throw ValidationError(*o.emit_curves, "cannot write file");
    blips::write_curves_csv(g, csv);
    out["curves"] = {{"file", *o.emit_curves},
                     {"disjoint", g.disjoint()},
                     {"compared_samples", g.compared_samples},
                     {"unresolved_samples", g.unresolved_samples}};
  }
  return res;
}

}  // namespace spinnet::cli
