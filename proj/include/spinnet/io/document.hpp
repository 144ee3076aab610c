#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <string_view>

#include <json.hpp>

#include "spinnet/state/evaluate.hpp"

namespace spinnet::io {

using json = nlohmann::json;

namespace detail {

inline const json& member(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) throw ValidationError(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw ValidationError(path, "missing key '" + key + "'");
  return *it;
}

inline std::string string_at(const json& obj, const std::string& key, const std::string& path) {
  const json& v = member(obj, key, path);
  if (!v.is_string()) throw ValidationError(path + "/" + key, "expected a string");
  return v.get<std::string>();
}

inline cplx complex_at(const json& v, const std::string& path) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
    return {v[0].get<double>(), v[1].get<double>()};
  throw ValidationError(path, "expected a complex number [re, im]");
}

inline void flatten_components(const json& v, const std::string& path, std::vector<cplx>& out) {
  if (v.is_number() || (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())) {
    out.push_back(complex_at(v, path));
    return;
  }
  if (!v.is_array()) throw ValidationError(path, "expected nested arrays of [re, im] pairs");
  for (std::size_t i = 0; i < v.size(); ++i) flatten_components(v[i], path + "/" + std::to_string(i), out);
}

}  // namespace detail

/// Reads network documents into one shared registry, so documents that name
/// the same segments can be compared. A segment listed twice must agree on
/// its endpoints.
class DocumentReader {
 public:
  DocumentReader() : registry_(std::make_shared<SegmentRegistry>()) {}

  RegistryPtr registry() const { return registry_; }

  SpinNetwork read(const json& doc) {
    using detail::member;
    using detail::string_at;
    if (!doc.is_object()) throw ValidationError("", "document must be a JSON object");

    if (auto pts = doc.find("points"); pts != doc.end()) {
      if (!pts->is_array()) throw ValidationError("/points", "expected an array of vertex ids");
      for (std::size_t i = 0; i < pts->size(); ++i) {
        if (!(*pts)[i].is_string()) throw ValidationError("/points/" + std::to_string(i), "expected a string");
        registry_->add_point((*pts)[i].get<std::string>());
      }
    }

    const json& segs = member(doc, "segments", "");
    if (!segs.is_array()) throw ValidationError("/segments", "expected an array");
    for (std::size_t i = 0; i < segs.size(); ++i) {
      const std::string path = "/segments/" + std::to_string(i);
      const std::string id = string_at(segs[i], "id", path);
      const std::string src = string_at(segs[i], "source", path), tgt = string_at(segs[i], "target", path);
      if (auto existing = registry_->find_segment(id)) {
        const Segment& s = registry_->segment(*existing);
        if (registry_->point_name(s.source) != src || registry_->point_name(s.target) != tgt)
          throw ValidationError(path, "segment '" + id + "' conflicts with an earlier definition");
        continue;
      }
      registry_->add_segment(id, src, tgt);
    }

    SpinNetwork n{registry_, {}, {}};
    const json& edges = member(doc, "edges", "");
    if (!edges.is_array()) throw ValidationError("/edges", "expected an array");
    for (std::size_t i = 0; i < edges.size(); ++i) {
      const std::string path = "/edges/" + std::to_string(i);
      const json& e = edges[i];
      Edge edge;
      edge.name = string_at(e, "id", path);
      const json& tj = member(e, "twice_j", path);
      if (!tj.is_number_integer() || tj.get<long long>() < 1 || tj.get<long long>() > kMaxTwiceJ)
        throw ValidationError(path + "/twice_j", "edge '" + edge.name + "': twice_j must be an integer in [1, " +
                                                     std::to_string(kMaxTwiceJ) + "]");
      edge.spin = Spin(static_cast<int>(tj.get<long long>()));
      const json& word = member(e, "word", path);
      if (!word.is_array() || word.empty())
        throw ValidationError(path + "/word", "edge '" + edge.name + "': word must be a non-empty array");
      for (std::size_t k = 0; k < word.size(); ++k) {
        const std::string wpath = path + "/word/" + std::to_string(k);
        if (!word[k].is_string()) throw ValidationError(wpath, "expected a segment id");
        std::string ref = word[k].get<std::string>();
        const bool reversed = !ref.empty() && ref.back() == '~';
        if (reversed) ref.pop_back();
        auto id = registry_->find_segment(ref);
        if (!id) throw ValidationError(wpath, "edge '" + edge.name + "': unknown segment '" + ref + "'");
        edge.word.push_back({*id, reversed});
      }
      edge.source = point(string_at(e, "source", path), path + "/source");
      edge.target = point(string_at(e, "target", path), path + "/target");
      n.edges.push_back(std::move(edge));
    }

    const json& ints = member(doc, "intertwiners", "");
    if (!ints.is_object()) throw ValidationError("/intertwiners", "expected an object keyed by vertex id");
    for (const auto& [name, entry] : ints.items()) {
      const std::string path = "/intertwiners/" + name;
      const PointId p = point(name, path);
      const auto legs = expected_legs(n.edges, p);
      const std::string kind = string_at(entry, "kind", path);
      if (kind == "explicit") {
        Intertwiner t{legs, {}};
        detail::flatten_components(member(entry, "components", path), path + "/components", t.components);
        std::size_t expected = 1;
        for (const auto& l : legs) expected *= static_cast<std::size_t>(l.spin.dim());
        if (t.components.size() != expected)
          throw ValidationError(path + "/components", "expected " + std::to_string(expected) + " components, got " +
                                                          std::to_string(t.components.size()));
        n.vertices[p] = std::move(t);
      } else if (kind == "basis") {
        const json& idx = member(entry, "index", path);
        if (!idx.is_number_integer() || idx.get<long long>() < 0)
          throw ValidationError(path + "/index", "expected a non-negative integer");
        const auto basis = intertwiner_basis(legs);
        const auto k = static_cast<std::size_t>(idx.get<long long>());
        if (k >= basis.size())
          throw ValidationError(path + "/index", "basis index " + std::to_string(k) + " out of range (dimension " +
                                                     std::to_string(basis.size()) + ")");
        n.vertices[p] = basis[k];
      } else if (kind == "epsilon") {
        if (legs.size() != 2) throw ValidationError(path, "epsilon needs a bivalent vertex");
        try {
          n.vertices[p] = canonical_bivalent(legs[0], legs[1]);
        } catch (const ValidationError& e) {
          throw ValidationError(path, e.what());
        }
      } else {
        throw ValidationError(path + "/kind", "unknown intertwiner kind '" + kind + "'");
      }
    }
    validate(n);
    return n;
  }

  SpinNetwork read_text(const std::string& text) {
    json doc;
    try {
      doc = json::parse(text);
    } catch (const json::parse_error& e) {
      throw ValidationError("", std::string("malformed JSON: ") + e.what());
    }
    return read(doc);
  }

  SpinNetwork read_file(const std::string& file) {
    std::ifstream in(file);
    if (!in) throw ValidationError(file, "cannot open file");
    std::stringstream ss;
    ss << in.rdbuf();
    try {
      return read_text(ss.str());
    } catch (const ValidationError& e) {
      throw ValidationError(file + ":" + e.path(), reason_of(e));
    }
  }

 private:
  static std::string reason_of(const ValidationError& e) {
    const std::string what = e.what();
    return e.path().empty() ? what : what.substr(e.path().size() + 2);
  }

  PointId point(const std::string& name, const std::string& path) const {
    auto p = registry_->find_point(name);
    if (!p) throw ValidationError(path, "unknown vertex '" + name + "'");
    return *p;
  }

  std::shared_ptr<SegmentRegistry> registry_;
};

inline json complex_pair(cplx z) { return json::array({z.real(), z.imag()}); }

/// The document form of `n`, listing every point and segment of its
/// registry.
inline json to_document(const SpinNetwork& n) {
  const SegmentRegistry& reg = *n.registry;
  json doc;
  doc["points"] = reg.points();
  doc["segments"] = json::array();
  for (const auto& s : reg.segments())
    doc["segments"].push_back(
        {{"id", s.name}, {"source", reg.point_name(s.source)}, {"target", reg.point_name(s.target)}});
  doc["edges"] = json::array();
  for (const auto& e : n.edges) {
    json word = json::array();
    for (const auto& s : e.word) word.push_back(reg.segment(s.id).name + (s.reversed ? "~" : ""));
    doc["edges"].push_back({{"id", e.name},
                            {"word", word},
                            {"source", reg.point_name(e.source)},
                            {"target", reg.point_name(e.target)},
                            {"twice_j", e.spin.twice_j}});
  }
  doc["intertwiners"] = json::object();
  for (const auto& [p, t] : n.vertices) {
    json comps = json::array();
    for (auto z : t.components) comps.push_back(complex_pair(z));
    doc["intertwiners"][reg.point_name(p)] = {{"kind", "explicit"}, {"components", comps}};
  }
  return doc;
}

/// Holonomies as an object mapping segment ids to unit quaternions
/// [w, x, y, z].
inline HolonomyAssignment read_holonomies(const json& doc, const SegmentRegistry& reg) {
  if (!doc.is_object()) throw ValidationError("", "holonomies must be an object keyed by segment id");
  HolonomyAssignment h;
  for (const auto& [name, q] : doc.items()) {
    const std::string path = "/" + name;
    auto id = reg.find_segment(name);
    if (!id) throw ValidationError(path, "unknown segment '" + name + "'");
    if (!q.is_array() || q.size() != 4 || !std::all_of(q.begin(), q.end(), [](const json& v) { return v.is_number(); }))
      throw ValidationError(path, "expected a quaternion [w, x, y, z]");
    GroupElement g{q[0].get<double>(), q[1].get<double>(), q[2].get<double>(), q[3].get<double>()};
    if (!g.is_unit(1e-9)) throw ValidationError(path, "quaternion is not of unit norm");
    h.set(*id, g.normalized());
  }
  return h;
}

/// Serializes with every floating-point number printed to 17 significant
/// digits.
inline void write_json(const json& v, std::string& out, int indent = 2, int depth = 0) {
  const auto pad = [&](int d) {
    if (indent >= 0) out += '\n' + std::string(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (v.type()) {
    case json::value_t::number_float: {
      const double x = v.get<double>();
      if (!std::isfinite(x)) {
        out += "null";
        break;
      }
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", x);
      out += buf;
      if (std::string_view(buf).find_first_of(".eEn") == std::string_view::npos) out += ".0";
      break;
    }
    case json::value_t::array: {
      if (v.empty()) {
        out += "[]";
        break;
      }
      const bool flat = std::all_of(v.begin(), v.end(), [](const json& e) { return e.is_primitive(); });
      out += '[';
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += flat ? ", " : ",";
        if (!flat) pad(depth + 1);
        write_json(v[i], out, indent, depth + 1);
      }
      if (!flat) pad(depth);
      out += ']';
      break;
    }
    case json::value_t::object: {
      if (v.empty()) {
        out += "{}";
        break;
      }
      out += '{';
      bool first = true;
      for (const auto& [k, e] : v.items()) {
        if (!first) out += ',';
        first = false;
        pad(depth + 1);
        out += json(k).dump() + (indent >= 0 ? ": " : ":");
        write_json(e, out, indent, depth + 1);
      }
      pad(depth);
      out += '}';
      break;
    }
    default:
      out += v.dump();
  }
}

inline std::string dump(const json& v, int indent = 2) {
  std::string s;
  write_json(v, s, indent);
  return s;
}

}  // namespace spinnet::io
