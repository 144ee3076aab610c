#pragma once

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "spinnet/section4/blips.hpp"

namespace spinnet::blips {

/// Bump on [0, 1] with peak 1 at t = 1/2, vanishing with all derivatives at
/// the ends.
inline double bump(double t) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  return std::exp(4.0 - 1.0 / (t * (1.0 - t)));
}

/// Blip junction abscissa; x_0 = 1/2 and x_{+-i} accumulate at 1 and 0.
inline double blip_x(int i) {
  const double s = i > 0 ? 1.0 : (i < 0 ? -1.0 : 0.0);
  return 0.5 * (1.0 + s * (1.0 - std::ldexp(1.0, -std::abs(i))));
}

/// Height 2^{-4^{|i|}}; zero once it underflows.
inline double blip_amplitude(int i) {
  const double e = std::pow(4.0, std::abs(i));
  return e > 1100.0 ? 0.0 : std::ldexp(1.0, -static_cast<int>(e));
}

struct CurvePoint {
  double x = 0, y = 0;
};

struct CurveGeometry {
  std::string id;
  std::vector<CurvePoint> points;
};

struct GeometryReport {
  std::vector<CurveGeometry> curves;
  std::size_t compared_samples = 0;    // interior samples on blips two curves do not share
  std::size_t unresolved_samples = 0;  // of those, samples where the heights coincide in double precision
  std::size_t crossings = 0;           // samples where the two heights have the same nonzero sign
  bool disjoint() const { return crossings == 0; }
};

/// Samples each curve with `per_blip` intervals per blip, plus the flat ends
/// at (0, 0) and (1, 0), and scans pairs of curves for contact away from blip
/// junctions.
inline GeometryReport curve_geometry(int truncation, int per_blip = 32) {
  if (per_blip < 2) throw ValidationError("per_blip", "need at least two samples per blip");
  const Curves curves = tassel_curves(truncation);
  GeometryReport r;
  auto height = [&](const CurveWord& w, int i, int k) {
    const double t = static_cast<double>(k) / per_blip;
    return (w.plus(i) ? 1.0 : -1.0) * blip_amplitude(i) * bump(t);
  };
  for (std::size_t c = 0; c < 4; ++c) {
    CurveGeometry g{"c" + std::to_string(c + 1), {{0.0, 0.0}}};
    for (int i = -truncation; i < truncation; ++i) {
      const double x0 = blip_x(i), x1 = blip_x(i + 1);
      for (int k = 0; k < per_blip; ++k)
        g.points.push_back({x0 + (x1 - x0) * k / per_blip, height(curves[c], i, k)});
    }
    g.points.push_back({blip_x(truncation), 0.0});
    g.points.push_back({1.0, 0.0});
    r.curves.push_back(std::move(g));
  }
  for (std::size_t a = 0; a < 4; ++a)
    for (std::size_t b = a + 1; b < 4; ++b)
      for (int i = -truncation; i < truncation; ++i) {
        if (curves[a].plus(i) == curves[b].plus(i)) continue;
        for (int k = 1; k < per_blip; ++k) {
          const double ya = height(curves[a], i, k), yb = height(curves[b], i, k);
          ++r.compared_samples;
          if (ya == yb) ++r.unresolved_samples;
          else if (ya * yb > 0.0) ++r.crossings;
        }
      }
  return r;
}

inline void write_curves_csv(const GeometryReport& r, std::ostream& out) {
  out << "curve_id,x,y\n";
  char buf[96];
  for (const auto& c : r.curves)
    for (const auto& p : c.points) {
      std::snprintf(buf, sizeof buf, "%s,%.17g,%.17g\n", c.id.c_str(), p.x, p.y);
      out << buf;
    }
}

}  // namespace spinnet::blips
