#pragma once

// SVG 1.1 picture of Pic_R for Picard rank 2: translated forbidden cones
// q_I + C_I clipped to the viewport, the zonotope outline, immaculate
// classes as points and Imm^∞ directions as boundary arrows.
//
// Geometry stays in exact rationals up to the final formatting step, which
// prints three decimals.

#include <algorithm>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "immaculatum/asymptotics.hpp"
#include "immaculatum/polyhedra.hpp"

namespace immaculatum {

struct PlotInput {
  std::vector<ForbiddenConeData> cones;  // full-dimensional ones are drawn
  Zonotope zonotope;
  std::vector<DivisorClass> immaculate;
  ImmInfinityDescription infinity;
  std::vector<std::pair<Integer, Integer>> box;  // scanned box, two ranges
};

namespace detail {

using Point2 = std::pair<Rational, Rational>;

inline std::string fixed3(const Rational& q) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", q.get_d());
  std::string s = buf;
  return s == "-0.000" ? "0.000" : s;
}

// Sutherland-Hodgman against the axis-aligned box [lo, hi]^2 (per axis).
inline std::vector<Point2> clip_to_box(std::vector<Point2> poly, const Point2& lo, const Point2& hi) {
  // Each edge of the box is a half-plane a*x + b*y >= c.
  const struct {
    int a, b;
    Rational c;
  } planes[] = {{1, 0, lo.first}, {-1, 0, -hi.first}, {0, 1, lo.second}, {0, -1, -hi.second}};
  for (const auto& pl : planes) {
    if (poly.empty()) break;
    auto value = [&](const Point2& p) -> Rational { return pl.a * p.first + pl.b * p.second - pl.c; };
    std::vector<Point2> out;
    for (std::size_t k = 0; k < poly.size(); ++k) {
      const Point2& cur = poly[k];
      const Point2& nxt = poly[(k + 1) % poly.size()];
      const Rational vc = value(cur), vn = value(nxt);
      if (vc >= 0) out.push_back(cur);
      if ((vc >= 0) != (vn >= 0)) {
        const Rational t = vc / (vc - vn);
        out.emplace_back(cur.first + t * (nxt.first - cur.first), cur.second + t * (nxt.second - cur.second));
      }
    }
    poly = std::move(out);
  }
  return poly;
}

// Extreme rays of a full-dimensional strongly convex cone in Q^2, taken as
// the directions along its two facets that lie in the cone.
inline std::pair<RatVector, RatVector> extreme_rays_2d(const Cone& c) {
  std::vector<RatVector> rays;
  for (const auto& f : c.facets) {
    RatVector u{Rational(-f[1]), Rational(f[0])};
    if (!c.contains(u)) u = negated(u);
    rays.push_back(u);
  }
  if (rays.size() != 2) throw std::logic_error("plot: cone in the plane must have two facets");
  return {rays[0], rays[1]};
}

}  // namespace detail

/// Renders the SVG document. Throws std::invalid_argument unless r = 2.
inline std::string emit_plot(const PlotInput& in) {
  using detail::fixed3;
  using detail::Point2;
  if (in.zonotope.dim() != 2 || in.box.size() != 2) throw std::invalid_argument("plot requires Picard rank 2");

  const Point2 lo{Rational(in.box[0].first - 1), Rational(in.box[1].first - 1)};
  const Point2 hi{Rational(in.box[0].second + 1), Rational(in.box[1].second + 1)};
  const Rational width = hi.first - lo.first, height = hi.second - lo.second;
  const Rational scale = 40;  // pixels per unit
  // World (x, y) maps to SVG (x, -y); the viewBox is in scaled units.
  auto sx = [&](const Rational& x) { return fixed3(x * scale); };
  auto sy = [&](const Rational& y) { return fixed3(-y * scale); };
  auto points_attr = [&](const std::vector<Point2>& poly) {
    std::string s;
    for (const auto& p : poly) {
      if (!s.empty()) s += ' ';
      s += sx(p.first) + "," + sy(p.second);
    }
    return s;
  };

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << fixed3(width * scale)
      << "\" height=\"" << fixed3(height * scale) << "\" viewBox=\"" << sx(lo.first) << " " << sy(hi.second) << " "
      << fixed3(width * scale) << " " << fixed3(height * scale) << "\">\n"
      << "<defs><marker id=\"arrow\" markerWidth=\"10\" markerHeight=\"10\" refX=\"8\" refY=\"5\" "
         "orient=\"auto\"><path d=\"M0,0 L10,5 L0,10 z\" fill=\"#b00\"/></marker></defs>\n"
      << "<rect x=\"" << sx(lo.first) << "\" y=\"" << sy(hi.second) << "\" width=\"" << fixed3(width * scale)
      << "\" height=\"" << fixed3(height * scale) << "\" fill=\"white\"/>\n";

  // A cone is drawn as the quadrilateral q, q + R g1, q + R (g1 + g2), q + R g2
  // with R large enough that clipping yields the true intersection.
  Rational reach = 4 * (width + height);
  for (const auto& a : {lo.first, hi.first, lo.second, hi.second}) reach += abs(a) * 4;
  svg << "<g id=\"cones\">\n";
  for (const auto& fc : in.cones) {
    if (!fc.full_dim) continue;
    auto [g1, g2] = detail::extreme_rays_2d(fc.cone);
    auto unit = [&](const RatVector& g) {
      const Rational len = abs(g[0]) + abs(g[1]);
      return RatVector{g[0] * reach / len, g[1] * reach / len};
    };
    g1 = unit(g1);
    g2 = unit(g2);
    const auto& q = fc.q_real.coords;
    std::vector<Point2> quad{{q[0], q[1]},
                             {q[0] + g1[0], q[1] + g1[1]},
                             {q[0] + g1[0] + g2[0], q[1] + g1[1] + g2[1]},
                             {q[0] + g2[0], q[1] + g2[1]}};
    const auto clipped = detail::clip_to_box(quad, lo, hi);
    svg << "<polygon class=\"cone\" data-set=\"" << format_index_set(fc.set) << "\" points=\""
        << points_attr(clipped) << "\" fill=\"#4a7bd0\" fill-opacity=\"0.18\" stroke=\"#4a7bd0\"/>\n";
  }
  svg << "</g>\n";

  // Zonotope vertices in angular order around the center.
  std::vector<RatVector> verts = in.zonotope.vertices;
  const auto& c = in.zonotope.center;
  std::sort(verts.begin(), verts.end(), [&](const RatVector& a, const RatVector& b) {
    const RatVector da{a[0] - c[0], a[1] - c[1]}, db{b[0] - c[0], b[1] - c[1]};
    auto half = [](const RatVector& v) { return (v[1] > 0 || (v[1] == 0 && v[0] > 0)) ? 0 : 1; };
    if (half(da) != half(db)) return half(da) < half(db);
    return da[0] * db[1] - da[1] * db[0] > 0;
  });
  std::vector<Point2> zpoly;
  for (const auto& v : verts) zpoly.emplace_back(v[0], v[1]);
  svg << "<polygon class=\"zonotope\" points=\"" << points_attr(zpoly)
      << "\" fill=\"none\" stroke=\"#2a2\" stroke-width=\"2\"/>\n";

  svg << "<g id=\"immaculate\">\n";
  for (const auto& cls : in.immaculate)
    svg << "<circle class=\"immaculate\" data-class=\"" << format_class(cls) << "\" cx=\""
        << sx(Rational(cls.free[0])) << "\" cy=\"" << sy(Rational(cls.free[1])) << "\" r=\"4\" fill=\"black\"/>\n";
  svg << "</g>\n";

  // One arrow per direction of Imm^∞, from the viewport center to its edge.
  std::vector<std::pair<Direction, std::string>> arrows;
  for (const auto& d : in.infinity.isolated) arrows.emplace_back(d, "isolated");
  for (const auto& a : in.infinity.arcs) {
    arrows.emplace_back(a.from, "arc-end");
    arrows.emplace_back(a.to, "arc-end");
  }
  const Point2 mid{(lo.first + hi.first) / 2, (lo.second + hi.second) / 2};
  svg << "<g id=\"infinity\">\n";
  for (const auto& [dir, kind] : arrows) {
    const RatVector w = dir.rational();
    Rational t = -1;  // largest t keeping mid + t w inside the box
    for (int k = 0; k < 2; ++k) {
      const Rational m = k == 0 ? mid.first : mid.second;
      const Rational l = k == 0 ? lo.first : lo.second;
      const Rational h = k == 0 ? hi.first : hi.second;
      if (w[k] == 0) continue;
      const Rational tk = w[k] > 0 ? (h - m) / w[k] : (l - m) / w[k];
      if (t < 0 || tk < t) t = tk;
    }
    const Point2 tip{mid.first + t * w[0], mid.second + t * w[1]};
    const Point2 tail{mid.first + t * w[0] * Rational(3, 4), mid.second + t * w[1] * Rational(3, 4)};
    svg << "<line class=\"imm-infinity\" data-kind=\"" << kind << "\" data-direction=\"" << format_vector(dir.coords)
        << "\" x1=\"" << sx(tail.first) << "\" y1=\"" << sy(tail.second) << "\" x2=\"" << sx(tip.first) << "\" y2=\""
        << sy(tip.second) << "\" stroke=\"#b00\" stroke-width=\"2\" marker-end=\"url(#arrow)\"/>\n";
  }
  svg << "</g>\n</svg>\n";
  return svg.str();
}

}  // namespace immaculatum
