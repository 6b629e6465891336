#pragma once

// Exact polyhedral geometry in Pic_R = Q^r: cones in generator and facet
// form, central hyperplane arrangements, the forbidden cones C_I and the
// zonotope sum_i [-1, 0] E_i.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "immaculatum/exactmath.hpp"
#include "immaculatum/fan.hpp"
#include "immaculatum/homology.hpp"
#include "immaculatum/linear_system.hpp"
#include "immaculatum/picard.hpp"

namespace immaculatum {

/// Polyhedral cone {x : g.x >= 0 for g in facets, h.x = 0 for h in equations}.
/// Facets are primitive integer normals lying in the linear span, sorted
/// lexicographically; `equations` is a basis of the orthogonal complement of
/// the span.
struct Cone {
  std::size_t ambient = 0;
  std::vector<RatVector> generators;
  std::vector<IntVector> facets;
  std::vector<RatVector> equations;
  std::size_t dimension = 0;
  std::size_t lineality_dim = 0;

  bool full_dimensional() const { return dimension == ambient; }

  bool contains(const RatVector& x) const {
    if (x.size() != ambient) throw DimensionError("point dimension does not match cone");
    for (const auto& h : equations)
      if (dot(h, x) != 0) return false;
    for (const auto& g : facets)
      if (dot(x, g) < 0) return false;
    return true;
  }
};

namespace detail {

// Enumerates k-subsets of {0..n-1} in lexicographic order.
inline void for_each_subset(std::size_t n, std::size_t k, const std::function<void(const std::vector<std::size_t>&)>& fn) {
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  if (k > n) return;
  for (;;) {
    fn(idx);
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + (i - 1)) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace detail

/// Facet description of cone(gens). A facet hyperplane of a k-dimensional
/// cone contains k-1 linearly independent generators, so every such
/// candidate normal (taken inside the span) that is one-signed on all
/// generators is a facet, and nothing else is.
inline Cone cone_from_generators(std::vector<RatVector> gens, std::size_t ambient) {
  if (ambient < 1) throw DimensionError("cone ambient dimension must be positive");
  for (const auto& g : gens)
    if (g.size() != ambient) throw DimensionError("generator has wrong dimension");
  gens.erase(std::remove_if(gens.begin(), gens.end(), [](const RatVector& g) { return is_zero(g); }), gens.end());

  Cone cone;
  cone.ambient = ambient;
  cone.generators = gens;
  cone.dimension = rank_of_rows(gens, ambient);
  cone.equations = nullspace_of_rows(gens, ambient);
  const std::size_t k = cone.dimension;
  if (k == 0) return cone;

  std::set<IntVector> normals;
  detail::for_each_subset(gens.size(), k - 1, [&](const std::vector<std::size_t>& pick) {
    std::vector<RatVector> rows = cone.equations;
    for (auto p : pick) rows.push_back(gens[p]);
    auto ns = nullspace_of_rows(rows, ambient);
    if (ns.size() != 1) return;
    const RatVector& h = ns.front();
    int sign = 0;
    for (const auto& g : gens) {
      const int s = sign_of(dot(h, g));
      if (s == 0) continue;
      if (sign == 0) {
        sign = s;
      } else if (s != sign) {
        return;
      }
    }
    if (sign == 0) return;
    IntVector prim = primitive_direction(h);
    if (sign < 0) prim = negated(prim);
    normals.insert(prim);
  });
  cone.facets.assign(normals.begin(), normals.end());

  std::vector<RatVector> all = cone.equations;
  for (const auto& f : cone.facets) all.push_back(to_rational(f));
  cone.lineality_dim = ambient - rank_of_rows(all, ambient);
  return cone;
}

inline bool is_strongly_convex(const Cone& cone) { return cone.lineality_dim == 0; }

/// Membership in the topological interior in Q^r; lower-dimensional cones
/// have empty interior.
inline bool interior_contains(const Cone& cone, const RatVector& x) {
  if (x.size() != cone.ambient) throw DimensionError("point dimension does not match cone");
  if (!cone.full_dimensional()) return false;
  for (const auto& g : cone.facets)
    if (dot(x, g) <= 0) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Central hyperplane arrangements

struct ArrangementCell {
  std::vector<int> signs;  // one of -1, 0, +1 per hyperplane
  RatVector sample;        // a point with exactly these signs
};

/// Every nonempty cell of the central arrangement {h.x = 0}, except the
/// cell containing the origin when that cell is the origin alone. Cells are
/// produced by extending sign vectors one hyperplane at a time in the order
/// 0, +, -, cutting infeasible prefixes with exact LP; the order of the
/// output is therefore deterministic.
inline std::vector<ArrangementCell> arrangement_cells(const std::vector<IntVector>& normals, std::size_t ambient,
                                                      std::size_t max_cells, bool full_dimensional_only = false) {
  std::vector<ArrangementCell> out;
  std::vector<int> signs;
  std::function<void()> extend = [&]() {
    const std::size_t depth = signs.size();
    LinearSystem sys(ambient);
    for (std::size_t j = 0; j < depth; ++j) {
      const RatVector g = to_rational(normals[j]);
      if (signs[j] == 0) sys.add(g, Relation::equal, 0);
      if (signs[j] > 0) sys.add(g, Relation::greater, 0);
      if (signs[j] < 0) sys.add(negated(g), Relation::greater, 0);
    }
    const auto res = lp_feasible(sys);
    if (!std::holds_alternative<Feasible>(res)) return;
    if (depth == normals.size()) {
      RatVector sample = std::get<Feasible>(res).point;
      if (is_zero(sample)) {
        // Only the all-zero sign vector can land here; look for a nonzero
        // point in the common null space.
        std::vector<RatVector> rows;
        for (const auto& g : normals) rows.push_back(to_rational(g));
        auto ns = nullspace_of_rows(rows, ambient);
        if (ns.empty()) return;
        sample = ns.front();
      }
      if (out.size() >= max_cells)
        throw LimitExceededError("arrangement has more than " + std::to_string(max_cells) + " cells");
      out.push_back(ArrangementCell{signs, std::move(sample)});
      return;
    }
    for (int s : {0, 1, -1}) {
      if (s == 0 && full_dimensional_only) continue;
      signs.push_back(s);
      extend();
      signs.pop_back();
    }
  };
  extend();
  return out;
}

/// Primitive normals with first nonzero entry positive, deduplicated and
/// sorted lexicographically.
inline std::vector<IntVector> canonical_hyperplanes(const std::vector<RatVector>& normals) {
  std::set<IntVector> out;
  for (const auto& g : normals)
    if (!is_zero(g)) out.insert(canonical_sign(primitive_direction(g)));
  return {out.begin(), out.end()};
}

// ---------------------------------------------------------------------------
// Forbidden cones

struct ForbiddenConeData {
  IndexSet set;
  DivisorClass q_class;
  RealClass q_real;
  Cone cone;
  bool full_dim = false;
};

/// q_I = -sum_{i in I} E_i and C_I = cone(E_i for i not in I, -E_i for i in I).
inline ForbiddenConeData forbidden_cone(const StackyFan& fan, const PicardData& pic, const IndexSet& subset) {
  const int n = fan.ray_count();
  IntVector indicator(static_cast<std::size_t>(n), Integer(0));
  for (int i : subset) {
    if (i < 0 || i >= n) throw std::out_of_range("ray index out of range");
    indicator[static_cast<std::size_t>(i)] = -1;
  }
  ForbiddenConeData data;
  data.set = subset;
  data.q_class = class_of(pic, indicator);
  data.q_real = real_image(pic, data.q_class);
  std::vector<RatVector> gens;
  for (int i = 0; i < n; ++i) {
    const auto& e = pic.e_real[static_cast<std::size_t>(i)].coords;
    gens.push_back(contains(subset, i) ? negated(e) : e);
  }
  data.cone = cone_from_generators(std::move(gens), pic.rank());
  data.full_dim = data.cone.full_dimensional();
  return data;
}

inline std::vector<ForbiddenConeData> forbidden_cones(const StackyFan& fan, const PicardData& pic,
                                                      const TemptingCatalog& catalog) {
  std::vector<ForbiddenConeData> out;
  for (const auto& e : catalog.entries) out.push_back(forbidden_cone(fan, pic, e.set));
  return out;
}

// ---------------------------------------------------------------------------
// Zonotope

enum class ZonotopeMode { closed, interior, half_open };

struct ZonotopeFacet {
  IntVector normal;  // primitive, canonical sign
  Rational lower;    // lower <= normal.x <= upper on Z
  Rational upper;
};

/// Z = sum_i [-1, 0] E_i together with its H- and V-representations.
struct Zonotope {
  std::vector<RatVector> segments;  // the E_i; segment i is [-1, 0] * segments[i]
  std::vector<ZonotopeFacet> facets;
  std::vector<RatVector> vertices;  // sorted lexicographically
  RatVector center;                 // -1/2 sum E_i

  std::size_t dim() const { return center.size(); }
};

inline Zonotope zonotope(const PicardData& pic) {
  const std::size_t r = pic.rank();
  Zonotope z;
  for (const auto& e : pic.e_real) z.segments.push_back(e.coords);
  z.center.assign(r, Rational(0));
  for (const auto& s : z.segments)
    for (std::size_t k = 0; k < r; ++k) z.center[k] -= s[k] / 2;

  // H-representation: facet normals are normals of hyperplanes spanned by
  // r-1 independent segment directions.
  std::set<IntVector> normals;
  detail::for_each_subset(z.segments.size(), r - 1, [&](const std::vector<std::size_t>& pick) {
    std::vector<RatVector> rows;
    for (auto p : pick) rows.push_back(z.segments[p]);
    auto ns = nullspace_of_rows(rows, r);
    if (ns.size() == 1) normals.insert(canonical_sign(primitive_direction(ns.front())));
  });
  for (const auto& h : normals) {
    ZonotopeFacet f{h, 0, 0};
    for (const auto& s : z.segments) {
      const Rational v = -dot(s, h);  // value at gamma = -1
      if (v < 0) f.lower += v;
      if (v > 0) f.upper += v;
    }
    z.facets.push_back(std::move(f));
  }

  // Vertices: one per full-dimensional cell of the arrangement {E_i^perp};
  // a generic functional w is maximized at -sum_{w.E_i < 0} E_i.
  std::vector<RatVector> seg_normals(z.segments.begin(), z.segments.end());
  const auto hyper = canonical_hyperplanes(seg_normals);
  const auto cells = arrangement_cells(hyper, r, SIZE_MAX, true);
  std::set<RatVector> verts;
  for (const auto& cell : cells) {
    RatVector v(r, Rational(0));
    for (const auto& s : z.segments)
      if (dot(cell.sample, s) < 0)
        for (std::size_t k = 0; k < r; ++k) v[k] -= s[k];
    verts.insert(std::move(v));
  }
  z.vertices.assign(verts.begin(), verts.end());
  return z;
}

/// Closed and open membership use the facet inequalities. Half-open
/// membership solves point = sum gamma_i E_i with -1 < gamma_i <= 0 exactly,
/// since Z^h is not an intersection of half-open half-spaces in general.
inline bool membership(const Zonotope& z, const RatVector& x, ZonotopeMode mode) {
  if (x.size() != z.dim()) throw DimensionError("point dimension does not match zonotope");
  switch (mode) {
    case ZonotopeMode::closed:
    case ZonotopeMode::interior: {
      const bool strict = mode == ZonotopeMode::interior;
      for (const auto& f : z.facets) {
        const Rational v = dot(x, f.normal);
        if (strict ? (v <= f.lower || v >= f.upper) : (v < f.lower || v > f.upper)) return false;
      }
      return true;
    }
    case ZonotopeMode::half_open: {
      const std::size_t n = z.segments.size();
      LinearSystem sys(n);
      for (std::size_t k = 0; k < z.dim(); ++k) {
        RatVector row(n);
        for (std::size_t i = 0; i < n; ++i) row[i] = z.segments[i][k];
        sys.add(std::move(row), Relation::equal, x[k]);
      }
      for (std::size_t i = 0; i < n; ++i) {
        RatVector e(n, Rational(0));
        e[i] = 1;
        sys.add(e, Relation::greater, -1);       // gamma_i > -1
        sys.add(negated(e), Relation::greater_equal, 0);  // gamma_i <= 0
      }
      return is_feasible(sys);
    }
  }
  return false;
}

/// Exact bounding box of Z per free coordinate.
inline std::vector<std::pair<Integer, Integer>> zonotope_box(const Zonotope& z) {
  std::vector<std::pair<Integer, Integer>> box;
  for (std::size_t k = 0; k < z.dim(); ++k) {
    Rational lo = 0, hi = 0;
    for (const auto& s : z.segments) {
      if (s[k] > 0) lo -= s[k];
      if (s[k] < 0) hi -= s[k];
    }
    box.emplace_back(ceil_of(lo), floor_of(hi));
  }
  return box;
}

namespace detail {

inline void for_each_box_point(const std::vector<std::pair<Integer, Integer>>& box,
                               const std::function<void(const IntVector&)>& fn) {
  for (const auto& [lo, hi] : box)
    if (lo > hi) return;
  IntVector x;
  for (const auto& b : box) x.push_back(b.first);
  for (;;) {
    fn(x);
    std::size_t j = box.size();
    for (;;) {
      if (j == 0) return;
      --j;
      if (x[j] < box[j].second) {
        ++x[j];
        for (std::size_t t = j + 1; t < box.size(); ++t) x[t] = box[t].first;
        break;
      }
    }
  }
}

}  // namespace detail

/// Classes whose real image lies in Z (interior or half-open), every torsion
/// twist included, ordered by free coordinates then torsion.
inline std::vector<DivisorClass> zonotope_classes(const PicardData& pic, ZonotopeMode mode) {
  if (mode == ZonotopeMode::closed) throw std::invalid_argument("zonotope_classes expects interior or half_open");
  const Zonotope z = zonotope(pic);
  const auto torsion = pic.torsion_elements();
  std::vector<DivisorClass> out;
  detail::for_each_box_point(zonotope_box(z), [&](const IntVector& p) {
    if (!membership(z, to_rational(p), mode)) return;
    for (const auto& t : torsion) out.push_back(pic.make_class(p, t));
  });
  return out;
}

struct VertexCheck {
  bool is_vertex = false;        // q_I is a vertex of Z
  bool zonotope_inside = false;  // every vertex of Z lies in q_I - C_I
  bool ok() const { return is_vertex && zonotope_inside; }
};

inline VertexCheck vertex_check_details(const StackyFan& fan, const PicardData& pic, const IndexSet& subset) {
  const ForbiddenConeData fc = forbidden_cone(fan, pic, subset);
  const Zonotope z = zonotope(pic);
  VertexCheck out;
  out.is_vertex = std::find(z.vertices.begin(), z.vertices.end(), fc.q_real.coords) != z.vertices.end();
  out.zonotope_inside = std::all_of(z.vertices.begin(), z.vertices.end(), [&](const RatVector& v) {
    RatVector diff = fc.q_real.coords;
    for (std::size_t k = 0; k < diff.size(); ++k) diff[k] -= v[k];
    return fc.cone.contains(diff);
  });
  return out;
}

inline bool vertex_check(const StackyFan& fan, const PicardData& pic, const IndexSet& subset) {
  return vertex_check_details(fan, pic, subset).ok();
}

}  // namespace immaculatum
