#pragma once

// Asymptotics of immaculate classes.
//
// Imm(X) is infinite iff some line through the origin of Pic_R avoids the
// interior of every forbidden cone C_I, and the accumulation set at
// infinity is the complement in the hyperplane at infinity of the relative
// interiors of the D_I.
//
// For strongly convex C_I (all tempting I) the image of C_I \ {0} at
// infinity meets its antipodal copy nowhere, so the relative interior of
// D_I in RP^{r-1} is exactly the image of C_I° u -C_I°. When C_I is not
// full-dimensional, D_I has empty interior and imposes nothing. Hence a
// direction w belongs to Imm^∞ iff neither w nor -w lies in any C_I°.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "immaculatum/cohomology.hpp"
#include "immaculatum/exactmath.hpp"
#include "immaculatum/fan.hpp"
#include "immaculatum/homology.hpp"
#include "immaculatum/picard.hpp"
#include "immaculatum/polyhedra.hpp"

namespace immaculatum {

/// A point of RP^{r-1}: primitive integer vector with first nonzero entry
/// positive.
struct Direction {
  IntVector coords;

  static Direction from(const RatVector& v) { return Direction{canonical_sign(primitive_direction(v))}; }
  static Direction from(const IntVector& v) { return from(to_rational(v)); }

  RatVector rational() const { return to_rational(coords); }
  friend bool operator==(const Direction&, const Direction&) = default;
  friend auto operator<=>(const Direction& a, const Direction& b) { return a.coords <=> b.coords; }
};

enum class InfinityDecision { infinite, finite };

struct CoverEntry {
  std::vector<int> signs;
  RatVector sample;
  IndexSet covers_sample;   // I with sample in C_I°
  IndexSet covers_antipode; // I' with -sample in C_I'°
};

struct InfinityReport {
  InfinityDecision decision = InfinityDecision::finite;
  std::optional<Direction> witness;
  std::vector<IntVector> hyperplanes;   // arrangement used for the cell search
  std::vector<CoverEntry> certificate;  // filled when FINITE
  std::size_t cells_examined = 0;
};

/// Default cap on arrangement cells examined by the decision procedure.
inline constexpr std::size_t kDefaultCellCap = 200000;

namespace detail {

struct OrientedFacet {
  std::size_t hyperplane;
  int orientation;  // facet = orientation * hyperplane normal
};

struct ArrangementData {
  std::vector<ForbiddenConeData> cones;  // full-dimensional tempting cones only
  std::vector<IntVector> hyperplanes;
  std::vector<std::vector<OrientedFacet>> facets;  // per cone
};

inline ArrangementData full_dimensional_cones(const StackyFan& fan, const PicardData& pic,
                                              const TemptingCatalog& catalog) {
  ArrangementData data;
  std::vector<RatVector> normals;
  for (const auto& e : catalog.entries) {
    auto fc = forbidden_cone(fan, pic, e.set);
    if (!fc.full_dim) continue;
    for (const auto& g : fc.cone.facets) normals.push_back(to_rational(g));
    data.cones.push_back(std::move(fc));
  }
  data.hyperplanes = canonical_hyperplanes(normals);
  for (const auto& fc : data.cones) {
    std::vector<OrientedFacet> of;
    for (const auto& g : fc.cone.facets) {
      const IntVector canon = canonical_sign(g);
      const auto it = std::lower_bound(data.hyperplanes.begin(), data.hyperplanes.end(), canon);
      of.push_back(OrientedFacet{static_cast<std::size_t>(it - data.hyperplanes.begin()), canon == g ? 1 : -1});
    }
    data.facets.push_back(std::move(of));
  }
  return data;
}

// Index of the first cone whose interior holds a point with the given sign
// vector (scaled by `flip`), or -1.
inline int covering_cone(const ArrangementData& data, const std::vector<int>& signs, int flip) {
  for (std::size_t c = 0; c < data.cones.size(); ++c) {
    bool inside = true;
    for (const auto& f : data.facets[c])
      if (f.orientation * flip * signs[f.hyperplane] <= 0) {
        inside = false;
        break;
      }
    if (inside) return static_cast<int>(c);
  }
  return -1;
}

}  // namespace detail

/// Decides whether infinitely many immaculate classes exist. Enumerates the
/// cells of the arrangement formed by all facet hyperplanes of the
/// full-dimensional tempting cones; a cell sample v is a witness iff neither
/// v nor -v lies in any C_I°. Returns the first witness in cell order, or a
/// per-cell covering certificate.
inline InfinityReport decide_infinite(const StackyFan& fan, const PicardData& pic, const TemptingCatalog& catalog,
                                      std::size_t max_cells = kDefaultCellCap) {
  const auto data = detail::full_dimensional_cones(fan, pic, catalog);
  const auto cells = arrangement_cells(data.hyperplanes, pic.rank(), max_cells);
  InfinityReport report;
  report.hyperplanes = data.hyperplanes;
  for (const auto& cell : cells) {
    ++report.cells_examined;
    const int pos = detail::covering_cone(data, cell.signs, 1);
    const int neg = detail::covering_cone(data, cell.signs, -1);
    if (pos < 0 && neg < 0) {
      report.decision = InfinityDecision::infinite;
      report.witness = Direction::from(cell.sample);
      report.certificate.clear();
      return report;
    }
    // C_{I^c} = -C_I and I^c is tempting with I, so v and -v are always
    // covered together.
    if (pos < 0 || neg < 0) throw ConsistencyError("cell covered at only one sign");
    report.certificate.push_back(CoverEntry{cell.signs, cell.sample, data.cones[static_cast<std::size_t>(pos)].set,
                                            data.cones[static_cast<std::size_t>(neg)].set});
  }
  report.decision = InfinityDecision::finite;
  return report;
}

/// True iff w lies in Imm^∞: no full-dimensional tempting C_I has w or -w in
/// its interior.
inline bool imm_infinity_contains(const StackyFan& fan, const PicardData& pic, const TemptingCatalog& catalog,
                                  const Direction& w) {
  if (w.coords.size() != pic.rank()) throw DimensionError("direction has wrong dimension");
  if (is_zero(w.coords)) throw std::invalid_argument("zero direction");
  const RatVector v = w.rational();
  const RatVector minus_v = negated(v);
  for (const auto& e : catalog.entries) {
    const auto fc = forbidden_cone(fan, pic, e.set);
    if (interior_contains(fc.cone, v) || interior_contains(fc.cone, minus_v)) return false;
  }
  return true;
}

/// Re-checks a report against the cones: the witness avoids every C_I° at
/// both signs, or every certificate entry has its sample and antipode in the
/// named interiors and the entries cover every cell.
inline bool verify_infinity_report(const StackyFan& fan, const PicardData& pic, const TemptingCatalog& catalog,
                                   const InfinityReport& report) {
  if (report.decision == InfinityDecision::infinite) {
    return report.witness && imm_infinity_contains(fan, pic, catalog, *report.witness);
  }
  const auto cells = arrangement_cells(report.hyperplanes, pic.rank(), kDefaultCellCap);
  if (cells.size() != report.certificate.size()) return false;
  for (std::size_t k = 0; k < cells.size(); ++k) {
    const auto& entry = report.certificate[k];
    if (entry.signs != cells[k].signs) return false;
    for (std::size_t h = 0; h < report.hyperplanes.size(); ++h)
      if (sign_of(dot(entry.sample, report.hyperplanes[h])) != entry.signs[h]) return false;
    // Membership of the sample extends to the whole cell when every facet
    // of the cone is one of the arrangement hyperplanes.
    const auto covered = [&](const IndexSet& set, const RatVector& point) {
      if (!catalog.find(set)) return false;
      const auto fc = forbidden_cone(fan, pic, set);
      for (const auto& g : fc.cone.facets)
        if (!std::binary_search(report.hyperplanes.begin(), report.hyperplanes.end(), canonical_sign(g)))
          return false;
      return interior_contains(fc.cone, point);
    };
    if (!covered(entry.covers_sample, entry.sample) || !covered(entry.covers_antipode, negated(entry.sample)))
      return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Description of Imm^∞

struct ImmArc {
  Direction from;  // closed counterclockwise arc from `from` to `to`
  Direction to;
  friend bool operator==(const ImmArc&, const ImmArc&) = default;
};

struct ImmInfinityDescription {
  struct ConeData {
    IndexSet set;
    std::vector<IntVector> facets;
    std::vector<RatVector> generators;
  };
  std::size_t rank = 0;
  std::vector<ConeData> cones;  // full-dimensional tempting cones

  // Rank 1 and 2: explicit description.
  bool whole = false;                // all of Π
  std::vector<Direction> isolated;   // isolated points
  std::vector<ImmArc> arcs;          // closed arcs, one per antipodal pair

  // Rank >= 3: distinct cell-sample directions found in Imm^∞.
  std::vector<Direction> sample_members;

  bool empty() const { return !whole && isolated.empty() && arcs.empty() && sample_members.empty(); }
};

namespace detail {

// Counterclockwise angular order on nonzero vectors in Q^2, starting at the
// positive x-axis.
inline bool angle_less(const IntVector& a, const IntVector& b) {
  auto half = [](const IntVector& v) { return (v[1] > 0 || (v[1] == 0 && v[0] > 0)) ? 0 : 1; };
  if (half(a) != half(b)) return half(a) < half(b);
  return a[0] * b[1] - a[1] * b[0] > 0;
}

}  // namespace detail

inline ImmInfinityDescription imm_infinity_description(const StackyFan& fan, const PicardData& pic,
                                                       const TemptingCatalog& catalog,
                                                       std::size_t max_cells = kDefaultCellCap) {
  const auto data = detail::full_dimensional_cones(fan, pic, catalog);
  ImmInfinityDescription desc;
  desc.rank = pic.rank();
  for (const auto& fc : data.cones)
    desc.cones.push_back({fc.set, fc.cone.facets, fc.cone.generators});
  auto member = [&](const IntVector& v) { return imm_infinity_contains(fan, pic, catalog, Direction::from(v)); };

  if (desc.rank == 1) {
    if (member(IntVector{1})) desc.isolated.push_back(Direction{{1}});
    return desc;
  }

  if (desc.rank >= 3) {
    std::set<Direction> found;
    for (const auto& cell : arrangement_cells(data.hyperplanes, desc.rank, max_cells)) {
      const Direction w = Direction::from(cell.sample);
      if (member(w.coords)) found.insert(w);
    }
    desc.sample_members.assign(found.begin(), found.end());
    return desc;
  }

  // Rank 2: boundary rays of all cones (both signs) cut the circle into open
  // arcs on which membership is constant.
  std::vector<IntVector> rays;
  for (const auto& h : data.hyperplanes) {
    IntVector u{Integer(-h[1]), h[0]};
    rays.push_back(u);
    rays.push_back(negated(u));
  }
  std::sort(rays.begin(), rays.end(), detail::angle_less);
  rays.erase(std::unique(rays.begin(), rays.end()), rays.end());
  if (rays.empty()) {
    desc.whole = true;
    return desc;
  }
  const std::size_t m = rays.size();
  // Element 2k is ray k, element 2k+1 is the open arc from ray k to ray k+1.
  std::vector<bool> in(2 * m);
  for (std::size_t k = 0; k < m; ++k) {
    in[2 * k] = member(rays[k]);
    const auto& a = rays[k];
    const auto& b = rays[(k + 1) % m];
    IntVector mid = added(a, b);
    if (is_zero(mid) || m == 1) mid = IntVector{Integer(-a[1]), a[0]};
    in[2 * k + 1] = member(mid);
  }
  if (std::all_of(in.begin(), in.end(), [](bool b) { return b; })) {
    desc.whole = true;
    return desc;
  }
  // Walk maximal cyclic runs of members, starting right after a non-member.
  std::size_t start = 0;
  while (in[start]) ++start;
  std::vector<std::pair<std::size_t, std::size_t>> runs;  // inclusive element indices
  for (std::size_t step = 1; step <= 2 * m; ++step) {
    const std::size_t idx = (start + step) % (2 * m);
    if (!in[idx]) continue;
    const std::size_t prev = (idx + 2 * m - 1) % (2 * m);
    if (!in[prev]) {
      runs.emplace_back(idx, idx);
    } else {
      runs.back().second = idx;
    }
  }
  std::set<Direction> isolated;
  std::vector<ImmArc> arcs;
  for (const auto& [first, last] : runs) {
    // A member arc forces its endpoint rays in (Imm^∞ is closed), so runs
    // start and end on rays.
    if (first % 2 != 0 || last % 2 != 0)
      throw ConsistencyError("Imm^∞ computed as a non-closed set");
    const IntVector& from = rays[first / 2];
    const IntVector& to = rays[last / 2];
    if (first == last) {
      isolated.insert(Direction::from(from));
    } else if (canonical_sign(from) == from) {
      arcs.push_back(ImmArc{Direction{from}, Direction{to}});
    }
  }
  desc.isolated.assign(isolated.begin(), isolated.end());
  std::sort(arcs.begin(), arcs.end(), [](const ImmArc& a, const ImmArc& b) { return a.from < b.from; });
  desc.arcs = std::move(arcs);
  return desc;
}

// ---------------------------------------------------------------------------
// Explicit immaculate families

/// A class whose real image lies in the open zonotope: pick m in M_Q with
/// every <m, v_i> non-integral and take sum_i floor(<m, v_i>) E_i. The m are
/// tried with prime denominators 2, 3, 5, ... over numerators 1, -1, 2, -2,
/// ..., 0; zonotope enumeration is the fallback.
inline DivisorClass interior_class(const StackyFan& fan, const PicardData& pic) {
  const Zonotope z = zonotope(pic);
  const auto d = static_cast<std::size_t>(fan.dim);
  auto accept = [&](const DivisorClass& cls) {
    if (!membership(z, real_image(pic, cls).coords, ZonotopeMode::interior))
      throw ConsistencyError("interior_class produced a class outside the open zonotope");
    return cls;
  };
  for (int p : {2, 3, 5, 7, 11, 13, 17, 19, 23}) {
    std::vector<int> numerators;
    for (int a = 1; a < p; ++a) {
      numerators.push_back(a);
      numerators.push_back(-a);
    }
    numerators.push_back(0);
    std::size_t total = 1;
    bool too_many = false;
    for (std::size_t k = 0; k < d; ++k) {
      total *= numerators.size();
      if (total > 2000000) too_many = true;
    }
    if (too_many) break;
    std::vector<std::size_t> idx(d, 0);
    for (std::size_t iter = 0; iter < total; ++iter) {
      RatVector m(d);
      for (std::size_t k = 0; k < d; ++k) m[k] = Rational(numerators[idx[k]], p);
      bool generic = true;
      IntVector divisor;
      for (const auto& v : fan.rays) {
        Rational pairing = dot(m, v);
        pairing.canonicalize();
        if (pairing.get_den() == 1) {
          generic = false;
          break;
        }
        divisor.push_back(floor_of(pairing));
      }
      if (generic) return accept(class_of(pic, divisor));
      for (std::size_t k = d; k-- > 0;) {
        if (++idx[k] < numerators.size()) break;
        idx[k] = 0;
      }
    }
  }
  const auto classes = zonotope_classes(pic, ZonotopeMode::interior);
  if (classes.empty()) throw ConsistencyError("no class maps to the open zonotope");
  return accept(classes.front());
}

/// Classes z0 + k w, k = 1..count, with z0 = interior_class. Each is checked
/// for immaculacy; a failure means an implementation bug and throws.
inline std::vector<DivisorClass> witness_immaculate_family(const StackyFan& fan, const PicardData& pic,
                                                           const TemptingCatalog& catalog, const Direction& w,
                                                           std::size_t count) {
  if (!imm_infinity_contains(fan, pic, catalog, w))
    throw std::invalid_argument("direction " + format_vector(w.coords) + " is not in Imm^∞");
  // The free part of Pic is all of Z^r in our coordinates, so the primitive
  // w is already the smallest lattice step along the line.
  const DivisorClass z0 = interior_class(fan, pic);
  const CohomologyEngine engine(fan, pic, catalog);
  std::vector<DivisorClass> out;
  DivisorClass step = pic.make_class(w.coords);
  DivisorClass cur = z0;
  for (std::size_t k = 1; k <= count; ++k) {
    cur = pic.add(cur, step);
    if (!engine.is_immaculate(cur))
      throw ConsistencyError("witness family member " + format_class(cur) + " is not immaculate");
    out.push_back(cur);
  }
  return out;
}

struct HullCheck {
  std::size_t hull_dim = 0;
  bool degenerate = false;
  std::vector<RatVector> psi;             // one point per maximal cone
  std::optional<Direction> imm_direction; // set when degenerate with a nonzero class
};

/// Piecewise-linear psi with <psi_sigma, v_i> = -c_i on each maximal cone;
/// when the points psi_sigma span less than M_R, the class direction is a
/// point of Imm^∞ (sufficient condition only).
inline HullCheck bw_hull_check(const StackyFan& fan, const PicardData& pic, const IntVector& divisor) {
  if (divisor.size() != static_cast<std::size_t>(fan.ray_count())) throw DimensionError("divisor has wrong length");
  const auto d = static_cast<std::size_t>(fan.dim);
  HullCheck out;
  for (const auto& cone : fan.max_cones) {
    RatMatrix a(d, d);
    RatVector b(d);
    for (std::size_t r = 0; r < d; ++r) {
      const auto i = static_cast<std::size_t>(cone[r]);
      for (std::size_t c = 0; c < d; ++c) a(r, c) = fan.rays[i][c];
      b[r] = -divisor[i];
    }
    auto psi = solve_square(a, b);
    if (!psi) throw std::logic_error("singular maximal cone in bw_hull_check");
    out.psi.push_back(std::move(*psi));
  }
  std::vector<RatVector> diffs;
  for (std::size_t k = 1; k < out.psi.size(); ++k) {
    RatVector dlt = out.psi[k];
    for (std::size_t c = 0; c < d; ++c) dlt[c] -= out.psi[0][c];
    diffs.push_back(std::move(dlt));
  }
  out.hull_dim = rank_of_rows(diffs, d);
  out.degenerate = out.hull_dim < d;
  const auto real = real_image(pic, class_of(pic, divisor)).coords;
  if (out.degenerate && !is_zero(real)) out.imm_direction = Direction::from(real);
  return out;
}

}  // namespace immaculatum
