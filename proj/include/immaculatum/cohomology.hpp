#pragma once

// Line-bundle cohomology h^i(X, L) = sum_{I tempting} rank H~_{i-1}(Sigma|_I) * p_I
// where p_I counts the fiber of
//   pi_I(a) = sum_{i not in I} a_i E_i - sum_{i in I} (1 + a_i) E_i,  a >= 0,
// over L.
//
// Fixing a divisor c with class L, a fiber element is a = c + <m, v> (up to
// the sign flip on I) for a unique m in M, because the kernel of
// Z^n -> Pic is exactly {(<m, v_i>)_i}. So p_I is the number of lattice
// points m with
//   <m, v_i> >= -c_i        (i not in I)
//   <m, v_i> <= -c_i - 1    (i in I).

#include <algorithm>
#include <cstddef>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include "immaculatum/exactmath.hpp"
#include "immaculatum/fan.hpp"
#include "immaculatum/homology.hpp"
#include "immaculatum/linear_system.hpp"
#include "immaculatum/picard.hpp"
#include "immaculatum/polyhedra.hpp"

namespace immaculatum {

/// Raised when a pattern polytope turns out unbounded, which cannot happen
/// for a tempting I on a complete fan.
class StructuralError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct PatternPolytope {
  IndexSet set;
  LinearSystem system;  // over M_R = Q^d
};

inline PatternPolytope pattern_polytope(const StackyFan& fan, const IntVector& divisor, const IndexSet& subset) {
  const int n = fan.ray_count();
  if (divisor.size() != static_cast<std::size_t>(n)) throw DimensionError("divisor has wrong length");
  PatternPolytope p{subset, LinearSystem(static_cast<std::size_t>(fan.dim))};
  for (int i = 0; i < n; ++i) {
    const auto& v = fan.rays[static_cast<std::size_t>(i)];
    const auto& c = divisor[static_cast<std::size_t>(i)];
    if (contains(subset, i))
      p.system.add(negated(v), Relation::greater_equal, Integer(c + 1));
    else
      p.system.add(v, Relation::greater_equal, Integer(-c));
  }
  return p;
}

struct CohomologyVector {
  std::vector<Integer> h;  // h^0 .. h^d

  bool vanishes() const {
    for (const auto& x : h)
      if (x != 0) return false;
    return true;
  }
  friend bool operator==(const CohomologyVector&, const CohomologyVector&) = default;
};

inline Integer euler_characteristic(const CohomologyVector& v) {
  Integer chi = 0;
  for (std::size_t i = 0; i < v.h.size(); ++i) chi += i % 2 == 0 ? v.h[i] : Integer(-v.h[i]);
  return chi;
}

/// Cohomology of many classes on one fan. Boundedness of each pattern
/// polytope depends only on I (its recession cone is
/// {<m, v_i> >= 0 off I, <= 0 on I}), so it is checked once per tempting set.
class CohomologyEngine {
 public:
  CohomologyEngine(const StackyFan& fan, const PicardData& pic, const TemptingCatalog& catalog)
      : fan_(fan), pic_(pic), catalog_(catalog) {}

  const StackyFan& fan() const { return fan_; }
  const PicardData& picard() const { return pic_; }
  const TemptingCatalog& catalog() const { return catalog_; }

  /// p_I for a tempting I.
  Integer count_pI(const DivisorClass& cls, const IndexSet& subset) const {
    if (!catalog_.find(subset))
      throw std::invalid_argument("count_pI: " + format_index_set(subset) + " is not tempting");
    return count_points(pic_.representative(cls), subset);
  }

  /// p_I from an explicit divisor representative.
  Integer count_points(const IntVector& divisor, const IndexSet& subset) const {
    ensure_bounded(subset);
    const PatternPolytope p = pattern_polytope(fan_, divisor, subset);
    return Integer(static_cast<unsigned long>(detail::scan_bounded(p.system).size()));
  }

  /// p_I for every tempting I, in catalog order.
  std::vector<Integer> pattern_counts(const DivisorClass& cls) const {
    const IntVector c = pic_.representative(cls);
    std::vector<Integer> out;
    for (const auto& e : catalog_.entries) out.push_back(count_points(c, e.set));
    return out;
  }

  CohomologyVector cohomology(const DivisorClass& cls) const { return assemble(pattern_counts(cls)); }

  /// Immaculate iff every p_I vanishes; cross-checked against the assembled
  /// cohomology vector.
  bool is_immaculate(const DivisorClass& cls) const {
    const auto counts = pattern_counts(cls);
    const bool all_zero = std::all_of(counts.begin(), counts.end(), [](const Integer& p) { return p == 0; });
    if (all_zero != assemble(counts).vanishes())
      throw ConsistencyError("p_I test and cohomology vector disagree for " + format_class(cls));
    return all_zero;
  }

  /// Immaculate classes with free coordinates in the box, all torsion twists
  /// included, lexicographic in free coordinates then torsion.
  std::vector<DivisorClass> immaculate_scan(const std::vector<std::pair<Integer, Integer>>& box) const {
    if (box.size() != pic_.rank()) throw DimensionError("scan box must have one range per free coordinate");
    const auto torsion = pic_.torsion_elements();
    std::vector<DivisorClass> out;
    detail::for_each_box_point(box, [&](const IntVector& p) {
      for (const auto& t : torsion) {
        DivisorClass cls = pic_.make_class(p, t);
        if (is_immaculate(cls)) out.push_back(std::move(cls));
      }
    });
    return out;
  }

 private:
  CohomologyVector assemble(const std::vector<Integer>& counts) const {
    CohomologyVector out{std::vector<Integer>(static_cast<std::size_t>(fan_.dim) + 1, Integer(0))};
    for (std::size_t k = 0; k < counts.size(); ++k) {
      if (counts[k] == 0) continue;
      const auto& ranks = catalog_.entries[k].ranks;
      for (int i = 0; i <= fan_.dim; ++i)
        out.h[static_cast<std::size_t>(i)] += counts[k] * static_cast<unsigned long>(ranks.at(i - 1));
    }
    return out;
  }

  void ensure_bounded(const IndexSet& subset) const {
    {
      std::lock_guard<std::mutex> lock(mu_);
      if (bounded_.count(subset)) return;
    }
    const PatternPolytope p = pattern_polytope(fan_, IntVector(static_cast<std::size_t>(fan_.ray_count()), Integer(0)), subset);
    if (has_nonzero_recession(p.system))
      throw StructuralError("pattern polytope for I = " + format_index_set(subset) +
                            " is unbounded (invalid fan or non-tempting set)");
    std::lock_guard<std::mutex> lock(mu_);
    bounded_.emplace(subset, true);
  }

  const StackyFan& fan_;
  const PicardData& pic_;
  const TemptingCatalog& catalog_;
  mutable std::mutex mu_;
  mutable std::map<IndexSet, bool> bounded_;
};

inline Integer count_pI(const StackyFan& fan, const PicardData& pic, const DivisorClass& cls, const IndexSet& subset) {
  const PatternPolytope p = pattern_polytope(fan, pic.representative(cls), subset);
  const auto pts = lattice_points(p.system);
  if (std::holds_alternative<Unbounded>(pts))
    throw StructuralError("pattern polytope for I = " + format_index_set(subset) + " is unbounded");
  return Integer(static_cast<unsigned long>(std::get<std::vector<IntVector>>(pts).size()));
}

inline CohomologyVector cohomology(const StackyFan& fan, const PicardData& pic, const TemptingCatalog& catalog,
                                   const DivisorClass& cls) {
  return CohomologyEngine(fan, pic, catalog).cohomology(cls);
}

inline bool is_immaculate(const StackyFan& fan, const PicardData& pic, const TemptingCatalog& catalog,
                          const DivisorClass& cls) {
  return CohomologyEngine(fan, pic, catalog).is_immaculate(cls);
}

inline std::vector<DivisorClass> immaculate_scan(const StackyFan& fan, const PicardData& pic,
                                                 const TemptingCatalog& catalog,
                                                 const std::vector<std::pair<Integer, Integer>>& box) {
  return CohomologyEngine(fan, pic, catalog).immaculate_scan(box);
}

}  // namespace immaculatum
