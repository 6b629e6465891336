#pragma once

// Picard group of a stacky fan: Pic = Z^n / {(<m, v_i>)_i : m in M}.

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "immaculatum/exactmath.hpp"
#include "immaculatum/fan.hpp"

namespace immaculatum {

/// An element of Pic: free coordinates in the Hermite-normalized basis and
/// torsion residues in [0, t_j).
struct DivisorClass {
  IntVector free;
  IntVector torsion;

  friend bool operator==(const DivisorClass&, const DivisorClass&) = default;
  friend auto operator<=>(const DivisorClass& a, const DivisorClass& b) {
    if (auto c = a.free <=> b.free; c != 0) return c;
    return a.torsion <=> b.torsion;
  }
};

inline std::string format_class(const DivisorClass& c) {
  std::string s = format_vector(c.free);
  if (!c.torsion.empty()) s += ";" + format_vector(c.torsion);
  return s;
}

/// Image in Pic_R = Pic (x) R, coordinates in Q^r.
struct RealClass {
  RatVector coords;
  friend bool operator==(const RealClass&, const RealClass&) = default;
};

struct PicardData {
  int n = 0;
  int d = 0;
  IntMatrix pairing_matrix;  // n x d, row i = v_i
  AbelianPresentation presentation;
  std::vector<DivisorClass> e_classes;
  std::vector<RealClass> e_real;

  std::size_t rank() const { return presentation.free_rank; }
  const std::vector<Integer>& torsion_invariants() const { return presentation.torsion_invariants; }
  bool has_torsion() const { return !presentation.torsion_invariants.empty(); }

  DivisorClass zero() const {
    return DivisorClass{IntVector(rank(), Integer(0)), IntVector(torsion_invariants().size(), Integer(0))};
  }

  DivisorClass add(const DivisorClass& a, const DivisorClass& b) const {
    DivisorClass out{added(a.free, b.free), added(a.torsion, b.torsion)};
    for (std::size_t j = 0; j < out.torsion.size(); ++j)
      out.torsion[j] = mod_floor(out.torsion[j], torsion_invariants()[j]);
    return out;
  }
  DivisorClass negate(const DivisorClass& a) const {
    DivisorClass out{negated(a.free), negated(a.torsion)};
    for (std::size_t j = 0; j < out.torsion.size(); ++j)
      out.torsion[j] = mod_floor(out.torsion[j], torsion_invariants()[j]);
    return out;
  }
  DivisorClass subtract(const DivisorClass& a, const DivisorClass& b) const { return add(a, negate(b)); }
  DivisorClass multiply(const DivisorClass& a, const Integer& k) const {
    DivisorClass out{scaled(a.free, k), scaled(a.torsion, k)};
    for (std::size_t j = 0; j < out.torsion.size(); ++j)
      out.torsion[j] = mod_floor(out.torsion[j], torsion_invariants()[j]);
    return out;
  }

  /// Builds a class from explicit coordinates, reducing torsion residues.
  DivisorClass make_class(IntVector free, IntVector torsion = {}) const {
    if (torsion.empty()) torsion.assign(torsion_invariants().size(), Integer(0));
    if (free.size() != rank() || torsion.size() != torsion_invariants().size())
      throw DimensionError("class coordinates have the wrong shape");
    for (std::size_t j = 0; j < torsion.size(); ++j)
      torsion[j] = mod_floor(torsion[j], torsion_invariants()[j]);
    return DivisorClass{std::move(free), std::move(torsion)};
  }

  /// A divisor c in Z^n with class_of(c) == cls.
  IntVector representative(const DivisorClass& cls) const {
    return presentation.lift(cls.free, cls.torsion);
  }

  /// All torsion elements, lexicographic.
  std::vector<IntVector> torsion_elements() const {
    std::vector<IntVector> out{IntVector(torsion_invariants().size(), Integer(0))};
    for (std::size_t j = 0; j < torsion_invariants().size(); ++j) {
      std::vector<IntVector> next;
      for (const auto& t : out)
        for (Integer r = 0; r < torsion_invariants()[j]; ++r) {
          IntVector u = t;
          u[j] = r;
          next.push_back(std::move(u));
        }
      out = std::move(next);
    }
    return out;
  }
};

inline DivisorClass class_of(const PicardData& pic, const IntVector& divisor) {
  if (divisor.size() != static_cast<std::size_t>(pic.n))
    throw DimensionError("divisor has length " + std::to_string(divisor.size()) + ", expected " +
                         std::to_string(pic.n));
  auto coords = pic.presentation.project(divisor);
  return DivisorClass{std::move(coords.free), std::move(coords.torsion)};
}

inline RealClass real_image(const PicardData&, const DivisorClass& cls) {
  return RealClass{to_rational(cls.free)};
}

inline PicardData picard_group(const StackyFan& fan) {
  PicardData pic;
  pic.n = fan.ray_count();
  pic.d = fan.dim;
  pic.pairing_matrix = IntMatrix(static_cast<std::size_t>(pic.n), static_cast<std::size_t>(pic.d));
  for (int i = 0; i < pic.n; ++i)
    for (int j = 0; j < pic.d; ++j)
      pic.pairing_matrix(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) =
          fan.rays[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  pic.presentation = cokernel(pic.pairing_matrix);
  for (int i = 0; i < pic.n; ++i) {
    IntVector e(static_cast<std::size_t>(pic.n), Integer(0));
    e[static_cast<std::size_t>(i)] = 1;
    pic.e_classes.push_back(class_of(pic, e));
    pic.e_real.push_back(real_image(pic, pic.e_classes.back()));
  }
  return pic;
}

/// K_X = -(E_0 + ... + E_{n-1}).
inline DivisorClass canonical_class(const PicardData& pic) {
  return class_of(pic, IntVector(static_cast<std::size_t>(pic.n), Integer(-1)));
}

inline DivisorClass serre_dual(const PicardData& pic, const DivisorClass& cls) {
  return pic.subtract(canonical_class(pic), cls);
}

}  // namespace immaculatum
