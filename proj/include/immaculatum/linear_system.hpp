#pragma once

// Exact rational linear programming: feasibility of mixed weak/strict
// systems with Farkas-style infeasibility certificates, coordinate
// optimization, and lattice-point enumeration in bounded polyhedra.

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <variant>
#include <vector>

#include "immaculatum/exactmath.hpp"

namespace immaculatum {

enum class Relation { greater_equal, greater, equal };

struct Constraint {
  RatVector coeffs;
  Relation relation = Relation::greater_equal;
  Rational constant = 0;

  bool satisfied_by(const RatVector& x) const {
    const Rational lhs = dot(coeffs, x);
    switch (relation) {
      case Relation::greater_equal: return lhs >= constant;
      case Relation::greater: return lhs > constant;
      case Relation::equal: return lhs == constant;
    }
    return false;
  }
};

/// Conjunction of linear constraints `coeffs . x  rel  constant` over Q^dim.
class LinearSystem {
 public:
  explicit LinearSystem(std::size_t dim = 0) : dim_(dim) {}

  LinearSystem& add(RatVector coeffs, Relation rel, Rational constant = 0) {
    if (coeffs.size() != dim_) throw DimensionError("constraint has wrong dimension");
    constraints_.push_back(Constraint{std::move(coeffs), rel, std::move(constant)});
    return *this;
  }
  LinearSystem& add(const IntVector& coeffs, Relation rel, const Integer& constant = 0) {
    return add(to_rational(coeffs), rel, Rational(constant));
  }
  /// coeffs . x <= constant, stored as (-coeffs) . x >= -constant.
  LinearSystem& add_at_most(RatVector coeffs, Rational constant) {
    return add(negated(std::move(coeffs)), Relation::greater_equal, Rational(-constant));
  }

  std::size_t dim() const { return dim_; }
  const std::vector<Constraint>& constraints() const { return constraints_; }
  bool has_strict() const {
    for (const auto& c : constraints_)
      if (c.relation == Relation::greater) return true;
    return false;
  }
  bool satisfied_by(const RatVector& x) const {
    for (const auto& c : constraints_)
      if (!c.satisfied_by(x)) return false;
    return true;
  }

 private:
  std::size_t dim_;
  std::vector<Constraint> constraints_;
};

/// Multipliers y_j, one per constraint: y_j >= 0 on inequality rows, free on
/// equality rows, with sum_j y_j a_j = 0 and either sum_j y_j b_j > 0, or
/// sum_j y_j b_j = 0 with some strict row carrying y_j > 0.
struct FarkasCertificate {
  RatVector multipliers;
};

inline bool verify_certificate(const LinearSystem& sys, const FarkasCertificate& cert) {
  const auto& rows = sys.constraints();
  if (cert.multipliers.size() != rows.size()) return false;
  RatVector combo(sys.dim(), Rational(0));
  Rational rhs = 0;
  bool strict_used = false;
  for (std::size_t j = 0; j < rows.size(); ++j) {
    const Rational& y = cert.multipliers[j];
    if (rows[j].relation != Relation::equal && y < 0) return false;
    if (rows[j].relation == Relation::greater && y > 0) strict_used = true;
    for (std::size_t k = 0; k < sys.dim(); ++k) combo[k] += y * rows[j].coeffs[k];
    rhs += y * rows[j].constant;
  }
  if (!is_zero(combo)) return false;
  return rhs > 0 || (rhs == 0 && strict_used);
}

struct Feasible {
  RatVector point;
};
struct Infeasible {
  FarkasCertificate certificate;
};
using FeasibilityResult = std::variant<Feasible, Infeasible>;

enum class LpStatus { optimal, infeasible, unbounded };

struct LpOptimum {
  LpStatus status = LpStatus::infeasible;
  Rational value = 0;
  RatVector point;
};

namespace detail {

// Dense two-phase simplex on  max c.z  s.t.  A z = b, z >= 0, with Bland's
// rule for termination. Sizes here are tiny, so the tableau is rebuilt
// from scratch for every call.
class Simplex {
 public:
  Simplex(const RatMatrix& a, RatVector b) : m_(a.rows()), n_(a.cols()) {
    cols_ = n_ + m_;
    t_ = RatMatrix(m_, cols_ + 1);
    basis_.resize(m_);
    for (std::size_t i = 0; i < m_; ++i) {
      const bool flip = b[i] < 0;
      for (std::size_t j = 0; j < n_; ++j) t_(i, j) = flip ? Rational(-a(i, j)) : a(i, j);
      t_(i, n_ + i) = 1;
      t_(i, cols_) = flip ? Rational(-b[i]) : b[i];
      basis_[i] = n_ + i;
    }
  }

  /// Phase 1; false when infeasible.
  bool find_feasible_basis() {
    RatVector cost(cols_, Rational(0));
    for (std::size_t i = 0; i < m_; ++i) cost[n_ + i] = -1;
    run(cost, cols_);
    Rational infeas = 0;
    for (std::size_t i = 0; i < m_; ++i)
      if (basis_[i] >= n_) infeas += t_(i, cols_);
    if (infeas != 0) return false;
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] < n_) continue;
      for (std::size_t j = 0; j < n_; ++j)
        if (t_(i, j) != 0) {
          pivot(i, j);
          break;
        }
    }
    return true;
  }

  /// Phase 2 over the original columns; false when unbounded.
  bool maximize(const RatVector& c) {
    RatVector cost(cols_, Rational(0));
    for (std::size_t j = 0; j < n_; ++j) cost[j] = c[j];
    return run(cost, n_);
  }

  RatVector solution() const {
    RatVector z(n_, Rational(0));
    for (std::size_t i = 0; i < m_; ++i)
      if (basis_[i] < n_) z[basis_[i]] = t_(i, cols_);
    return z;
  }

 private:
  void pivot(std::size_t r, std::size_t c) {
    const Rational inv = 1 / t_(r, c);
    for (std::size_t j = 0; j <= cols_; ++j) t_(r, j) *= inv;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r || t_(i, c) == 0) continue;
      t_.add_row(i, r, Rational(-t_(i, c)));
    }
    basis_[r] = c;
  }

  // Maximizes cost.z letting only columns < allowed enter. Returns false
  // on unboundedness.
  bool run(const RatVector& cost, std::size_t allowed) {
    for (;;) {
      std::size_t enter = allowed;
      for (std::size_t j = 0; j < allowed; ++j) {
        Rational reduced = cost[j];
        for (std::size_t i = 0; i < m_; ++i)
          if (t_(i, j) != 0) reduced -= cost[basis_[i]] * t_(i, j);
        if (reduced > 0) {
          enter = j;
          break;
        }
      }
      if (enter == allowed) return true;
      std::size_t leave = m_;
      Rational best;
      for (std::size_t i = 0; i < m_; ++i) {
        if (t_(i, enter) <= 0) continue;
        Rational ratio = t_(i, cols_) / t_(i, enter);
        if (leave == m_ || ratio < best || (ratio == best && basis_[i] < basis_[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave == m_) return false;
      pivot(leave, enter);
    }
  }

  std::size_t m_, n_, cols_;
  RatMatrix t_;
  std::vector<std::size_t> basis_;
};

// Standard form of a weak system over free variables:
// z = (x+, x-, surplus), one surplus per >= row.
struct StandardForm {
  RatMatrix a;
  RatVector b;
  std::size_t dim = 0;

  explicit StandardForm(const LinearSystem& sys) : dim(sys.dim()) {
    const auto& rows = sys.constraints();
    std::size_t surplus = 0;
    for (const auto& r : rows) {
      if (r.relation == Relation::greater)
        throw std::invalid_argument("strict constraint in a weak-only LP");
      if (r.relation == Relation::greater_equal) ++surplus;
    }
    a = RatMatrix(rows.size(), 2 * dim + surplus);
    b.resize(rows.size());
    std::size_t s = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      for (std::size_t k = 0; k < dim; ++k) {
        a(i, k) = rows[i].coeffs[k];
        a(i, dim + k) = -rows[i].coeffs[k];
      }
      if (rows[i].relation == Relation::greater_equal) a(i, 2 * dim + s++) = -1;
      b[i] = rows[i].constant;
    }
  }

  RatVector objective(const RatVector& c) const {
    RatVector out(a.cols(), Rational(0));
    for (std::size_t k = 0; k < dim; ++k) {
      out[k] = c[k];
      out[dim + k] = -c[k];
    }
    return out;
  }

  RatVector recover(const RatVector& z) const {
    RatVector x(dim);
    for (std::size_t k = 0; k < dim; ++k) x[k] = z[k] - z[dim + k];
    return x;
  }
};

}  // namespace detail

/// Maximizes objective . x over a system of weak constraints.
inline LpOptimum lp_maximize(const LinearSystem& sys, const RatVector& objective) {
  if (objective.size() != sys.dim()) throw DimensionError("objective has wrong dimension");
  const detail::StandardForm sf(sys);
  detail::Simplex simplex(sf.a, sf.b);
  LpOptimum out;
  if (!simplex.find_feasible_basis()) return out;
  if (!simplex.maximize(sf.objective(objective))) {
    out.status = LpStatus::unbounded;
    return out;
  }
  out.status = LpStatus::optimal;
  out.point = sf.recover(simplex.solution());
  out.value = dot(objective, out.point);
  return out;
}

inline LpOptimum lp_minimize(const LinearSystem& sys, const RatVector& objective) {
  LpOptimum out = lp_maximize(sys, negated(objective));
  out.value = -out.value;
  return out;
}

namespace detail {

inline std::optional<RatVector> weak_feasible_point(const LinearSystem& sys) {
  const StandardForm sf(sys);
  Simplex simplex(sf.a, sf.b);
  if (!simplex.find_feasible_basis()) return std::nullopt;
  return sf.recover(simplex.solution());
}

}  // namespace detail

/// Decides a mixed system of >=, > and = constraints exactly.
///
/// The system is homogenized with an extra variable tau > 0, which makes it
/// conic; every strict row of the cone can then be replaced by ">= 1"
/// without changing feasibility. When that weak system has no solution the
/// Motzkin alternative is solved for the certificate instead.
inline FeasibilityResult lp_feasible(const LinearSystem& sys) {
  const std::size_t k = sys.dim();
  const auto& rows = sys.constraints();
  if (rows.empty()) return Feasible{RatVector(k, Rational(0))};

  LinearSystem cone(k + 1);
  for (const auto& r : rows) {
    RatVector coeffs = r.coeffs;
    coeffs.push_back(-r.constant);
    switch (r.relation) {
      case Relation::greater_equal: cone.add(std::move(coeffs), Relation::greater_equal, 0); break;
      case Relation::greater: cone.add(std::move(coeffs), Relation::greater_equal, 1); break;
      case Relation::equal: cone.add(std::move(coeffs), Relation::equal, 0); break;
    }
  }
  RatVector tau(k + 1, Rational(0));
  tau[k] = 1;
  cone.add(tau, Relation::greater_equal, 1);

  if (auto z = detail::weak_feasible_point(cone)) {
    RatVector x(k);
    for (std::size_t i = 0; i < k; ++i) x[i] = (*z)[i] / (*z)[k];
    if (!sys.satisfied_by(x)) throw std::logic_error("lp_feasible produced an invalid point");
    return Feasible{std::move(x)};
  }

  // y >= 0 on inequality rows, sum y_j a_j = 0, sum y_j b_j >= 0,
  // sum y_j b_j + sum_{strict} y_j = 1.
  const std::size_t m = rows.size();
  LinearSystem alt(m);
  for (std::size_t j = 0; j < m; ++j) {
    if (rows[j].relation == Relation::equal) continue;
    RatVector e(m, Rational(0));
    e[j] = 1;
    alt.add(std::move(e), Relation::greater_equal, 0);
  }
  for (std::size_t i = 0; i < k; ++i) {
    RatVector col(m);
    for (std::size_t j = 0; j < m; ++j) col[j] = rows[j].coeffs[i];
    alt.add(std::move(col), Relation::equal, 0);
  }
  RatVector bvec(m), norm(m);
  for (std::size_t j = 0; j < m; ++j) {
    bvec[j] = rows[j].constant;
    norm[j] = rows[j].constant + (rows[j].relation == Relation::greater ? 1 : 0);
  }
  alt.add(bvec, Relation::greater_equal, 0);
  alt.add(norm, Relation::equal, 1);
  auto y = detail::weak_feasible_point(alt);
  if (!y) throw std::logic_error("lp_feasible: neither a point nor a certificate exists");
  FarkasCertificate cert{std::move(*y)};
  if (!verify_certificate(sys, cert))
    throw std::logic_error("lp_feasible produced an invalid certificate");
  return Infeasible{std::move(cert)};
}

inline bool is_feasible(const LinearSystem& sys) {
  return std::holds_alternative<Feasible>(lp_feasible(sys));
}

struct Unbounded {};
using LatticePointsResult = std::variant<std::vector<IntVector>, Unbounded>;

/// True iff {x : A x >= 0, A_eq x = 0} (the recession cone of a weak
/// system) contains a nonzero vector.
inline bool has_nonzero_recession(const LinearSystem& sys) {
  const std::size_t k = sys.dim();
  for (std::size_t j = 0; j < k; ++j) {
    for (int s : {1, -1}) {
      LinearSystem rec(k);
      for (const auto& r : sys.constraints())
        rec.add(r.coeffs, r.relation == Relation::equal ? Relation::equal : Relation::greater_equal, 0);
      RatVector e(k, Rational(0));
      e[j] = s;
      rec.add(std::move(e), Relation::greater, 0);
      if (is_feasible(rec)) return true;
    }
  }
  return false;
}

namespace detail {

// Box scan with constraint filtering. Assumes the system is bounded.
inline std::vector<IntVector> scan_bounded(const LinearSystem& sys) {
  const std::size_t k = sys.dim();
  std::vector<IntVector> points;
  if (k == 0) {
    if (sys.satisfied_by({})) points.emplace_back();
    return points;
  }
  IntVector lo(k), hi(k);
  for (std::size_t j = 0; j < k; ++j) {
    RatVector e(k, Rational(0));
    e[j] = 1;
    const LpOptimum mx = lp_maximize(sys, e);
    if (mx.status == LpStatus::infeasible) return points;
    if (mx.status == LpStatus::unbounded) throw std::logic_error("scan of an unbounded system");
    const LpOptimum mn = lp_minimize(sys, e);
    lo[j] = ceil_of(mn.value);
    hi[j] = floor_of(mx.value);
    if (lo[j] > hi[j]) return points;
  }

  // Integer-scaled rows for exact filtering without rational temporaries.
  struct Row {
    IntVector a;
    Integer b;
    Relation rel;
  };
  std::vector<Row> rows;
  for (const auto& c : sys.constraints()) {
    Integer den = c.constant.get_den();
    for (const auto& x : c.coeffs) den = lcm(den, Integer(x.get_den()));
    Row r;
    for (const auto& x : c.coeffs) r.a.push_back(Integer(x * den));
    r.b = Integer(c.constant * den);
    r.rel = c.relation;
    rows.push_back(std::move(r));
  }

  IntVector x = lo;
  for (;;) {
    bool ok = true;
    for (const auto& r : rows) {
      Integer lhs = 0;
      for (std::size_t j = 0; j < k; ++j) lhs += r.a[j] * x[j];
      if ((r.rel == Relation::equal && lhs != r.b) || (r.rel == Relation::greater_equal && lhs < r.b) ||
          (r.rel == Relation::greater && lhs <= r.b)) {
        ok = false;
        break;
      }
    }
    if (ok) points.push_back(x);
    std::size_t j = k;
    while (j > 0) {
      --j;
      if (x[j] < hi[j]) {
        ++x[j];
        for (std::size_t t = j + 1; t < k; ++t) x[t] = lo[t];
        break;
      }
      if (j == 0) return points;
    }
  }
}

}  // namespace detail

/// Integer points of a weak polyhedron in lexicographic order, or Unbounded
/// when its recession cone is nonzero.
inline LatticePointsResult lattice_points(const LinearSystem& sys) {
  if (sys.has_strict()) throw std::invalid_argument("lattice_points expects weak constraints only");
  if (has_nonzero_recession(sys)) return Unbounded{};
  return detail::scan_bounded(sys);
}

}  // namespace immaculatum
