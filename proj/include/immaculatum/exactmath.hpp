#pragma once

// Exact integer and rational linear algebra on top of GMP.
//
// Everything here works with arbitrary-precision values; there is no
// fixed-width fast path. Matrices are small (tens of rows), so dense
// row-major storage and schoolbook elimination are adequate.

#include <gmpxx.h>

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace immaculatum {

using Integer = mpz_class;
using Rational = mpq_class;
using IntVector = std::vector<Integer>;
using RatVector = std::vector<Rational>;

/// Thrown when an operation receives arguments of inconsistent shape.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

template <typename T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, T(0)) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  static Matrix from_rows(const std::vector<std::vector<T>>& rows,
                          std::size_t cols_if_empty = 0) {
    const std::size_t cols = rows.empty() ? cols_if_empty : rows.front().size();
    Matrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != cols) throw DimensionError("ragged matrix rows");
      for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  static Matrix from_rows(std::initializer_list<std::initializer_list<long>> rows) {
    std::vector<std::vector<T>> tmp;
    for (const auto& r : rows) {
      std::vector<T> row;
      for (long v : r) row.emplace_back(v);
      tmp.push_back(std::move(row));
    }
    return from_rows(tmp);
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::vector<T> row(std::size_t i) const {
    return std::vector<T>(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                          data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
  }
  std::vector<T> col(std::size_t j) const {
    std::vector<T> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
    return out;
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  std::vector<T> apply(const std::vector<T>& x) const {
    if (x.size() != cols_) throw DimensionError("matrix-vector size mismatch");
    std::vector<T> y(rows_, T(0));
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) y[i] += (*this)(i, j) * x[j];
    return y;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw DimensionError("matrix product size mismatch");
    Matrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        if (a(i, k) == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += a(i, k) * b(k, j);
      }
    return c;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  // Elementary operations used by the normal-form routines.
  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
  }
  void swap_cols(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
  }
  /// row[dst] += factor * row[src]
  void add_row(std::size_t dst, std::size_t src, const T& factor) {
    if (factor == 0) return;
    for (std::size_t j = 0; j < cols_; ++j) (*this)(dst, j) += factor * (*this)(src, j);
  }
  /// col[dst] += factor * col[src]
  void add_col(std::size_t dst, std::size_t src, const T& factor) {
    if (factor == 0) return;
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, dst) += factor * (*this)(i, src);
  }
  void negate_row(std::size_t i) {
    for (std::size_t j = 0; j < cols_; ++j) (*this)(i, j) = -(*this)(i, j);
  }
  void negate_col(std::size_t j) {
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = -(*this)(i, j);
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using IntMatrix = Matrix<Integer>;
using RatMatrix = Matrix<Rational>;

// ---------------------------------------------------------------------------
// Small helpers

inline Integer floor_of(const Rational& q) {
  Integer out;
  mpz_fdiv_q(out.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return out;
}

inline Integer ceil_of(const Rational& q) {
  Integer out;
  mpz_cdiv_q(out.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return out;
}

/// Residue of a modulo m in [0, m), m > 0.
inline Integer mod_floor(const Integer& a, const Integer& m) {
  Integer r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}

inline int sign_of(const Rational& q) { return sgn(q); }
inline int sign_of(const Integer& z) { return sgn(z); }

template <typename T>
T dot(const std::vector<T>& a, const std::vector<T>& b) {
  if (a.size() != b.size()) throw DimensionError("dot product size mismatch");
  T s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline Rational dot(const RatVector& a, const IntVector& b) {
  if (a.size() != b.size()) throw DimensionError("dot product size mismatch");
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * Rational(b[i]);
  return s;
}

inline RatVector to_rational(const IntVector& v) {
  return RatVector(v.begin(), v.end());
}

inline RatMatrix to_rational(const IntMatrix& m) {
  RatMatrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j);
  return out;
}

template <typename T>
bool is_zero(const std::vector<T>& v) {
  return std::all_of(v.begin(), v.end(), [](const T& x) { return x == 0; });
}

template <typename T>
std::vector<T> negated(std::vector<T> v) {
  for (auto& x : v) x = -x;
  return v;
}

template <typename T>
std::vector<T> added(std::vector<T> a, const std::vector<T>& b) {
  if (a.size() != b.size()) throw DimensionError("vector sum size mismatch");
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  return a;
}

template <typename T>
std::vector<T> scaled(std::vector<T> v, const T& s) {
  for (auto& x : v) x *= s;
  return v;
}

/// Scales a nonzero rational vector to the primitive integer vector with
/// the same direction (positive multiple).
inline IntVector primitive_direction(const RatVector& v) {
  Integer den = 1;
  for (const auto& x : v) den = lcm(den, Integer(x.get_den()));
  IntVector out(v.size());
  Integer g = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[i] = Integer(v[i] * den);
    g = gcd(g, out[i]);
  }
  if (g == 0) throw std::invalid_argument("primitive_direction of zero vector");
  for (auto& x : out) x /= g;
  return out;
}

/// Flips the sign so that the first nonzero entry is positive.
template <typename T>
std::vector<T> canonical_sign(std::vector<T> v) {
  for (const auto& x : v) {
    if (x == 0) continue;
    if (x < 0)
      for (auto& y : v) y = -y;
    break;
  }
  return v;
}

template <typename T>
std::string format_vector(const std::vector<T>& v) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) os << ',';
    os << v[i];
  }
  os << ')';
  return os.str();
}

// ---------------------------------------------------------------------------
// Rational elimination

/// Reduced row echelon form in place; returns pivot column indices.
inline std::vector<std::size_t> row_reduce(RatMatrix& a) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < a.cols() && r < a.rows(); ++c) {
    std::size_t p = r;
    while (p < a.rows() && a(p, c) == 0) ++p;
    if (p == a.rows()) continue;
    a.swap_rows(p, r);
    const Rational inv = 1 / a(r, c);
    for (std::size_t j = 0; j < a.cols(); ++j) a(r, j) *= inv;
    for (std::size_t i = 0; i < a.rows(); ++i)
      if (i != r && a(i, c) != 0) a.add_row(i, r, Rational(-a(i, c)));
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

inline std::size_t rank(RatMatrix a) { return row_reduce(a).size(); }

/// Rank of an integer matrix by fraction-free (Bareiss) elimination.
inline std::size_t rank(IntMatrix a) {
  std::size_t r = 0;
  Integer prev = 1;
  for (std::size_t c = 0; c < a.cols() && r < a.rows(); ++c) {
    std::size_t p = r;
    while (p < a.rows() && a(p, c) == 0) ++p;
    if (p == a.rows()) continue;
    a.swap_rows(p, r);
    for (std::size_t i = r + 1; i < a.rows(); ++i) {
      for (std::size_t j = c + 1; j < a.cols(); ++j) {
        a(i, j) = (a(r, c) * a(i, j) - a(i, c) * a(r, j)) / prev;
      }
      a(i, c) = 0;
    }
    prev = a(r, c);
    ++r;
  }
  return r;
}

inline std::size_t rank_of_rows(const std::vector<RatVector>& rows, std::size_t dim) {
  return rank(RatMatrix::from_rows(rows, dim));
}

/// Basis of {x : a x = 0}.
inline std::vector<RatVector> nullspace(RatMatrix a) {
  const auto pivots = row_reduce(a);
  std::vector<bool> is_pivot(a.cols(), false);
  for (auto p : pivots) is_pivot[p] = true;
  std::vector<RatVector> basis;
  for (std::size_t f = 0; f < a.cols(); ++f) {
    if (is_pivot[f]) continue;
    RatVector v(a.cols(), Rational(0));
    v[f] = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -a(i, f);
    basis.push_back(std::move(v));
  }
  return basis;
}

inline std::vector<RatVector> nullspace_of_rows(const std::vector<RatVector>& rows,
                                                std::size_t dim) {
  return nullspace(RatMatrix::from_rows(rows, dim));
}

/// Unique solution of a square nonsingular system, or nullopt if singular.
inline std::optional<RatVector> solve_square(const RatMatrix& a, const RatVector& b) {
  if (a.rows() != a.cols() || b.size() != a.rows())
    throw DimensionError("solve_square expects a square system");
  const std::size_t n = a.rows();
  RatMatrix aug(n, n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = a(i, j);
    aug(i, n) = b[i];
  }
  const auto pivots = row_reduce(aug);
  if (pivots.size() != n || (n > 0 && pivots.back() != n - 1)) return std::nullopt;
  RatVector x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = aug(i, n);
  return x;
}

inline Integer determinant(const IntMatrix& a) {
  if (a.rows() != a.cols()) throw DimensionError("determinant of non-square matrix");
  RatMatrix m = to_rational(a);
  const std::size_t n = m.rows();
  Rational det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && m(p, c) == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      m.swap_rows(p, c);
      det = -det;
    }
    det *= m(c, c);
    for (std::size_t i = c + 1; i < n; ++i)
      if (m(i, c) != 0) m.add_row(i, c, Rational(-m(i, c) / m(c, c)));
  }
  return Integer(det);
}

// ---------------------------------------------------------------------------
// Smith normal form

/// A = u * d * v with u, v unimodular and d diagonal, d_1 | d_2 | ...;
/// u_inv * A * v_inv = d.
struct SmithForm {
  IntMatrix u;
  IntMatrix d;
  IntMatrix v;
  IntMatrix u_inv;
  IntMatrix v_inv;

  std::vector<Integer> diagonal() const {
    std::vector<Integer> out;
    for (std::size_t i = 0; i < std::min(d.rows(), d.cols()); ++i) out.push_back(d(i, i));
    return out;
  }
};

namespace detail {

// Applies each elementary operation to the working matrix and keeps both
// the transform and its inverse in sync.
struct SmithWorkspace {
  IntMatrix d, u, v, u_inv, v_inv;

  void add_row(std::size_t dst, std::size_t src, const Integer& f) {
    d.add_row(dst, src, f);
    u_inv.add_row(dst, src, f);
    u.add_col(src, dst, Integer(-f));
  }
  void add_col(std::size_t dst, std::size_t src, const Integer& f) {
    d.add_col(dst, src, f);
    v_inv.add_col(dst, src, f);
    v.add_row(src, dst, Integer(-f));
  }
  void swap_rows(std::size_t a, std::size_t b) {
    d.swap_rows(a, b);
    u_inv.swap_rows(a, b);
    u.swap_cols(a, b);
  }
  void swap_cols(std::size_t a, std::size_t b) {
    d.swap_cols(a, b);
    v_inv.swap_cols(a, b);
    v.swap_rows(a, b);
  }
  void negate_row(std::size_t i) {
    d.negate_row(i);
    u_inv.negate_row(i);
    u.negate_col(i);
  }
};

inline Integer trunc_div(const Integer& a, const Integer& b) {
  Integer q;
  mpz_tdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

}  // namespace detail

/// Smith normal form with deterministic pivoting: the pivot is the entry of
/// smallest nonzero absolute value in the remaining block, ties broken by
/// lowest row then lowest column.
inline SmithForm smith_normal_form(const IntMatrix& a) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  detail::SmithWorkspace w{a, IntMatrix::identity(m), IntMatrix::identity(n),
                           IntMatrix::identity(m), IntMatrix::identity(n)};
  auto& d = w.d;
  for (std::size_t t = 0; t < std::min(m, n); ++t) {
    bool done_all = false;
    for (;;) {
      std::size_t pi = m, pj = n;
      Integer best = 0;
      for (std::size_t i = t; i < m; ++i)
        for (std::size_t j = t; j < n; ++j) {
          if (d(i, j) == 0) continue;
          Integer mag = abs(d(i, j));
          if (pi == m || mag < best) {
            best = mag;
            pi = i;
            pj = j;
          }
        }
      if (pi == m) {
        done_all = true;
        break;
      }
      w.swap_rows(t, pi);
      w.swap_cols(t, pj);
      bool dirty = false;
      for (std::size_t i = t + 1; i < m; ++i) {
        if (d(i, t) == 0) continue;
        w.add_row(i, t, Integer(-detail::trunc_div(d(i, t), d(t, t))));
        if (d(i, t) != 0) dirty = true;
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (d(t, j) == 0) continue;
        w.add_col(j, t, Integer(-detail::trunc_div(d(t, j), d(t, t))));
        if (d(t, j) != 0) dirty = true;
      }
      if (dirty) continue;
      std::size_t bad_row = m;
      for (std::size_t i = t + 1; i < m && bad_row == m; ++i)
        for (std::size_t j = t + 1; j < n; ++j)
          if (d(i, j) % d(t, t) != 0) {
            bad_row = i;
            break;
          }
      if (bad_row == m) break;
      w.add_row(t, bad_row, Integer(1));
    }
    if (done_all) break;
    if (d(t, t) < 0) w.negate_row(t);
  }
  return SmithForm{std::move(w.u), std::move(w.d), std::move(w.v), std::move(w.u_inv),
                   std::move(w.v_inv)};
}

// ---------------------------------------------------------------------------
// Hermite normal form (row style)

/// w * a = h with w unimodular; h in row echelon form, pivots positive and
/// entries above each pivot reduced into [0, pivot).
struct HermiteForm {
  IntMatrix h;
  IntMatrix w;
  IntMatrix w_inv;
};

inline HermiteForm hermite_normal_form(const IntMatrix& a) {
  const std::size_t m = a.rows();
  IntMatrix h = a, w = IntMatrix::identity(m), w_inv = IntMatrix::identity(m);
  auto add_row = [&](std::size_t dst, std::size_t src, const Integer& f) {
    if (f == 0) return;
    h.add_row(dst, src, f);
    w.add_row(dst, src, f);
    w_inv.add_col(src, dst, Integer(-f));
  };
  auto swap_rows = [&](std::size_t x, std::size_t y) {
    h.swap_rows(x, y);
    w.swap_rows(x, y);
    w_inv.swap_cols(x, y);
  };
  std::size_t r = 0;
  for (std::size_t c = 0; c < h.cols() && r < m; ++c) {
    for (;;) {
      std::size_t p = m;
      for (std::size_t i = r; i < m; ++i)
        if (h(i, c) != 0 && (p == m || abs(h(i, c)) < abs(h(p, c)))) p = i;
      if (p == m) break;
      swap_rows(r, p);
      bool clean = true;
      for (std::size_t i = r + 1; i < m; ++i) {
        if (h(i, c) == 0) continue;
        add_row(i, r, Integer(-detail::trunc_div(h(i, c), h(r, c))));
        if (h(i, c) != 0) clean = false;
      }
      if (clean) break;
    }
    if (h(r, c) == 0) continue;
    if (h(r, c) < 0) {
      h.negate_row(r);
      w.negate_row(r);
      w_inv.negate_col(r);
    }
    for (std::size_t i = 0; i < r; ++i) {
      Integer q;
      mpz_fdiv_q(q.get_mpz_t(), h(i, c).get_mpz_t(), h(r, c).get_mpz_t());
      add_row(i, r, Integer(-q));
    }
    ++r;
  }
  return HermiteForm{std::move(h), std::move(w), std::move(w_inv)};
}

// ---------------------------------------------------------------------------
// Finitely generated abelian groups

/// Presentation of Z^n / (column span of a relation matrix) as
/// Z^free_rank (+) Z/t_1 (+) ... with t_1 | t_2 | ....
///
/// `free_projection` (free_rank x n) and `torsion_projection`
/// (torsion count x n, rows read modulo the invariants) together form the
/// surjection from Z^n. `free_lift` / `torsion_lift` map coordinates back to
/// a preimage in Z^n.
struct AbelianPresentation {
  std::size_t ambient = 0;
  std::size_t free_rank = 0;
  std::vector<Integer> torsion_invariants;
  IntMatrix free_projection;
  IntMatrix torsion_projection;
  IntMatrix free_lift;     // n x free_rank
  IntMatrix torsion_lift;  // n x torsion count

  struct Coordinates {
    IntVector free;
    IntVector torsion;
    friend bool operator==(const Coordinates&, const Coordinates&) = default;
  };

  Coordinates project(const IntVector& c) const {
    if (c.size() != ambient) throw DimensionError("projection input has wrong length");
    Coordinates out{free_projection.apply(c), torsion_projection.apply(c)};
    for (std::size_t j = 0; j < out.torsion.size(); ++j)
      out.torsion[j] = mod_floor(out.torsion[j], torsion_invariants[j]);
    return out;
  }

  IntVector lift(const IntVector& free, const IntVector& torsion) const {
    if (free.size() != free_rank || torsion.size() != torsion_invariants.size())
      throw DimensionError("lift input has wrong shape");
    IntVector c = free_lift.apply(free);
    const IntVector t = torsion_lift.apply(torsion);
    for (std::size_t i = 0; i < ambient; ++i) c[i] += t[i];
    return c;
  }
};

/// Z^n / column-span(a) for an n x m integer matrix a. The free basis is the
/// Hermite-normalized one, so identical inputs always give identical
/// coordinates.
inline AbelianPresentation cokernel(const IntMatrix& a) {
  const std::size_t n = a.rows();
  const SmithForm snf = smith_normal_form(a);
  const auto diag = snf.diagonal();

  std::vector<std::size_t> free_idx, torsion_idx;
  std::vector<Integer> invariants;
  for (std::size_t i = 0; i < n; ++i) {
    const Integer di = i < diag.size() ? diag[i] : Integer(0);
    if (di == 0) {
      free_idx.push_back(i);
    } else if (di != 1) {
      torsion_idx.push_back(i);
      invariants.push_back(di);
    }
  }

  AbelianPresentation p;
  p.ambient = n;
  p.free_rank = free_idx.size();
  p.torsion_invariants = invariants;
  p.free_projection = IntMatrix(free_idx.size(), n);
  p.free_lift = IntMatrix(n, free_idx.size());
  for (std::size_t k = 0; k < free_idx.size(); ++k)
    for (std::size_t j = 0; j < n; ++j) {
      p.free_projection(k, j) = snf.u_inv(free_idx[k], j);
      p.free_lift(j, k) = snf.u(j, free_idx[k]);
    }
  p.torsion_projection = IntMatrix(torsion_idx.size(), n);
  p.torsion_lift = IntMatrix(n, torsion_idx.size());
  for (std::size_t k = 0; k < torsion_idx.size(); ++k)
    for (std::size_t j = 0; j < n; ++j) {
      p.torsion_projection(k, j) = mod_floor(snf.u_inv(torsion_idx[k], j), invariants[k]);
      p.torsion_lift(j, k) = snf.u(j, torsion_idx[k]);
    }

  if (p.free_rank > 0) {
    const HermiteForm hnf = hermite_normal_form(p.free_projection);
    p.free_projection = hnf.h;
    p.free_lift = p.free_lift * hnf.w_inv;
  }
  return p;
}

}  // namespace immaculatum
