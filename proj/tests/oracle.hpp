#pragma once

// Brute-force references that share no code with the library's lattice,
// LP or cokernel routines. Everything runs in int64.

#include <cstdint>
#include <cstdlib>
#include <algorithm>
#include <stdexcept>
#include <vector>

#include "immaculatum/fan.hpp"

namespace oracle {

using i64 = std::int64_t;
using Vec = std::vector<i64>;

struct SmallFan {
  int dim = 0;
  std::vector<Vec> rays;
  std::vector<std::vector<int>> max_cones;
};

inline SmallFan small(const immaculatum::StackyFan& f) {
  SmallFan s;
  s.dim = f.dim;
  for (const auto& r : f.rays) {
    Vec v;
    for (const auto& x : r) v.push_back(x.get_si());
    s.rays.push_back(v);
  }
  s.max_cones = f.max_cones;
  return s;
}

// Integer determinant by cofactor expansion (d <= 4 here).
inline i64 det(const std::vector<Vec>& a) {
  const std::size_t n = a.size();
  if (n == 0) return 1;
  if (n == 1) return a[0][0];
  i64 total = 0;
  for (std::size_t c = 0; c < n; ++c) {
    std::vector<Vec> minor;
    for (std::size_t r = 1; r < n; ++r) {
      Vec row;
      for (std::size_t k = 0; k < n; ++k)
        if (k != c) row.push_back(a[r][k]);
      minor.push_back(row);
    }
    total += (c % 2 == 0 ? 1 : -1) * a[0][c] * det(minor);
  }
  return total;
}

// Number of a in Z^n_{>=0} with pi_I(a) = [c], for tempting I (bounded
// fiber). A fiber point is fixed by its coordinates on the first maximal
// cone sigma, since those determine m. The fiber's m-polytope is the hull
// of vertices solving d x d integer systems, so by Cramer's rule every
// |m_k| <= d! Vmax^(d-1) (Cmax + 1), which bounds every a_i; the scan over
// a_sigma in [0, A]^d is therefore exhaustive.
inline i64 fiber_size(const SmallFan& f, const Vec& c, const std::vector<int>& subset) {
  const std::size_t n = f.rays.size(), d = static_cast<std::size_t>(f.dim);
  std::vector<bool> in(n, false);
  for (int i : subset) in[static_cast<std::size_t>(i)] = true;
  i64 vmax = 0, cmax = 0, fact = 1;
  for (const auto& v : f.rays)
    for (auto x : v) vmax = std::max(vmax, std::abs(x));
  for (auto x : c) cmax = std::max(cmax, std::abs(x));
  for (std::size_t k = 2; k <= d; ++k) fact *= static_cast<i64>(k);
  i64 mbound = fact * (cmax + 1);
  for (std::size_t k = 1; k < d; ++k) mbound *= vmax;
  const i64 abound = cmax + 1 + static_cast<i64>(d) * vmax * mbound;

  const auto& sigma = f.max_cones.at(0);
  std::vector<Vec> a_sigma;
  for (int i : sigma) a_sigma.push_back(f.rays[static_cast<std::size_t>(i)]);
  const i64 det_sigma = det(a_sigma);
  if (det_sigma == 0) throw std::logic_error("oracle: singular cone");

  // Value of a_i given the pairing x_i = <m, v_i>.
  auto a_of = [&](std::size_t i, i64 x) { return in[i] ? -1 - c[i] - x : c[i] + x; };
  // Pairing x_i recovered from a_i.
  auto x_of = [&](std::size_t i, i64 a) { return in[i] ? -1 - c[i] - a : a - c[i]; };

  Vec idx(d, 0), m(d);
  i64 count = 0;
  for (;;) {
    bool integral = true;
    for (std::size_t k = 0; k < d && integral; ++k) {
      std::vector<Vec> ak = a_sigma;
      for (std::size_t r = 0; r < d; ++r) ak[r][k] = x_of(static_cast<std::size_t>(sigma[r]), idx[r]);
      const i64 num = det(ak);
      if (num % det_sigma != 0) integral = false;
      else m[k] = num / det_sigma;
    }
    if (integral) {
      bool ok = true;
      for (std::size_t i = 0; i < n && ok; ++i) {
        i64 x = 0;
        for (std::size_t k = 0; k < d; ++k) x += m[k] * f.rays[i][k];
        ok = a_of(i, x) >= 0;
      }
      if (ok) ++count;
    }
    std::size_t j = d;
    for (;;) {
      if (j == 0) return count;
      --j;
      if (idx[j] < abound) {
        ++idx[j];
        break;
      }
      idx[j] = 0;
    }
  }
}

// Tempting sets come from the caller; the oracle only decides emptiness of
// every fiber.
inline bool immaculate(const SmallFan& f, const Vec& c, const std::vector<std::vector<int>>& tempting) {
  for (const auto& s : tempting)
    if (fiber_size(f, c, s) != 0) return false;
  return true;
}

}  // namespace oracle
