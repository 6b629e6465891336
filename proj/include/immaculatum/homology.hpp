#pragma once

// Reduced simplicial homology over Q and the tempting subsets of a fan.

#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include "immaculatum/exactmath.hpp"
#include "immaculatum/fan.hpp"

namespace immaculatum {

class LimitExceededError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Ranks of H~_i for i = -1, 0, ..., stored with an offset of one.
struct HomologyRanks {
  std::vector<std::size_t> ranks;  // ranks[i + 1] = rank H~_i

  std::size_t at(int degree) const {
    const auto idx = static_cast<std::size_t>(degree + 1);
    return degree >= -1 && idx < ranks.size() ? ranks[idx] : 0;
  }
  bool nonzero() const {
    for (auto r : ranks)
      if (r) return true;
    return false;
  }
  friend bool operator==(const HomologyRanks&, const HomologyRanks&) = default;
};

namespace detail {

// Boundary map C_k -> C_{k-1} over the given face lists; faces of size k+1
// map to faces of size k (the empty face sits in size 0).
inline IntMatrix boundary_matrix(const std::vector<IndexSet>& lower, const std::vector<IndexSet>& upper) {
  std::map<IndexSet, std::size_t> index;
  for (std::size_t i = 0; i < lower.size(); ++i) index.emplace(lower[i], i);
  IntMatrix m(lower.size(), upper.size());
  for (std::size_t j = 0; j < upper.size(); ++j) {
    const auto& face = upper[j];
    for (std::size_t drop = 0; drop < face.size(); ++drop) {
      IndexSet sub;
      for (std::size_t t = 0; t < face.size(); ++t)
        if (t != drop) sub.push_back(face[t]);
      m(index.at(sub), j) = drop % 2 == 0 ? 1 : -1;
    }
  }
  return m;
}

}  // namespace detail

/// rank H~_i = dim C_i - rank d_i - rank d_{i+1}, with C_{-1} spanned by the
/// empty face. Ranks come from fraction-free elimination of the integer
/// boundary matrices.
inline HomologyRanks reduced_homology_ranks(const SimplicialComplex& cx) {
  const auto by_dim = cx.faces_by_dimension();
  const std::size_t levels = by_dim.size();
  std::vector<std::size_t> boundary_rank(levels + 1, 0);  // boundary_rank[s]: C_s -> C_{s-1} in size terms
  for (std::size_t s = 1; s < levels; ++s)
    boundary_rank[s] = rank(detail::boundary_matrix(by_dim[s - 1], by_dim[s]));
  HomologyRanks out;
  out.ranks.resize(levels);
  for (std::size_t s = 0; s < levels; ++s)
    out.ranks[s] = by_dim[s].size() - boundary_rank[s] - boundary_rank[s + 1];
  return out;
}

inline bool is_tempting(const StackyFan& fan, const IndexSet& subset) {
  return reduced_homology_ranks(restricted_complex(fan, subset)).nonzero();
}

/// Subsets I with nonzero reduced homology of the restricted complex.
struct TemptingCatalog {
  struct Entry {
    IndexSet set;
    HomologyRanks ranks;
  };
  std::vector<Entry> entries;  // sorted by set

  std::vector<IndexSet> sets() const {
    std::vector<IndexSet> out;
    for (const auto& e : entries) out.push_back(e.set);
    return out;
  }
  const Entry* find(const IndexSet& s) const {
    for (const auto& e : entries)
      if (e.set == s) return &e;
    return nullptr;
  }
};

/// Default cap on the number of subsets examined (2^24); the environment
/// variable IMMACULATUM_MAX_SUBSETS overrides it.
inline std::uint64_t subset_cap() {
  if (const char* env = std::getenv("IMMACULATUM_MAX_SUBSETS")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw std::invalid_argument(std::string("IMMACULATUM_MAX_SUBSETS is not a number: ") + env);
    }
  }
  return std::uint64_t{1} << 24;
}

/// Memo of restricted-complex homology keyed by I. Lookups and inserts are
/// serialized, and a key computed twice yields the same value, so concurrent
/// callers see deterministic results.
class HomologyMemo {
 public:
  explicit HomologyMemo(const StackyFan& fan) : fan_(fan) {}

  HomologyRanks get(const IndexSet& subset) {
    {
      std::lock_guard<std::mutex> lock(mu_);
      if (auto it = memo_.find(subset); it != memo_.end()) return it->second;
    }
    HomologyRanks r = reduced_homology_ranks(restricted_complex(fan_, subset));
    std::lock_guard<std::mutex> lock(mu_);
    return memo_.emplace(subset, std::move(r)).first->second;
  }

  std::size_t size() const {
    std::lock_guard<std::mutex> lock(mu_);
    return memo_.size();
  }

 private:
  const StackyFan& fan_;
  mutable std::mutex mu_;
  std::map<IndexSet, HomologyRanks> memo_;
};

/// Enumerates the subsets containing ray 0, derives the complements of the
/// tempting ones (I tempting iff its complement is), and audits each derived
/// complement by computing its homology directly.
inline TemptingCatalog tempting_sets(const StackyFan& fan, std::uint64_t max_subsets = subset_cap()) {
  const int n = fan.ray_count();
  if (n > 62 || (std::uint64_t{1} << n) > max_subsets)
    throw LimitExceededError("fan has " + std::to_string(n) + " rays; 2^" + std::to_string(n) +
                             " subsets exceed the cap of " + std::to_string(max_subsets));
  HomologyMemo memo(fan);
  std::map<IndexSet, HomologyRanks> found;
  const std::uint64_t half = std::uint64_t{1} << (n - 1);
  for (std::uint64_t mask = 0; mask < half; ++mask) {
    IndexSet s{0};
    for (int b = 1; b < n; ++b)
      if (mask & (std::uint64_t{1} << (b - 1))) s.push_back(b);
    const HomologyRanks r = memo.get(s);
    if (!r.nonzero()) continue;
    const IndexSet c = complement(s, n);
    const HomologyRanks rc = memo.get(c);
    if (!rc.nonzero())
      throw std::logic_error("complement symmetry fails: " + format_index_set(s) + " is tempting but " +
                             format_index_set(c) + " is not");
    found.emplace(s, r);
    found.emplace(c, rc);
  }
  TemptingCatalog cat;
  for (auto& [s, r] : found) cat.entries.push_back({s, std::move(r)});
  std::sort(cat.entries.begin(), cat.entries.end(),
            [](const TemptingCatalog::Entry& a, const TemptingCatalog::Entry& b) {
              if (a.set.size() != b.set.size()) return a.set.size() < b.set.size();
              return a.set < b.set;
            });
  return cat;
}

}  // namespace immaculatum
