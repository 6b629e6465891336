#pragma once

// Stacky fans: a lattice N = Z^d, one nonzero lattice vector on each ray of
// a complete simplicial fan, and the maximal cones as index sets.

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "immaculatum/exactmath.hpp"

namespace immaculatum {

/// Sorted list of 0-based ray indices.
using IndexSet = std::vector<int>;

inline std::string format_index_set(const IndexSet& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(s[i]);
  }
  return out + "}";
}

inline IndexSet complement(const IndexSet& s, int n) {
  IndexSet out;
  for (int i = 0; i < n; ++i)
    if (!std::binary_search(s.begin(), s.end(), i)) out.push_back(i);
  return out;
}

inline bool contains(const IndexSet& s, int i) { return std::binary_search(s.begin(), s.end(), i); }

class InvalidFanError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct StackyFan {
  int dim = 0;
  std::vector<IntVector> rays;
  std::vector<IndexSet> max_cones;
  std::string name;

  int ray_count() const { return static_cast<int>(rays.size()); }
};

struct SimplicialComplex {
  IndexSet vertices;
  std::set<IndexSet> faces;  // includes the empty face

  bool has_face(const IndexSet& f) const { return faces.count(f) > 0; }

  /// Faces grouped by dimension; entry 0 holds the empty face (dim -1).
  std::vector<std::vector<IndexSet>> faces_by_dimension() const {
    std::size_t top = 0;
    for (const auto& f : faces) top = std::max(top, f.size());
    std::vector<std::vector<IndexSet>> out(top + 1);
    for (const auto& f : faces) out[f.size()].push_back(f);
    return out;
  }
};

// ---------------------------------------------------------------------------
// Validation

enum class ViolationKind {
  malformed,
  unused_ray,
  zero_ray,
  singular_cone,
  parallel_rays,
  wall_condition,
  disconnected,
  same_side,
};

inline const char* to_string(ViolationKind k) {
  switch (k) {
    case ViolationKind::malformed: return "malformed";
    case ViolationKind::unused_ray: return "unused-ray";
    case ViolationKind::zero_ray: return "zero-ray";
    case ViolationKind::singular_cone: return "singular-cone";
    case ViolationKind::parallel_rays: return "parallel-rays";
    case ViolationKind::wall_condition: return "wall-condition";
    case ViolationKind::disconnected: return "disconnected";
    case ViolationKind::same_side: return "same-side";
  }
  return "unknown";
}

struct Violation {
  ViolationKind kind;
  IndexSet indices;  // rays or cones, depending on the kind
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  bool has(ViolationKind k) const {
    return std::any_of(violations.begin(), violations.end(),
                       [k](const Violation& v) { return v.kind == k; });
  }
};

namespace detail {

inline IntMatrix cone_matrix(const StackyFan& fan, const IndexSet& cone) {
  IntMatrix m(cone.size(), static_cast<std::size_t>(fan.dim));
  for (std::size_t r = 0; r < cone.size(); ++r)
    for (int c = 0; c < fan.dim; ++c) m(r, static_cast<std::size_t>(c)) = fan.rays[static_cast<std::size_t>(cone[r])][static_cast<std::size_t>(c)];
  return m;
}

// Normal of the hyperplane spanned by d-1 linearly independent rays.
inline RatVector wall_normal(const StackyFan& fan, const IndexSet& wall) {
  std::vector<RatVector> rows;
  for (int i : wall) rows.push_back(to_rational(fan.rays[static_cast<std::size_t>(i)]));
  auto ns = nullspace_of_rows(rows, static_cast<std::size_t>(fan.dim));
  if (ns.size() != 1) throw std::logic_error("wall does not span a hyperplane");
  return ns.front();
}

}  // namespace detail

/// Checks simpliciality, distinct rays, the wall condition, connectivity of
/// the wall graph and that the two cones at each wall lie on opposite sides.
/// Passing all of them is what "complete simplicial fan" means here.
inline ValidationReport validate(const StackyFan& fan) {
  ValidationReport rep;
  auto add = [&](ViolationKind k, IndexSet idx, std::string msg) {
    rep.violations.push_back(Violation{k, std::move(idx), std::move(msg)});
  };
  const int n = fan.ray_count();
  const int d = fan.dim;
  if (d < 1) {
    add(ViolationKind::malformed, {}, "dimension must be at least 1");
    return rep;
  }
  for (int i = 0; i < n; ++i) {
    const auto& v = fan.rays[static_cast<std::size_t>(i)];
    if (static_cast<int>(v.size()) != d) {
      add(ViolationKind::malformed, {i}, "ray " + std::to_string(i) + " has wrong length");
      return rep;
    }
    if (is_zero(v)) add(ViolationKind::zero_ray, {i}, "ray " + std::to_string(i) + " is zero");
  }
  if (fan.max_cones.empty()) {
    add(ViolationKind::malformed, {}, "no maximal cones");
    return rep;
  }
  for (std::size_t c = 0; c < fan.max_cones.size(); ++c) {
    const auto& cone = fan.max_cones[c];
    if (static_cast<int>(cone.size()) != d) {
      add(ViolationKind::malformed, {static_cast<int>(c)},
          "cone " + std::to_string(c) + " does not have " + std::to_string(d) + " rays");
      return rep;
    }
    IndexSet sorted = cone;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end() ||
        std::any_of(sorted.begin(), sorted.end(), [n](int i) { return i < 0 || i >= n; })) {
      add(ViolationKind::malformed, {static_cast<int>(c)},
          "cone " + std::to_string(c) + " has duplicate or out-of-range indices");
      return rep;
    }
  }
  if (!rep.ok()) return rep;

  std::vector<IndexSet> cones;
  for (auto c : fan.max_cones) {
    std::sort(c.begin(), c.end());
    cones.push_back(std::move(c));
  }
  {
    std::set<IndexSet> seen;
    for (std::size_t c = 0; c < cones.size(); ++c)
      if (!seen.insert(cones[c]).second)
        add(ViolationKind::malformed, {static_cast<int>(c)}, "cone " + std::to_string(c) + " is repeated");
  }

  std::vector<bool> used(static_cast<std::size_t>(n), false);
  for (const auto& c : cones)
    for (int i : c) used[static_cast<std::size_t>(i)] = true;
  for (int i = 0; i < n; ++i)
    if (!used[static_cast<std::size_t>(i)])
      add(ViolationKind::unused_ray, {i}, "ray " + std::to_string(i) + " lies in no maximal cone");

  for (std::size_t c = 0; c < cones.size(); ++c)
    if (determinant(detail::cone_matrix(fan, cones[c])) == 0)
      add(ViolationKind::singular_cone, {static_cast<int>(c)},
          "cone " + std::to_string(c) + " " + format_index_set(cones[c]) + " has dependent rays");

  // Positive rational multiples: rank 1 together and a positive pairing.
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const auto& a = fan.rays[static_cast<std::size_t>(i)];
      const auto& b = fan.rays[static_cast<std::size_t>(j)];
      if (is_zero(a) || is_zero(b)) continue;
      bool parallel = true;
      for (int x = 0; x < d && parallel; ++x)
        for (int y = x + 1; y < d && parallel; ++y)
          if (a[static_cast<std::size_t>(x)] * b[static_cast<std::size_t>(y)] !=
              a[static_cast<std::size_t>(y)] * b[static_cast<std::size_t>(x)])
            parallel = false;
      if (parallel && dot(a, b) > 0)
        add(ViolationKind::parallel_rays, {i, j},
            "rays " + std::to_string(i) + " and " + std::to_string(j) + " span the same ray");
    }
  // Wall normals need independent rays; other violations do not block them.
  if (rep.has(ViolationKind::zero_ray) || rep.has(ViolationKind::singular_cone)) return rep;

  // Walls: (d-1)-subsets of maximal cones.
  std::map<IndexSet, std::vector<int>> walls;
  for (std::size_t c = 0; c < cones.size(); ++c)
    for (int drop = 0; drop < d; ++drop) {
      IndexSet w;
      for (int t = 0; t < d; ++t)
        if (t != drop) w.push_back(cones[c][static_cast<std::size_t>(t)]);
      walls[w].push_back(static_cast<int>(c));
    }
  std::vector<std::vector<int>> adjacency(cones.size());
  for (const auto& [wall, owners] : walls) {
    if (owners.size() != 2) {
      add(ViolationKind::wall_condition, wall,
          "wall " + format_index_set(wall) + " lies in " + std::to_string(owners.size()) +
              " maximal cones");
      continue;
    }
    adjacency[static_cast<std::size_t>(owners[0])].push_back(owners[1]);
    adjacency[static_cast<std::size_t>(owners[1])].push_back(owners[0]);
    const RatVector normal = d == 1 ? RatVector{Rational(1)} : detail::wall_normal(fan, wall);
    int sides[2];
    for (int k = 0; k < 2; ++k) {
      const auto& cone = cones[static_cast<std::size_t>(owners[static_cast<std::size_t>(k)])];
      int extra = -1;
      for (int i : cone)
        if (!contains(wall, i)) extra = i;
      sides[k] = sign_of(dot(normal, fan.rays[static_cast<std::size_t>(extra)]));
    }
    if (sides[0] * sides[1] >= 0)
      add(ViolationKind::same_side, {owners[0], owners[1]},
          "cones " + std::to_string(owners[0]) + " and " + std::to_string(owners[1]) +
              " lie on the same side of wall " + format_index_set(wall));
  }

  std::vector<bool> seen(cones.size(), false);
  std::vector<int> stack{0};
  seen[0] = true;
  while (!stack.empty()) {
    const int c = stack.back();
    stack.pop_back();
    for (int nb : adjacency[static_cast<std::size_t>(c)])
      if (!seen[static_cast<std::size_t>(nb)]) {
        seen[static_cast<std::size_t>(nb)] = true;
        stack.push_back(nb);
      }
  }
  IndexSet unreached;
  for (std::size_t c = 0; c < cones.size(); ++c)
    if (!seen[c]) unreached.push_back(static_cast<int>(c));
  if (!unreached.empty())
    add(ViolationKind::disconnected, unreached, "maximal cones " + format_index_set(unreached) +
                                                    " are not wall-connected to cone 0");
  return rep;
}

/// Throws InvalidFanError listing every violation.
inline void require_valid(const StackyFan& fan) {
  const auto rep = validate(fan);
  if (rep.ok()) return;
  std::string msg = "invalid fan";
  for (const auto& v : rep.violations) msg += "\n  " + std::string(to_string(v.kind)) + ": " + v.message;
  throw InvalidFanError(msg);
}

// ---------------------------------------------------------------------------
// Simplicial complexes

inline SimplicialComplex restricted_complex(const StackyFan& fan, const IndexSet& subset) {
  const int n = fan.ray_count();
  for (int i : subset)
    if (i < 0 || i >= n) throw std::out_of_range("ray index " + std::to_string(i) + " out of range");
  IndexSet verts = subset;
  std::sort(verts.begin(), verts.end());
  verts.erase(std::unique(verts.begin(), verts.end()), verts.end());

  SimplicialComplex cx;
  cx.vertices = verts;
  for (auto cone : fan.max_cones) {
    std::sort(cone.begin(), cone.end());
    IndexSet inside;
    std::set_intersection(cone.begin(), cone.end(), verts.begin(), verts.end(), std::back_inserter(inside));
    const std::size_t k = inside.size();
    for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
      IndexSet f;
      for (std::size_t b = 0; b < k; ++b)
        if (mask & (std::size_t{1} << b)) f.push_back(inside[b]);
      cx.faces.insert(std::move(f));
    }
  }
  cx.faces.insert(IndexSet{});
  return cx;
}

inline SimplicialComplex full_complex(const StackyFan& fan) {
  IndexSet all(static_cast<std::size_t>(fan.ray_count()));
  std::iota(all.begin(), all.end(), 0);
  return restricted_complex(fan, all);
}

// ---------------------------------------------------------------------------
// Builtin fans

inline StackyFan projective_space(int d) {
  if (d < 1) throw std::invalid_argument("projective_space needs d >= 1");
  StackyFan f;
  f.dim = d;
  f.name = "projective_space(" + std::to_string(d) + ")";
  for (int i = 0; i < d; ++i) {
    IntVector e(static_cast<std::size_t>(d), Integer(0));
    e[static_cast<std::size_t>(i)] = 1;
    f.rays.push_back(e);
  }
  f.rays.emplace_back(static_cast<std::size_t>(d), Integer(-1));
  for (int skip = d; skip >= 0; --skip) {
    IndexSet c;
    for (int i = 0; i <= d; ++i)
      if (i != skip) c.push_back(i);
    f.max_cones.push_back(c);
  }
  return f;
}

inline StackyFan product(const StackyFan& a, const StackyFan& b) {
  StackyFan f;
  f.dim = a.dim + b.dim;
  f.name = "product(" + a.name + "," + b.name + ")";
  for (const auto& v : a.rays) {
    IntVector w = v;
    w.resize(static_cast<std::size_t>(f.dim), Integer(0));
    f.rays.push_back(w);
  }
  for (const auto& v : b.rays) {
    IntVector w(static_cast<std::size_t>(a.dim), Integer(0));
    w.insert(w.end(), v.begin(), v.end());
    f.rays.push_back(w);
  }
  for (const auto& ca : a.max_cones)
    for (const auto& cb : b.max_cones) {
      IndexSet c = ca;
      for (int i : cb) c.push_back(i + a.ray_count());
      std::sort(c.begin(), c.end());
      f.max_cones.push_back(c);
    }
  return f;
}

inline StackyFan hirzebruch(int a) {
  if (a < 0) throw std::invalid_argument("hirzebruch needs a >= 0");
  StackyFan f;
  f.dim = 2;
  f.name = "hirzebruch(" + std::to_string(a) + ")";
  f.rays = {{1, 0}, {0, 1}, {-1, a}, {0, -1}};
  f.max_cones = {{0, 1}, {1, 2}, {2, 3}, {0, 3}};
  return f;
}

/// Weighted projective line P(a:b): N = Z with rays b and -a, so E_0 and E_1
/// have degrees a and b.
inline StackyFan stacky_p1(int a, int b) {
  if (a <= 0 || b <= 0) throw std::invalid_argument("stacky_p1 needs positive weights");
  if (std::gcd(a, b) != 1) throw std::invalid_argument("stacky_p1 needs coprime weights");
  StackyFan f;
  f.dim = 1;
  f.name = "stacky_p1(" + std::to_string(a) + "," + std::to_string(b) + ")";
  f.rays = {{b}, {-a}};
  f.max_cones = {{0}, {1}};
  return f;
}

namespace detail {

class BuiltinParser {
 public:
  explicit BuiltinParser(std::string text) : s_(std::move(text)) {}

  StackyFan parse() {
    StackyFan f = expr();
    skip_ws();
    if (pos_ != s_.size()) fail("trailing input");
    return f;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw std::invalid_argument("cannot parse builtin fan '" + s_ + "': " + why);
  }
  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  std::string ident() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    return s_.substr(start, pos_ - start);
  }
  int integer() {
    skip_ws();
    std::size_t start = pos_;
    if (pos_ < s_.size() && s_[pos_] == '-') ++pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected integer");
    return std::stoi(s_.substr(start, pos_ - start));
  }

  StackyFan expr() {
    StackyFan f = atom();
    while (eat('x') || eat('*')) f = product(f, atom());
    return f;
  }

  StackyFan atom() {
    skip_ws();
    // Shorthands: P1, P2, ...
    if (pos_ + 1 < s_.size() && s_[pos_] == 'P' && std::isdigit(static_cast<unsigned char>(s_[pos_ + 1]))) {
      ++pos_;
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      return projective_space(std::stoi(s_.substr(start, pos_ - start)));
    }
    const std::string name = ident();
    if (name.empty()) fail("expected a fan name");
    if (!eat('(')) fail("expected '(' after " + name);
    StackyFan out;
    if (name == "projective_space") {
      out = projective_space(integer());
    } else if (name == "hirzebruch") {
      out = hirzebruch(integer());
    } else if (name == "stacky_p1") {
      const int a = integer();
      if (!eat(',')) fail("expected ','");
      out = stacky_p1(a, integer());
    } else if (name == "product") {
      StackyFan a = expr();
      if (!eat(',')) fail("expected ','");
      out = product(a, expr());
    } else {
      fail("unknown builtin '" + name + "'");
    }
    if (!eat(')')) fail("expected ')'");
    return out;
  }

  std::string s_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses a builtin fan expression such as "product(stacky_p1(2,3),P1)",
/// "hirzebruch(1)" or "P1xP1".
inline StackyFan builtin(const std::string& spec) {
  StackyFan f = detail::BuiltinParser(spec).parse();
  require_valid(f);
  return f;
}

/// The fans the test and acceptance suites call "every builtin fan".
inline std::vector<StackyFan> builtin_catalog() {
  StackyFan torsion;
  torsion.dim = 1;
  torsion.name = "torsion_p1";
  torsion.rays = {{2}, {-2}};
  torsion.max_cones = {{0}, {1}};
  return {
      projective_space(1),
      projective_space(2),
      projective_space(3),
      product(projective_space(1), projective_space(1)),
      hirzebruch(0),
      hirzebruch(1),
      hirzebruch(2),
      hirzebruch(3),
      stacky_p1(2, 3),
      stacky_p1(1, 2),
      product(stacky_p1(2, 3), projective_space(1)),
      product(projective_space(2), projective_space(1)),
      product(product(projective_space(1), projective_space(1)), projective_space(1)),
      torsion,
  };
}

// ---------------------------------------------------------------------------
// JSON fan files

inline StackyFan fan_from_json(const nlohmann::json& j) {
  auto integer_of = [](const nlohmann::json& v) -> Integer {
    if (v.is_number_integer()) {
      return v.is_number_unsigned() ? Integer(std::to_string(v.get<std::uint64_t>()))
                                    : Integer(std::to_string(v.get<std::int64_t>()));
    }
    if (v.is_string()) {
      const auto s = v.get<std::string>();
      Integer z;
      if (z.set_str(s, 10) != 0) throw InvalidFanError("not an integer: " + s);
      return z;
    }
    throw InvalidFanError("fan file entries must be integers, got " + v.dump());
  };
  if (!j.is_object()) throw InvalidFanError("fan file must hold a JSON object");
  for (const char* key : {"dim", "rays", "max_cones"})
    if (!j.contains(key)) throw InvalidFanError(std::string("fan file lacks \"") + key + "\"");
  if (!j["dim"].is_number_integer()) throw InvalidFanError("\"dim\" must be an integer");
  StackyFan f;
  f.dim = j["dim"].get<int>();
  if (!j["rays"].is_array() || !j["max_cones"].is_array())
    throw InvalidFanError("\"rays\" and \"max_cones\" must be arrays");
  for (const auto& r : j["rays"]) {
    if (!r.is_array()) throw InvalidFanError("each ray must be an array");
    IntVector v;
    for (const auto& x : r) v.push_back(integer_of(x));
    f.rays.push_back(std::move(v));
  }
  for (const auto& c : j["max_cones"]) {
    if (!c.is_array()) throw InvalidFanError("each cone must be an array");
    IndexSet s;
    for (const auto& x : c) {
      if (!x.is_number_integer()) throw InvalidFanError("cone indices must be integers");
      s.push_back(x.get<int>());
    }
    f.max_cones.push_back(std::move(s));
  }
  if (j.contains("name")) f.name = j["name"].get<std::string>();
  return f;
}

inline nlohmann::json fan_to_json(const StackyFan& f) {
  nlohmann::json j;
  j["dim"] = f.dim;
  j["rays"] = nlohmann::json::array();
  for (const auto& r : f.rays) {
    nlohmann::json row = nlohmann::json::array();
    for (const auto& x : r) {
      if (x.fits_slong_p())
        row.push_back(x.get_si());
      else
        row.push_back(x.get_str());
    }
    j["rays"].push_back(row);
  }
  j["max_cones"] = f.max_cones;
  if (!f.name.empty()) j["name"] = f.name;
  return j;
}

inline StackyFan load_fan_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidFanError("cannot open fan file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidFanError("fan file " + path + " is not valid JSON: " + e.what());
  }
  StackyFan f = fan_from_json(j);
  if (f.name.empty()) f.name = path;
  return f;
}

}  // namespace immaculatum
