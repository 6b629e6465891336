// Fans, Picard groups and reduced homology.

#include <gtest/gtest.h>

#include "immaculatum/fan.hpp"
#include "immaculatum/homology.hpp"
#include "immaculatum/picard.hpp"

using namespace immaculatum;

namespace {

StackyFan torsion_fan() {
  StackyFan f;
  f.dim = 1;
  f.rays = {{2}, {-2}};
  f.max_cones = {{0}, {1}};
  return f;
}

SimplicialComplex complex_of(std::initializer_list<IndexSet> maximal) {
  SimplicialComplex cx;
  cx.faces.insert(IndexSet{});
  for (const auto& m : maximal) {
    for (int v : m) cx.vertices.push_back(v);
    const std::size_t k = m.size();
    for (std::size_t mask = 1; mask < (std::size_t{1} << k); ++mask) {
      IndexSet f;
      for (std::size_t b = 0; b < k; ++b)
        if (mask >> b & 1) f.push_back(m.begin()[b]);
      cx.faces.insert(f);
    }
  }
  std::sort(cx.vertices.begin(), cx.vertices.end());
  cx.vertices.erase(std::unique(cx.vertices.begin(), cx.vertices.end()), cx.vertices.end());
  return cx;
}

}  // namespace

TEST(Validate, BuiltinsAreValid) {
  for (const auto& f : builtin_catalog()) EXPECT_TRUE(validate(f).ok()) << f.name;
}

TEST(Validate, MissingConeBreaksWallCondition) {
  StackyFan f = projective_space(1);
  f.max_cones.pop_back();
  const auto rep = validate(f);
  EXPECT_FALSE(rep.ok());
  EXPECT_TRUE(rep.has(ViolationKind::wall_condition));
}

TEST(Validate, ParallelRays) {
  StackyFan f;
  f.dim = 2;
  f.rays = {{1, 0}, {2, 0}, {0, 1}};
  f.max_cones = {{0, 2}, {1, 2}};
  EXPECT_TRUE(validate(f).has(ViolationKind::parallel_rays));
}

TEST(Validate, SingularAndZeroRays) {
  StackyFan f;
  f.dim = 2;
  f.rays = {{1, 0}, {0, 0}, {-1, 0}};
  f.max_cones = {{0, 1}, {1, 2}};
  const auto rep = validate(f);
  EXPECT_TRUE(rep.has(ViolationKind::zero_ray));
  EXPECT_THROW(require_valid(f), InvalidFanError);
}

TEST(Validate, OverlappingConesOnSameSide) {
  // Two cones on the same side of the wall through (0,1).
  StackyFan f;
  f.dim = 2;
  f.rays = {{1, 0}, {0, 1}, {1, 1}, {-1, 0}, {0, -1}};
  f.max_cones = {{0, 1}, {1, 2}, {1, 3}, {3, 4}, {0, 4}};
  EXPECT_FALSE(validate(f).ok());
}

TEST(Complexes, FullComplexes) {
  const auto p1 = full_complex(projective_space(1));
  EXPECT_EQ(p1.faces, (std::set<IndexSet>{{}, {0}, {1}}));
  const auto p2 = full_complex(projective_space(2));
  EXPECT_EQ(p2.faces, (std::set<IndexSet>{{}, {0}, {1}, {2}, {0, 1}, {0, 2}, {1, 2}}));
  const auto sq = full_complex(builtin("P1xP1")).faces_by_dimension();
  EXPECT_EQ(sq[1].size(), 4u);
  EXPECT_EQ(sq[2].size(), 4u);
  EXPECT_EQ(sq.size(), 3u);
}

TEST(Complexes, Restrictions) {
  const auto f = builtin("P1xP1");
  EXPECT_EQ(restricted_complex(f, {0, 1}).faces, (std::set<IndexSet>{{}, {0}, {1}}));
  EXPECT_EQ(restricted_complex(f, {}).faces, (std::set<IndexSet>{{}}));
  EXPECT_EQ(restricted_complex(f, {0, 1, 2, 3}).faces, full_complex(f).faces);
  EXPECT_THROW(restricted_complex(f, {7}), std::out_of_range);
}

TEST(Builtins, Parser) {
  EXPECT_EQ(builtin("stacky_p1(1,1)").rays, projective_space(1).rays);
  const auto x = builtin("product(stacky_p1(2,3),projective_space(1))");
  EXPECT_EQ(x.rays, (std::vector<IntVector>{{3, 0}, {-2, 0}, {0, 1}, {0, -1}}));
  EXPECT_EQ(builtin("P1xP1").rays, builtin("P1*P1").rays);
  EXPECT_EQ(builtin("P2").dim, 2);
  EXPECT_THROW(builtin("nope"), std::invalid_argument);
  EXPECT_THROW(builtin("stacky_p1(2,4)"), std::invalid_argument);
}

TEST(Builtins, HirzebruchZeroIsP1xP1) {
  // Same rays up to order; cones correspond under the matching.
  const auto h = hirzebruch(0), p = builtin("P1xP1");
  std::vector<int> to_p(4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (h.rays[static_cast<std::size_t>(i)] == p.rays[static_cast<std::size_t>(j)]) to_p[static_cast<std::size_t>(i)] = j;
  std::set<IndexSet> mapped, want(p.max_cones.begin(), p.max_cones.end());
  for (const auto& c : h.max_cones) {
    IndexSet m;
    for (int i : c) m.push_back(to_p[static_cast<std::size_t>(i)]);
    std::sort(m.begin(), m.end());
    mapped.insert(m);
  }
  EXPECT_EQ(mapped, want);
}

TEST(FanJson, RoundTripAndIntegerOnly) {
  for (const auto& f : builtin_catalog()) {
    const auto g = fan_from_json(fan_to_json(f));
    EXPECT_EQ(g.rays, f.rays);
    EXPECT_EQ(g.max_cones, f.max_cones);
  }
  EXPECT_THROW(fan_from_json(nlohmann::json::parse(R"({"dim":1,"rays":[[1.5],[-1]],"max_cones":[[0],[1]]})")),
               InvalidFanError);
  EXPECT_THROW(fan_from_json(nlohmann::json::parse(R"({"dim":1,"rays":[[1],[-1]]})")), InvalidFanError);
}

TEST(Picard, ProjectiveLine) {
  const auto pic = picard_group(projective_space(1));
  EXPECT_EQ(pic.rank(), 1u);
  EXPECT_FALSE(pic.has_torsion());
  EXPECT_EQ(pic.e_classes[0], pic.e_classes[1]);
  EXPECT_EQ(class_of(pic, {0, 0}), pic.zero());
  EXPECT_EQ(class_of(pic, {1, 0}), class_of(pic, {0, 1}));
  EXPECT_EQ(canonical_class(pic), pic.multiply(pic.e_classes[0], -2));
  const auto minus_one = pic.make_class({-1});
  EXPECT_EQ(serre_dual(pic, minus_one), minus_one);
}

TEST(Picard, WeightedLine) {
  const auto pic = picard_group(stacky_p1(2, 3));
  EXPECT_EQ(pic.rank(), 1u);
  EXPECT_FALSE(pic.has_torsion());
  const auto g = pic.make_class({1});
  EXPECT_EQ(pic.multiply(pic.e_classes[0], 3), pic.multiply(pic.e_classes[1], 2));
  // Degrees 2 and 3 up to the sign of the generator.
  const Integer e0 = pic.e_classes[0].free[0], e1 = pic.e_classes[1].free[0];
  EXPECT_TRUE((e0 == 2 && e1 == 3) || (e0 == -2 && e1 == -3));
  EXPECT_EQ(canonical_class(pic), pic.multiply(g, e0 > 0 ? -5 : 5));
}

TEST(Picard, Torsion) {
  const auto pic = picard_group(torsion_fan());
  EXPECT_EQ(pic.rank(), 1u);
  EXPECT_EQ(pic.torsion_invariants(), (std::vector<Integer>{2}));
  const auto t = pic.make_class({0}, {1});
  EXPECT_EQ(real_image(pic, t).coords, (RatVector{0}));
  EXPECT_EQ(pic.add(t, t), pic.zero());
  EXPECT_EQ(pic.torsion_elements().size(), 2u);
}

TEST(Picard, ProjectivePlaneAndProducts) {
  const auto p2 = picard_group(projective_space(2));
  EXPECT_EQ(class_of(p2, {1, 1, 1}), p2.multiply(class_of(p2, {1, 0, 0}), 3));
  EXPECT_EQ(canonical_class(p2), p2.make_class({-3}));
  const auto pp = picard_group(builtin("P1xP1"));
  EXPECT_EQ(real_image(pp, pp.e_classes[0]).coords, (RatVector{1, 0}));
  EXPECT_EQ(serre_dual(pp, pp.make_class({4, -1})), pp.make_class({-6, -1}));
}

TEST(Picard, ClassOfRepresentativeIsIdentity) {
  for (const auto& f : builtin_catalog()) {
    const auto pic = picard_group(f);
    for (const auto& t : pic.torsion_elements())
      for (int a = -3; a <= 3; ++a) {
        IntVector free(pic.rank(), Integer(a));
        if (!free.empty()) free[0] = -a + 1;
        const auto cls = pic.make_class(free, t);
        EXPECT_EQ(class_of(pic, pic.representative(cls)), cls) << f.name;
      }
    // Principal divisors are trivial.
    for (int k = 0; k < f.dim; ++k) {
      IntVector c;
      for (const auto& v : f.rays) c.push_back(v[static_cast<std::size_t>(k)]);
      EXPECT_EQ(class_of(pic, c), pic.zero()) << f.name;
    }
  }
}

TEST(Homology, SmallComplexes) {
  SimplicialComplex empty;
  empty.faces.insert(IndexSet{});
  auto r = reduced_homology_ranks(empty);
  EXPECT_EQ(r.at(-1), 1u);
  EXPECT_EQ(r.at(0), 0u);

  r = reduced_homology_ranks(complex_of({{0}}));
  EXPECT_FALSE(r.nonzero());

  r = reduced_homology_ranks(complex_of({{0, 1}, {1, 2}, {0, 2}}));
  EXPECT_EQ(r.at(1), 1u);
  EXPECT_EQ(r.at(0), 0u);
  EXPECT_EQ(r.at(-1), 0u);

  r = reduced_homology_ranks(complex_of({{0}, {1}, {2}}));
  EXPECT_EQ(r.at(0), 2u);
}

TEST(Homology, EulerIdentity) {
  // Reduced Euler characteristic = alternating sum of reduced Betti numbers.
  for (const auto& f : builtin_catalog()) {
    const int n = f.ray_count();
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
      IndexSet s;
      for (int i = 0; i < n; ++i)
        if (mask >> i & 1) s.push_back(i);
      const auto cx = restricted_complex(f, s);
      long chi = 0;
      for (const auto& face : cx.faces) chi += (face.size() % 2 == 0) ? -1 : 1;  // dim = size - 1
      const auto r = reduced_homology_ranks(cx);
      long alt = 0;
      for (int deg = -1; deg + 1 < static_cast<int>(r.ranks.size()); ++deg)
        alt += (deg % 2 == 0 ? 1 : -1) * static_cast<long>(r.at(deg));
      EXPECT_EQ(chi, alt) << f.name << " " << format_index_set(s);
    }
  }
}

TEST(Tempting, Examples) {
  EXPECT_TRUE(is_tempting(projective_space(2), {}));
  EXPECT_TRUE(is_tempting(builtin("P1xP1"), {0, 1}));
  EXPECT_FALSE(is_tempting(projective_space(2), {0, 1}));
  EXPECT_EQ(tempting_sets(projective_space(1)).sets(), (std::vector<IndexSet>{{}, {0, 1}}));
  EXPECT_EQ(tempting_sets(builtin("P1xP1")).sets(), (std::vector<IndexSet>{{}, {0, 1}, {2, 3}, {0, 1, 2, 3}}));
  EXPECT_EQ(tempting_sets(hirzebruch(1)).sets(), (std::vector<IndexSet>{{}, {0, 2}, {1, 3}, {0, 1, 2, 3}}));
}

TEST(Tempting, ComplementSymmetryAndSphere) {
  for (const auto& f : builtin_catalog()) {
    const auto cat = tempting_sets(f);
    const int n = f.ray_count();
    IndexSet all;
    for (int i = 0; i < n; ++i) all.push_back(i);
    ASSERT_NE(cat.find(all), nullptr) << f.name;
    EXPECT_EQ(cat.find(all)->ranks.at(f.dim - 1), 1u) << f.name;
    for (const auto& e : cat.entries) {
      const auto* c = cat.find(complement(e.set, n));
      ASSERT_NE(c, nullptr) << f.name;
      // Alexander duality on the sphere: H~_i(I) = H~_{d-2-i}(I^c).
      for (int i = -1; i <= f.dim - 1; ++i) EXPECT_EQ(e.ranks.at(i), c->ranks.at(f.dim - 2 - i)) << f.name;
    }
  }
}

TEST(Tempting, LimitIsEnforced) {
  EXPECT_THROW(tempting_sets(builtin("P1xP1xP1"), 4), LimitExceededError);
}
