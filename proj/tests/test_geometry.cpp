// Cones, arrangements, zonotopes and the asymptotic decision procedure.

#include <gtest/gtest.h>

#include <random>

#include "immaculatum/asymptotics.hpp"
#include "immaculatum/polyhedra.hpp"

using namespace immaculatum;

namespace {

struct FanData {
  StackyFan fan;
  PicardData pic;
  TemptingCatalog cat;
  explicit FanData(StackyFan f) : fan(std::move(f)), pic(picard_group(fan)), cat(tempting_sets(fan)) {}
};

RatVector rv(std::initializer_list<long> xs) {
  RatVector v;
  for (long x : xs) v.emplace_back(x);
  return v;
}

// x lies in cone(gens) iff x = sum lambda_j g_j with lambda >= 0 is feasible.
bool in_cone_by_lp(const std::vector<RatVector>& gens, const RatVector& x) {
  LinearSystem s(gens.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    RatVector row;
    for (const auto& g : gens) row.push_back(g[k]);
    s.add(row, Relation::equal, x[k]);
  }
  for (std::size_t j = 0; j < gens.size(); ++j) {
    RatVector e(gens.size(), Rational(0));
    e[j] = 1;
    s.add(e, Relation::greater_equal, 0);
  }
  return is_feasible(s);
}

// Facet g is irredundant iff dropping it admits a point of the span with g.x < 0.
bool facet_irredundant(const Cone& c, std::size_t which) {
  LinearSystem s(c.ambient);
  for (const auto& h : c.equations) s.add(h, Relation::equal, 0);
  for (std::size_t k = 0; k < c.facets.size(); ++k)
    if (k != which) s.add(c.facets[k], Relation::greater_equal, Integer(0));
  s.add(negated(c.facets[which]), Relation::greater, Integer(0));
  return is_feasible(s);
}

}  // namespace

TEST(Cones, Examples) {
  auto q = cone_from_generators({rv({1, 0}), rv({0, 1})}, 2);
  EXPECT_EQ(q.facets, (std::vector<IntVector>{{0, 1}, {1, 0}}));
  EXPECT_TRUE(is_strongly_convex(q));
  EXPECT_TRUE(interior_contains(q, rv({1, 1})));
  EXPECT_FALSE(interior_contains(q, rv({1, 0})));

  auto h = cone_from_generators({rv({1, 0}), rv({-1, 0}), rv({0, 1})}, 2);
  EXPECT_EQ(h.facets, (std::vector<IntVector>{{0, 1}}));
  EXPECT_EQ(h.lineality_dim, 1u);
  EXPECT_FALSE(is_strongly_convex(h));

  auto w = cone_from_generators({rv({-1, 0}), rv({1, 1}), rv({0, 1})}, 2);
  EXPECT_EQ(w.facets, (std::vector<IntVector>{{-1, 1}, {0, 1}}));

  auto ray = cone_from_generators({rv({1, 0})}, 2);
  EXPECT_EQ(ray.dimension, 1u);
  EXPECT_FALSE(interior_contains(ray, rv({1, 0})));
}

TEST(Cones, RandomConesMatchLp) {
  std::mt19937 rng(17);
  std::uniform_int_distribution<int> coef(-3, 3);
  for (int t = 0; t < 60; ++t) {
    const std::size_t dim = 2 + static_cast<std::size_t>(t % 2);
    std::vector<RatVector> gens;
    for (int k = 0; k < 2 + t % 4; ++k) {
      RatVector g(dim);
      for (auto& x : g) x = coef(rng);
      if (!is_zero(g)) gens.push_back(g);
    }
    if (gens.empty()) continue;
    const Cone c = cone_from_generators(gens, dim);
    for (const auto& g : gens) EXPECT_TRUE(c.contains(g));
    for (std::size_t k = 0; k < c.facets.size(); ++k) EXPECT_TRUE(facet_irredundant(c, k));
    for (int p = 0; p < 10; ++p) {
      RatVector x(dim);
      for (auto& v : x) v = coef(rng);
      EXPECT_EQ(c.contains(x), in_cone_by_lp(gens, x));
    }
  }
}

TEST(Arrangement, CellsOfCoordinateLines) {
  const auto cells = arrangement_cells({{1, 0}, {0, 1}}, 2, 1000);
  // 4 open quadrants and 4 open half-axes; the origin is excluded.
  EXPECT_EQ(cells.size(), 8u);
  const auto full = arrangement_cells({{1, 0}, {0, 1}}, 2, 1000, true);
  EXPECT_EQ(full.size(), 4u);
  for (const auto& c : cells)
    for (std::size_t k = 0; k < 2; ++k) {
      const IntVector h = k == 0 ? IntVector{1, 0} : IntVector{0, 1};
      EXPECT_EQ(sign_of(dot(c.sample, h)), c.signs[k]);
    }
}

TEST(ForbiddenCones, Examples) {
  FanData p1(projective_space(1));
  auto fc = forbidden_cone(p1.fan, p1.pic, {});
  EXPECT_EQ(fc.q_class, p1.pic.zero());
  EXPECT_TRUE(fc.cone.contains(rv({1})));
  EXPECT_FALSE(fc.cone.contains(rv({-1})));
  fc = forbidden_cone(p1.fan, p1.pic, {0, 1});
  EXPECT_EQ(fc.q_class, p1.pic.make_class({-2}));
  EXPECT_TRUE(fc.cone.contains(rv({-1})));

  FanData pp(builtin("P1xP1"));
  fc = forbidden_cone(pp.fan, pp.pic, {0, 1});
  EXPECT_EQ(fc.q_real.coords, rv({-2, 0}));
  EXPECT_TRUE(interior_contains(fc.cone, rv({-1, 1})));
  EXPECT_EQ(fc.cone.facets, (std::vector<IntVector>{{-1, 0}, {0, 1}}));
}

TEST(ForbiddenCones, TemptingConesAreStronglyConvex) {
  for (const auto& f : builtin_catalog()) {
    FanData fd(f);
    for (const auto& fc : forbidden_cones(fd.fan, fd.pic, fd.cat)) EXPECT_TRUE(is_strongly_convex(fc.cone)) << f.name;
  }
}

TEST(ForbiddenCones, OppositeSetsGiveOppositeCones) {
  for (const auto& f : builtin_catalog()) {
    FanData fd(f);
    for (const auto& e : fd.cat.entries) {
      const auto a = forbidden_cone(fd.fan, fd.pic, e.set);
      const auto b = forbidden_cone(fd.fan, fd.pic, complement(e.set, f.ray_count()));
      for (const auto& g : a.cone.generators) EXPECT_TRUE(b.cone.contains(negated(g))) << f.name;
    }
  }
}

TEST(Zonotope, ProjectiveLine) {
  FanData p1(projective_space(1));
  const auto z = zonotope(p1.pic);
  EXPECT_EQ(z.vertices, (std::vector<RatVector>{rv({-2}), rv({0})}));
  EXPECT_TRUE(membership(z, rv({-1}), ZonotopeMode::interior));
  EXPECT_FALSE(membership(z, rv({0}), ZonotopeMode::interior));
  EXPECT_TRUE(membership(z, rv({0}), ZonotopeMode::half_open));
  EXPECT_FALSE(membership(z, rv({-2}), ZonotopeMode::half_open));
  EXPECT_TRUE(membership(z, rv({-2}), ZonotopeMode::closed));
  EXPECT_EQ(zonotope_classes(p1.pic, ZonotopeMode::interior), (std::vector<DivisorClass>{p1.pic.make_class({-1})}));
  EXPECT_THROW(zonotope_classes(p1.pic, ZonotopeMode::closed), std::invalid_argument);
}

TEST(Zonotope, SquareAndTriangle) {
  FanData pp(builtin("P1xP1"));
  const auto z = zonotope(pp.pic);
  EXPECT_EQ(z.vertices.size(), 4u);
  EXPECT_EQ(zonotope_classes(pp.pic, ZonotopeMode::interior), (std::vector<DivisorClass>{pp.pic.make_class({-1, -1})}));
  FanData p2(projective_space(2));
  EXPECT_EQ(zonotope_classes(p2.pic, ZonotopeMode::half_open),
            (std::vector<DivisorClass>{p2.pic.make_class({-2}), p2.pic.make_class({-1}), p2.pic.make_class({0})}));
}

TEST(Zonotope, VertexChecks) {
  FanData p1(projective_space(1));
  EXPECT_TRUE(vertex_check(p1.fan, p1.pic, {0, 1}));
  FanData pp(builtin("P1xP1"));
  EXPECT_TRUE(vertex_check(pp.fan, pp.pic, {0, 1}));
  EXPECT_FALSE(vertex_check_details(pp.fan, pp.pic, {0}).is_vertex);
  for (const auto& f : builtin_catalog()) {
    FanData fd(f);
    for (const auto& e : fd.cat.entries) EXPECT_TRUE(vertex_check(fd.fan, fd.pic, e.set)) << f.name;
  }
}

TEST(Zonotope, FacetsContainVertices) {
  for (const auto& f : builtin_catalog()) {
    FanData fd(f);
    const auto z = zonotope(fd.pic);
    for (const auto& v : z.vertices) EXPECT_TRUE(membership(z, v, ZonotopeMode::closed)) << f.name;
    EXPECT_TRUE(membership(z, z.center, ZonotopeMode::interior)) << f.name;
  }
}

TEST(Infinity, DecisionExamples) {
  FanData p1(projective_space(1));
  auto rep = decide_infinite(p1.fan, p1.pic, p1.cat);
  EXPECT_EQ(rep.decision, InfinityDecision::finite);
  EXPECT_TRUE(verify_infinity_report(p1.fan, p1.pic, p1.cat, rep));

  FanData pp(builtin("P1xP1"));
  rep = decide_infinite(pp.fan, pp.pic, pp.cat);
  ASSERT_EQ(rep.decision, InfinityDecision::infinite);
  EXPECT_TRUE(rep.witness->coords == (IntVector{1, 0}) || rep.witness->coords == (IntVector{0, 1}));
  EXPECT_TRUE(verify_infinity_report(pp.fan, pp.pic, pp.cat, rep));

  FanData h1(hirzebruch(1));
  rep = decide_infinite(h1.fan, h1.pic, h1.cat);
  ASSERT_EQ(rep.decision, InfinityDecision::infinite);
  const auto desc = imm_infinity_description(h1.fan, h1.pic, h1.cat);
  ASSERT_EQ(desc.isolated.size(), 1u);
  EXPECT_EQ(desc.isolated[0], *rep.witness);
}

TEST(Infinity, Membership) {
  FanData pp(builtin("P1xP1"));
  EXPECT_TRUE(imm_infinity_contains(pp.fan, pp.pic, pp.cat, Direction::from(IntVector{1, 0})));
  EXPECT_TRUE(imm_infinity_contains(pp.fan, pp.pic, pp.cat, Direction::from(IntVector{0, -3})));
  EXPECT_FALSE(imm_infinity_contains(pp.fan, pp.pic, pp.cat, Direction::from(IntVector{1, 1})));
  FanData p1(projective_space(1));
  EXPECT_FALSE(imm_infinity_contains(p1.fan, p1.pic, p1.cat, Direction::from(IntVector{1})));
}

TEST(Infinity, Descriptions) {
  FanData pp(builtin("P1xP1"));
  auto desc = imm_infinity_description(pp.fan, pp.pic, pp.cat);
  EXPECT_EQ(desc.isolated, (std::vector<Direction>{Direction{{0, 1}}, Direction{{1, 0}}}));
  EXPECT_TRUE(desc.arcs.empty());
  FanData p2(projective_space(2));
  EXPECT_TRUE(imm_infinity_description(p2.fan, p2.pic, p2.cat).empty());
}

TEST(Infinity, DescriptionAgreesWithPointwiseMembership) {
  // Sample rational directions on the circle; membership must match the
  // rank-2 description (isolated points or closed arcs).
  for (const auto& f : builtin_catalog()) {
    FanData fd(f);
    if (fd.pic.rank() != 2) continue;
    const auto desc = imm_infinity_description(fd.fan, fd.pic, fd.cat);
    for (int a = -5; a <= 5; ++a)
      for (int b = -5; b <= 5; ++b) {
        if (a == 0 && b == 0) continue;
        const Direction w = Direction::from(IntVector{a, b});
        bool described = desc.whole;
        for (const auto& d : desc.isolated) described = described || d == w;
        for (const auto& arc : desc.arcs) {
          // w or -w between from and to counterclockwise (closed).
          for (int s : {1, -1}) {
            const IntVector v{Integer(s * w.coords[0]), Integer(s * w.coords[1])};
            const auto& p = arc.from.coords;
            const auto& q = arc.to.coords;
            const Integer cpv = p[0] * v[1] - p[1] * v[0], cvq = v[0] * q[1] - v[1] * q[0];
            const Integer cpq = p[0] * q[1] - p[1] * q[0];
            const bool inside = cpq >= 0 ? (cpv >= 0 && cvq >= 0) : (cpv >= 0 || cvq >= 0);
            described = described || inside;
          }
        }
        EXPECT_EQ(described, imm_infinity_contains(fd.fan, fd.pic, fd.cat, w)) << f.name << " " << a << "," << b;
      }
  }
}

TEST(Infinity, InteriorClass) {
  FanData p1(projective_space(1));
  EXPECT_EQ(interior_class(p1.fan, p1.pic), p1.pic.make_class({-1}));
  FanData pp(builtin("P1xP1"));
  EXPECT_EQ(interior_class(pp.fan, pp.pic), pp.pic.make_class({-1, -1}));
  FanData p2(projective_space(2));
  const auto z = zonotope(p2.pic);
  EXPECT_TRUE(membership(z, real_image(p2.pic, interior_class(p2.fan, p2.pic)).coords, ZonotopeMode::interior));
}

TEST(Infinity, WitnessFamilies) {
  FanData pp(builtin("P1xP1"));
  const auto fam = witness_immaculate_family(pp.fan, pp.pic, pp.cat, Direction::from(IntVector{0, 1}), 3);
  EXPECT_EQ(fam, (std::vector<DivisorClass>{pp.pic.make_class({-1, 0}), pp.pic.make_class({-1, 1}),
                                            pp.pic.make_class({-1, 2})}));
  EXPECT_THROW(witness_immaculate_family(pp.fan, pp.pic, pp.cat, Direction::from(IntVector{1, 1}), 3),
               std::invalid_argument);

  FanData h1(hirzebruch(1));
  const auto w = *decide_infinite(h1.fan, h1.pic, h1.cat).witness;
  const auto line = witness_immaculate_family(h1.fan, h1.pic, h1.cat, w, 3);
  ASSERT_EQ(line.size(), 3u);
  const CohomologyEngine eng(h1.fan, h1.pic, h1.cat);
  for (std::size_t k = 0; k + 1 < line.size(); ++k) {
    EXPECT_EQ(h1.pic.subtract(line[k + 1], line[k]), h1.pic.make_class(w.coords));
    EXPECT_TRUE(eng.is_immaculate(line[k]));
  }

  // On the weighted product the family through the interior class is
  // immaculate and collinear along (0,1).
  FanData x(builtin("product(stacky_p1(2,3),P1)"));
  const auto fx = witness_immaculate_family(x.fan, x.pic, x.cat, Direction::from(IntVector{0, 1}), 5);
  for (std::size_t k = 0; k + 1 < fx.size(); ++k) EXPECT_EQ(fx[k + 1].free[0], fx[k].free[0]);
}

TEST(HullCheck, Examples) {
  FanData pp(builtin("P1xP1"));
  auto hc = bw_hull_check(pp.fan, pp.pic, IntVector(4, Integer(0)));
  EXPECT_EQ(hc.hull_dim, 0u);
  EXPECT_TRUE(hc.degenerate);
  EXPECT_FALSE(hc.imm_direction.has_value());

  hc = bw_hull_check(pp.fan, pp.pic, pp.pic.representative(pp.pic.make_class({0, 1})));
  EXPECT_TRUE(hc.degenerate);
  ASSERT_TRUE(hc.imm_direction.has_value());
  EXPECT_TRUE(imm_infinity_contains(pp.fan, pp.pic, pp.cat, *hc.imm_direction));

  FanData p2(projective_space(2));
  hc = bw_hull_check(p2.fan, p2.pic, {1, 0, 0});
  EXPECT_EQ(hc.hull_dim, 2u);
  EXPECT_FALSE(hc.degenerate);
}

TEST(HullCheck, DegenerateDirectionsAreInImmInfinity) {
  std::mt19937 rng(8);
  std::uniform_int_distribution<int> coef(-3, 3);
  for (const auto& f : builtin_catalog()) {
    FanData fd(f);
    for (int t = 0; t < 40; ++t) {
      IntVector c(static_cast<std::size_t>(f.ray_count()));
      for (auto& x : c) x = coef(rng);
      const auto hc = bw_hull_check(fd.fan, fd.pic, c);
      if (hc.imm_direction)
        EXPECT_TRUE(imm_infinity_contains(fd.fan, fd.pic, fd.cat, *hc.imm_direction)) << f.name;
    }
  }
}
