#pragma once

// JSON serialization of computation results.
//
// Integers become JSON numbers when they fit in 64 bits and decimal strings
// otherwise; non-integral rationals are strings "p/q".

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "immaculatum/asymptotics.hpp"
#include "immaculatum/cohomology.hpp"
#include "immaculatum/homology.hpp"
#include "immaculatum/picard.hpp"
#include "immaculatum/polyhedra.hpp"

namespace immaculatum::report {

using nlohmann::json;

inline json to_json(const Integer& z) {
  if (z.fits_slong_p()) return z.get_si();
  return z.get_str();
}

inline json to_json(const Rational& q) {
  if (q.get_den() == 1) return to_json(Integer(q.get_num()));
  return q.get_str();
}

template <typename T>
json to_json(const std::vector<T>& v) {
  json out = json::array();
  for (const auto& x : v) out.push_back(to_json(x));
  return out;
}

inline json index_set(const IndexSet& s) { return json(s); }

inline json divisor_class(const PicardData& pic, const DivisorClass& cls) {
  return json{{"free", to_json(cls.free)}, {"torsion", to_json(cls.torsion)},
              {"divisor_rep", to_json(pic.representative(cls))}};
}

inline json classes(const PicardData& pic, const std::vector<DivisorClass>& list) {
  json out = json::array();
  for (const auto& c : list) out.push_back(divisor_class(pic, c));
  return out;
}

inline json validation(const ValidationReport& rep) {
  json v = json::array();
  for (const auto& x : rep.violations)
    v.push_back(json{{"kind", to_string(x.kind)}, {"indices", x.indices}, {"message", x.message}});
  return json{{"ok", rep.ok()}, {"violations", v}};
}

inline json picard(const PicardData& pic) {
  return json{{"n", pic.n},
              {"d", pic.d},
              {"rank", pic.rank()},
              {"torsion_invariants", to_json(pic.torsion_invariants())},
              {"E", classes(pic, pic.e_classes)},
              {"canonical", divisor_class(pic, canonical_class(pic))}};
}

inline json homology(const HomologyRanks& r) {
  json out = json::array();
  for (auto x : r.ranks) out.push_back(x);
  return out;
}

inline json tempting(const TemptingCatalog& cat) {
  json sets = json::array();
  for (const auto& e : cat.entries)
    sets.push_back(json{{"set", e.set}, {"reduced_homology_from_degree_-1", homology(e.ranks)}});
  return json{{"count", cat.entries.size()}, {"sets", sets}};
}

inline json cone(const Cone& c) {
  json gens = json::array();
  for (const auto& g : c.generators) gens.push_back(to_json(g));
  json facets = json::array();
  for (const auto& f : c.facets) facets.push_back(to_json(f));
  json eqs = json::array();
  for (const auto& e : c.equations) eqs.push_back(to_json(e));
  return json{{"generators", gens},       {"facets", facets},
              {"equations", eqs},         {"dimension", c.dimension},
              {"lineality_dim", c.lineality_dim}, {"strongly_convex", is_strongly_convex(c)}};
}

inline json forbidden(const PicardData& pic, const ForbiddenConeData& fc, bool vertex_ok) {
  return json{{"set", fc.set},
              {"q", divisor_class(pic, fc.q_class)},
              {"q_real", to_json(fc.q_real.coords)},
              {"cone", cone(fc.cone)},
              {"full_dimensional", fc.full_dim},
              {"vertex_check", vertex_ok}};
}

inline json cohomology_vector(const CohomologyVector& v) { return to_json(v.h); }

inline json infinity(const InfinityReport& rep, bool verified) {
  json out{{"decision", rep.decision == InfinityDecision::infinite ? "INFINITE" : "FINITE"},
           {"hyperplanes", json::array()},
           {"cells_examined", rep.cells_examined},
           {"verified", verified}};
  for (const auto& h : rep.hyperplanes) out["hyperplanes"].push_back(to_json(h));
  if (rep.witness) out["witness"] = to_json(rep.witness->coords);
  json cert = json::array();
  for (const auto& e : rep.certificate)
    cert.push_back(json{{"signs", e.signs},
                        {"sample", to_json(e.sample)},
                        {"covers_sample", e.covers_sample},
                        {"covers_antipode", e.covers_antipode}});
  out["certificate"] = cert;
  return out;
}

inline json directions(const std::vector<Direction>& ds) {
  json out = json::array();
  for (const auto& d : ds) out.push_back(to_json(d.coords));
  return out;
}

inline json imm_infinity(const ImmInfinityDescription& desc) {
  json cones = json::array();
  for (const auto& c : desc.cones) {
    json facets = json::array();
    for (const auto& f : c.facets) facets.push_back(to_json(f));
    json gens = json::array();
    for (const auto& g : c.generators) gens.push_back(to_json(g));
    cones.push_back(json{{"set", c.set}, {"facets", facets}, {"generators", gens}});
  }
  json arcs = json::array();
  for (const auto& a : desc.arcs) arcs.push_back(json{{"from", to_json(a.from.coords)}, {"to", to_json(a.to.coords)}});
  return json{{"rank", desc.rank},
              {"empty", desc.empty()},
              {"whole", desc.whole},
              {"isolated", directions(desc.isolated)},
              {"arcs", arcs},
              {"sample_members", directions(desc.sample_members)},
              {"cones", cones}};
}

inline json zonotope(const PicardData& pic, const Zonotope& z) {
  json verts = json::array();
  for (const auto& v : z.vertices) verts.push_back(to_json(v));
  json facets = json::array();
  for (const auto& f : z.facets)
    facets.push_back(json{{"normal", to_json(f.normal)}, {"lower", to_json(f.lower)}, {"upper", to_json(f.upper)}});
  return json{{"center", to_json(z.center)},
              {"vertices", verts},
              {"facets", facets},
              {"interior_classes", classes(pic, zonotope_classes(pic, ZonotopeMode::interior))},
              {"half_open_classes", classes(pic, zonotope_classes(pic, ZonotopeMode::half_open))}};
}

}  // namespace immaculatum::report
