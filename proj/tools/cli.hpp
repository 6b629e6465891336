#pragma once

// Command-line front end. `run` is kept free of process state so the tests
// can drive it directly.
//
// Exit codes: 0 success, 1 usage error, 2 invalid fan, 3 enumeration limit
// exceeded, 4 internal consistency or structural error.

#include <fstream>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "immaculatum/asymptotics.hpp"
#include "immaculatum/cohomology.hpp"
#include "immaculatum/fan.hpp"
#include "immaculatum/homology.hpp"
#include "immaculatum/picard.hpp"
#include "immaculatum/polyhedra.hpp"
#include "immaculatum/report.hpp"
#include "immaculatum/svg.hpp"

namespace immaculatum::cli {

enum ExitCode { kOk = 0, kUsage = 1, kInvalidFan = 2, kLimit = 3, kInternal = 4 };

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

inline Integer parse_integer(const std::string& s) {
  Integer z;
  std::string t = s;
  if (!t.empty() && t[0] == '+') t.erase(0, 1);
  if (t.empty() || z.set_str(t, 10) != 0) throw UsageError("not an integer: '" + s + "'");
  return z;
}

inline IntVector parse_int_list(const std::string& s) {
  IntVector out;
  if (s.empty()) return out;
  for (const auto& part : split(s, ',')) out.push_back(parse_integer(part));
  return out;
}

/// "lo:hi[,lo:hi...]"; a single range applies to every axis.
inline std::vector<std::pair<Integer, Integer>> parse_box(const std::string& s, std::size_t rank) {
  std::vector<std::pair<Integer, Integer>> box;
  for (const auto& part : split(s, ',')) {
    const auto ends = split(part, ':');
    if (ends.size() != 2) throw UsageError("box ranges look like lo:hi, got '" + part + "'");
    box.emplace_back(parse_integer(ends[0]), parse_integer(ends[1]));
    if (box.back().first > box.back().second) throw UsageError("empty box range '" + part + "'");
  }
  if (box.size() == 1 && rank != 1) box.assign(rank, box.front());
  if (box.size() != rank)
    throw UsageError("box has " + std::to_string(box.size()) + " ranges but Pic has rank " + std::to_string(rank));
  return box;
}

struct Options {
  std::string fan_file;
  std::string builtin_spec;
  std::string format = "text";
  std::optional<std::uint64_t> max_subsets;
  std::size_t max_cells = kDefaultCellCap;
  std::string divisor;
  std::string class_coords;
  std::string box;
  std::string direction;
  std::size_t count = 50;
  std::string out_path;
};

// Lazily computed data for one fan.
class Session {
 public:
  explicit Session(StackyFan fan, std::optional<std::uint64_t> cap) : fan_(std::move(fan)), cap_(cap) {}

  const StackyFan& fan() const { return fan_; }
  const PicardData& pic() {
    if (!pic_) pic_ = std::make_unique<PicardData>(picard_group(fan_));
    return *pic_;
  }
  const TemptingCatalog& catalog() {
    if (!catalog_) catalog_ = std::make_unique<TemptingCatalog>(tempting_sets(fan_, cap_ ? *cap_ : subset_cap()));
    return *catalog_;
  }
  const CohomologyEngine& engine() {
    if (!engine_) engine_ = std::make_unique<CohomologyEngine>(fan_, pic(), catalog());
    return *engine_;
  }

 private:
  StackyFan fan_;
  std::optional<std::uint64_t> cap_;
  std::unique_ptr<PicardData> pic_;
  std::unique_ptr<TemptingCatalog> catalog_;
  std::unique_ptr<CohomologyEngine> engine_;
};

inline DivisorClass read_class(Session& s, const Options& o) {
  if (o.divisor.empty() == o.class_coords.empty())
    throw UsageError("give exactly one of --divisor and --class");
  if (!o.divisor.empty()) {
    const IntVector c = parse_int_list(o.divisor);
    if (c.size() != static_cast<std::size_t>(s.fan().ray_count()))
      throw UsageError("--divisor needs " + std::to_string(s.fan().ray_count()) + " entries");
    return class_of(s.pic(), c);
  }
  const auto parts = split(o.class_coords, ';');
  if (parts.size() > 2) throw UsageError("--class looks like a1,...,ar[;t1,...]");
  IntVector free = parse_int_list(parts[0]);
  IntVector tors = parts.size() == 2 ? parse_int_list(parts[1]) : IntVector{};
  if (free.size() != s.pic().rank())
    throw UsageError("--class needs " + std::to_string(s.pic().rank()) + " free coordinates");
  if (!tors.empty() && tors.size() != s.pic().torsion_invariants().size())
    throw UsageError("--class torsion part has the wrong length");
  return s.pic().make_class(std::move(free), std::move(tors));
}

inline std::string text_class(const PicardData& pic, const DivisorClass& c) {
  return format_class(c) + "  rep " + format_vector(pic.representative(c));
}

inline std::string text_h(const CohomologyVector& v) {
  std::string s = "h = " + format_vector(v.h);
  return s;
}

inline std::string decision_name(InfinityDecision d) { return d == InfinityDecision::infinite ? "INFINITE" : "FINITE"; }

// Each command returns (json result, text rendering).
struct Output {
  nlohmann::json result;
  std::string text;
};

inline Output cmd_validate(Session& s) {
  const auto rep = validate(s.fan());
  std::ostringstream t;
  t << (rep.ok() ? "valid" : "invalid") << "\n";
  for (const auto& v : rep.violations) t << "  " << to_string(v.kind) << ": " << v.message << "\n";
  return {report::validation(rep), t.str()};
}

inline Output cmd_picard(Session& s) {
  const auto& pic = s.pic();
  std::ostringstream t;
  t << "rank " << pic.rank() << "\n";
  t << "torsion " << format_vector(pic.torsion_invariants()) << "\n";
  for (int i = 0; i < pic.n; ++i) t << "E" << i << " = " << format_class(pic.e_classes[static_cast<std::size_t>(i)]) << "\n";
  t << "K = " << format_class(canonical_class(pic)) << "\n";
  return {report::picard(pic), t.str()};
}

inline Output cmd_tempting(Session& s) {
  const auto& cat = s.catalog();
  std::ostringstream t;
  t << cat.entries.size() << " tempting sets\n";
  for (const auto& e : cat.entries) {
    t << "  " << format_index_set(e.set) << "  reduced homology";
    for (int deg = -1; deg + 1 < static_cast<int>(e.ranks.ranks.size()); ++deg)
      if (e.ranks.at(deg) != 0) t << " H" << deg << "=" << e.ranks.at(deg);
    t << "\n";
  }
  return {report::tempting(cat), t.str()};
}

inline Output cmd_cones(Session& s) {
  const auto& pic = s.pic();
  nlohmann::json arr = nlohmann::json::array();
  std::ostringstream t;
  for (const auto& fc : forbidden_cones(s.fan(), pic, s.catalog())) {
    const bool ok = vertex_check(s.fan(), pic, fc.set);
    arr.push_back(report::forbidden(pic, fc, ok));
    t << format_index_set(fc.set) << "  q = " << format_class(fc.q_class) << "  dim " << fc.cone.dimension
      << (fc.full_dim ? " (full)" : "") << "  vertex-check " << (ok ? "ok" : "FAILED") << "\n";
    for (const auto& g : fc.cone.facets) t << "    facet " << format_vector(g) << "\n";
  }
  return {arr, t.str()};
}

inline Output cmd_cohomology(Session& s, const Options& o) {
  const DivisorClass cls = read_class(s, o);
  const auto h = s.engine().cohomology(cls);
  nlohmann::json j{{"class", report::divisor_class(s.pic(), cls)},
                   {"h", report::cohomology_vector(h)},
                   {"euler_characteristic", report::to_json(euler_characteristic(h))}};
  return {j, text_class(s.pic(), cls) + "\n" + text_h(h) + "\n"};
}

inline Output cmd_immaculate(Session& s, const Options& o) {
  const DivisorClass cls = read_class(s, o);
  const auto& eng = s.engine();
  const auto counts = eng.pattern_counts(cls);
  const bool imm = eng.is_immaculate(cls);
  nlohmann::json pattern = nlohmann::json::array();
  std::ostringstream t;
  t << text_class(s.pic(), cls) << "\n" << (imm ? "immaculate" : "not immaculate") << "\n";
  for (std::size_t k = 0; k < counts.size(); ++k) {
    const auto& set = s.catalog().entries[k].set;
    pattern.push_back(nlohmann::json{{"set", set}, {"p", report::to_json(counts[k])}});
    if (counts[k] != 0) t << "  p" << format_index_set(set) << " = " << counts[k] << "\n";
  }
  return {nlohmann::json{{"class", report::divisor_class(s.pic(), cls)}, {"immaculate", imm}, {"pattern_counts", pattern}},
          t.str()};
}

inline Output cmd_scan(Session& s, const Options& o) {
  if (o.box.empty()) throw UsageError("scan needs --box lo:hi[,lo:hi...]");
  const auto box = parse_box(o.box, s.pic().rank());
  const auto found = s.engine().immaculate_scan(box);
  std::ostringstream t;
  t << found.size() << " immaculate classes\n";
  for (const auto& c : found) t << "  " << text_class(s.pic(), c) << "\n";
  nlohmann::json jb = nlohmann::json::array();
  for (const auto& [lo, hi] : box) jb.push_back({report::to_json(lo), report::to_json(hi)});
  return {nlohmann::json{{"box", jb}, {"count", found.size()}, {"classes", report::classes(s.pic(), found)}}, t.str()};
}

inline Output cmd_infinite(Session& s, const Options& o) {
  const auto rep = decide_infinite(s.fan(), s.pic(), s.catalog(), o.max_cells);
  const bool ok = verify_infinity_report(s.fan(), s.pic(), s.catalog(), rep);
  if (!ok) throw ConsistencyError("decision report failed verification");
  std::ostringstream t;
  t << decision_name(rep.decision) << "\n";
  if (rep.witness) t << "witness " << format_vector(rep.witness->coords) << "\n";
  t << "cells examined " << rep.cells_examined << ", certificate verified\n";
  return {report::infinity(rep, ok), t.str()};
}

inline Output cmd_infinity(Session& s, const Options& o) {
  const auto desc = imm_infinity_description(s.fan(), s.pic(), s.catalog(), o.max_cells);
  std::ostringstream t;
  if (desc.empty()) t << "empty\n";
  if (desc.whole) t << "whole hyperplane at infinity\n";
  for (const auto& d : desc.isolated) t << "point " << format_vector(d.coords) << "\n";
  for (const auto& a : desc.arcs) t << "arc " << format_vector(a.from.coords) << " .. " << format_vector(a.to.coords) << "\n";
  for (const auto& d : desc.sample_members) t << "member " << format_vector(d.coords) << "\n";
  return {report::imm_infinity(desc), t.str()};
}

inline Output cmd_zonotope(Session& s) {
  const auto z = zonotope(s.pic());
  std::ostringstream t;
  t << "center " << format_vector(z.center) << "\n";
  for (const auto& v : z.vertices) t << "vertex " << format_vector(v) << "\n";
  for (const auto& f : z.facets)
    t << "facet " << f.lower << " <= " << format_vector(f.normal) << ".x <= " << f.upper << "\n";
  const auto inner = zonotope_classes(s.pic(), ZonotopeMode::interior);
  t << inner.size() << " interior classes\n";
  for (const auto& c : inner) t << "  " << text_class(s.pic(), c) << "\n";
  return {report::zonotope(s.pic(), z), t.str()};
}

inline Output cmd_witness(Session& s, const Options& o) {
  Direction w;
  if (o.direction.empty()) {
    const auto rep = decide_infinite(s.fan(), s.pic(), s.catalog(), o.max_cells);
    if (!rep.witness) throw UsageError("no witness direction: Imm is finite");
    w = *rep.witness;
  } else {
    const IntVector v = parse_int_list(o.direction);
    if (v.size() != s.pic().rank() || is_zero(v)) throw UsageError("--direction needs a nonzero vector of length r");
    w = Direction::from(v);
  }
  if (!imm_infinity_contains(s.fan(), s.pic(), s.catalog(), w))
    throw UsageError("direction " + format_vector(w.coords) + " is not in Imm^∞");
  const auto family = witness_immaculate_family(s.fan(), s.pic(), s.catalog(), w, o.count);
  std::ostringstream t;
  t << "direction " << format_vector(w.coords) << "\n";
  for (const auto& c : family) t << "  " << text_class(s.pic(), c) << "\n";
  return {nlohmann::json{{"direction", report::to_json(w.coords)}, {"family", report::classes(s.pic(), family)}},
          t.str()};
}

inline Output cmd_bw_check(Session& s, const Options& o) {
  if (o.divisor.empty()) throw UsageError("bw-check needs --divisor");
  const IntVector c = parse_int_list(o.divisor);
  if (c.size() != static_cast<std::size_t>(s.fan().ray_count()))
    throw UsageError("--divisor needs " + std::to_string(s.fan().ray_count()) + " entries");
  const auto hc = bw_hull_check(s.fan(), s.pic(), c);
  nlohmann::json psi = nlohmann::json::array();
  for (const auto& p : hc.psi) psi.push_back(report::to_json(p));
  nlohmann::json j{{"hull_dim", hc.hull_dim}, {"degenerate", hc.degenerate}, {"psi", psi}};
  std::ostringstream t;
  t << "hull dimension " << hc.hull_dim << (hc.degenerate ? " (degenerate)" : "") << "\n";
  if (hc.imm_direction) {
    j["imm_direction"] = report::to_json(hc.imm_direction->coords);
    t << "direction " << format_vector(hc.imm_direction->coords) << " lies in Imm^∞\n";
  }
  return {j, t.str()};
}

inline Output cmd_plot(Session& s, const Options& o) {
  if (o.out_path.empty()) throw UsageError("plot needs --out FILE.svg");
  if (s.pic().rank() != 2) throw UsageError("plot requires Picard rank 2");
  PlotInput in;
  in.box = parse_box(o.box.empty() ? "-6:6" : o.box, 2);
  in.cones = forbidden_cones(s.fan(), s.pic(), s.catalog());
  in.zonotope = zonotope(s.pic());
  in.immaculate = s.engine().immaculate_scan(in.box);
  in.infinity = imm_infinity_description(s.fan(), s.pic(), s.catalog(), o.max_cells);
  const std::string doc = emit_plot(in);
  std::ofstream f(o.out_path, std::ios::binary);
  if (!f) throw UsageError("cannot write " + o.out_path);
  f << doc;
  std::size_t drawn = 0;
  for (const auto& fc : in.cones) drawn += fc.full_dim ? 1 : 0;
  std::ostringstream t;
  t << "wrote " << o.out_path << ": " << drawn << " cones, " << in.immaculate.size() << " points, "
    << in.infinity.isolated.size() + 2 * in.infinity.arcs.size() << " arrows\n";
  return {nlohmann::json{{"path", o.out_path},
                         {"cones", drawn},
                         {"points", in.immaculate.size()},
                         {"arrows", in.infinity.isolated.size() + 2 * in.infinity.arcs.size()}},
          t.str()};
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Exact cohomology and immaculate line bundles on toric stacks", "immaculatum"};
  app.require_subcommand(1);
  auto* fan_opt = app.add_option("--fan", o.fan_file, "fan JSON file");
  auto* builtin_opt = app.add_option("--builtin", o.builtin_spec, "builtin fan, e.g. P2, hirzebruch(1), P1xP1");
  fan_opt->excludes(builtin_opt);
  app.add_option("--format", o.format, "output format")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--max-subsets", o.max_subsets, "cap on ray subsets examined");
  app.add_option("--max-cells", o.max_cells, "cap on arrangement cells examined");

  auto sub = [&](const char* name, const char* help) {
    auto* c = app.add_subcommand(name, help);
    c->fallthrough();
    return c;
  };
  auto class_opts = [&](CLI::App* c) {
    c->add_option("--divisor", o.divisor, "divisor coefficients c0,...,c(n-1)");
    c->add_option("--class", o.class_coords, "class coordinates a1,...,ar[;t1,...]");
  };
  sub("validate", "check the fan axioms");
  sub("picard", "Picard group and the classes E_i");
  sub("tempting", "tempting subsets with reduced homology");
  sub("cones", "forbidden cones of tempting subsets");
  class_opts(sub("cohomology", "cohomology of a line bundle"));
  class_opts(sub("immaculate", "decide immaculacy of a line bundle"));
  sub("scan", "immaculate classes in a box")->add_option("--box", o.box, "lo:hi[,lo:hi...]");
  sub("infinite", "decide whether infinitely many classes are immaculate");
  sub("infinity", "describe the accumulation set at infinity");
  sub("zonotope", "the zonotope and its interior classes");
  auto* wit = sub("witness", "immaculate classes along a direction at infinity");
  wit->add_option("--direction", o.direction, "w1,...,wr");
  wit->add_option("--count", o.count, "family size");
  sub("bw-check", "hull test for a divisor")->add_option("--divisor", o.divisor, "c0,...,c(n-1)");
  auto* plot = sub("plot", "SVG picture for Picard rank 2");
  plot->add_option("--out", o.out_path, "output path")->required();
  plot->add_option("--box", o.box, "scan box, default -6:6");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    if (o.fan_file.empty() == o.builtin_spec.empty()) throw UsageError("give exactly one of --fan and --builtin");
    StackyFan fan;
    if (!o.fan_file.empty()) {
      fan = load_fan_file(o.fan_file);
    } else {
      try {
        fan = detail::BuiltinParser(o.builtin_spec).parse();
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
    }
    if (fan.name.empty()) fan.name = o.builtin_spec;
    Session s(fan, o.max_subsets);
    Output res;
    int code = kOk;
    if (command == "validate") {
      res = cmd_validate(s);
      if (!validate(fan).ok()) code = kInvalidFan;
    } else {
      require_valid(fan);
      if (command == "picard") res = cmd_picard(s);
      else if (command == "tempting") res = cmd_tempting(s);
      else if (command == "cones") res = cmd_cones(s);
      else if (command == "cohomology") res = cmd_cohomology(s, o);
      else if (command == "immaculate") res = cmd_immaculate(s, o);
      else if (command == "scan") res = cmd_scan(s, o);
      else if (command == "infinite") res = cmd_infinite(s, o);
      else if (command == "infinity") res = cmd_infinity(s, o);
      else if (command == "zonotope") res = cmd_zonotope(s);
      else if (command == "witness") res = cmd_witness(s, o);
      else if (command == "bw-check") res = cmd_bw_check(s, o);
      else if (command == "plot") res = cmd_plot(s, o);
    }
    if (o.format == "json")
      out << nlohmann::json{{"fan", fan_to_json(fan)}, {"command", command}, {"result", res.result}}.dump(2) << "\n";
    else
      out << res.text;
    return code;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const DimensionError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const InvalidFanError& e) {
    err << "error: " << e.what() << "\n";
    return kInvalidFan;
  } catch (const LimitExceededError& e) {
    err << "error: " << e.what() << "\n";
    return kLimit;
  } catch (const StructuralError& e) {
    err << "error: " << e.what() << "\n";
    return kInternal;
  } catch (const ConsistencyError& e) {
    err << "error: " << e.what() << "\n";
    return kInternal;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInternal;
  }
}

}  // namespace immaculatum::cli
