#pragma once

#include <cstdlib>
#include <iostream>
#include <optional>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "ilvelt/ilvelt.hpp"

namespace ilvelt {

namespace cli {

using nlohmann::json;

inline std::string set_text(const std::vector<std::string>& names, WorldSet s) {
  std::string out = "{";
  bool first = true;
  for (World w : s) {
    out += (first ? "" : ",") + names[w];
    first = false;
  }
  return out + "}";
}

inline json set_json(const std::vector<std::string>& names, WorldSet s) {
  json out = json::array();
  for (World w : s) out.push_back(names[w]);
  return out;
}

inline StructureKind parse_kind(const std::string& s) {
  if (s == "ordinary" || s == "frame") return StructureKind::Ordinary;
  if (s == "gen" || s == "genframe" || s == "generalized") return StructureKind::Generalized;
  throw Error("unknown kind '" + s + "' (expected ordinary or gen)");
}

inline const char* kind_text(StructureKind k) { return k == StructureKind::Ordinary ? "ordinary" : "gen"; }

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else if (c != ' ') {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

using AnyModel = std::variant<Model, GenModel>;

inline AnyModel load_any(const std::string& path, const std::string& kind) {
  StructureText st = load_structure(path);
  if (!kind.empty()) st.declared_kind = parse_kind(kind);
  if (st.kind() == StructureKind::Ordinary) return to_model(st);
  return to_genmodel(st);
}

inline const std::vector<std::string>& world_names(const AnyModel& m) {
  return std::visit([](const auto& x) -> const std::vector<std::string>& {
    if constexpr (std::is_same_v<std::decay_t<decltype(x)>, Model>) return x.frame.names();
    else return x.genframe.names();
  }, m);
}

inline std::vector<Violation> violations_of(const AnyModel& m) {
  if (auto o = std::get_if<Model>(&m)) return validate_frame(o->frame);
  return validate_genframe(std::get<GenModel>(m).genframe);
}

inline World world_index(const std::vector<std::string>& names, const std::string& w) {
  for (World i = 0; i < names.size(); ++i)
    if (names[i] == w) return i;
  throw Error("unknown world '" + w + "'");
}

inline std::string assignment_text(const std::vector<std::string>& names, const CounterAssignment& c) {
  std::string out;
  for (const auto& [name, set] : c.assignment) out += name + "=" + set_text(names, set) + " ";
  return out + "fails at " + names[c.world];
}

inline json assignment_json(const std::vector<std::string>& names, const CounterAssignment& c) {
  json a = json::object();
  for (const auto& [name, set] : c.assignment) a[name] = set_json(names, set);
  return {{"assignment", a}, {"world", names[c.world]}};
}

/// Shared state of one invocation.
struct Context {
  std::ostream& out;
  std::ostream& err;
  bool json_mode = false;
  json summary = json::object();

  int finish(int code) {
    if (json_mode) {
      summary["exit"] = code;
      out << summary.dump() << '\n';
    }
    return code;
  }
};

inline int report_violations(Context& cx, const std::vector<Violation>& vs) {
  for (const auto& v : vs) cx.out << "violation: " << v.condition << ": " << v.message << '\n';
  json arr = json::array();
  for (const auto& v : vs) arr.push_back({{"condition", v.condition}, {"message", v.message}});
  cx.summary["violations"] = arr;
  return cx.finish(1);
}

// ---------------------------------------------------------------------------

struct ParseArgs {
  std::string formula;
  bool meta = false;
};

inline int cmd_parse(Context& cx, const ParseArgs& a) {
  const Formula f = parse(a.formula, ParseOptions{a.meta});
  cx.out << print(f) << '\n';
  cx.summary["formula"] = print(f);
  cx.summary["atoms"] = atoms_of(f);
  cx.summary["metavariables"] = metas_of(f);
  return cx.finish(0);
}

struct ModelArgs {
  std::string file;
  std::string kind;
  std::string formula;
  std::string world;
};

inline int cmd_check_model(Context& cx, const ModelArgs& a) {
  const AnyModel m = load_any(a.file, a.kind);
  const auto& names = world_names(m);
  const bool ordinary = std::holds_alternative<Model>(m);
  cx.out << "kind: " << (ordinary ? "ordinary" : "gen") << '\n' << "worlds: " << names.size() << '\n';
  cx.summary["kind"] = ordinary ? "ordinary" : "gen";
  cx.summary["worlds"] = names;
  const auto vs = violations_of(m);
  if (!vs.empty()) return report_violations(cx, vs);
  cx.out << "valid structure\n";
  cx.summary["valid"] = true;
  if (a.formula.empty()) {
    if (!a.world.empty()) throw Error("--world needs --eval");
    return cx.finish(0);
  }
  const Formula f = parse(a.formula);
  const WorldSet truth = ordinary ? truth_set(std::get<Model>(m), f) : truth_set(std::get<GenModel>(m), f);
  cx.out << "truth set: " << set_text(names, truth) << '\n';
  cx.summary["truth_set"] = set_json(names, truth);
  if (a.world.empty()) return cx.finish(0);
  const bool holds = truth.contains(world_index(names, a.world));
  cx.out << a.world << (holds ? " forces " : " does not force ") << print(f) << '\n';
  cx.summary["holds"] = holds;
  return cx.finish(holds ? 0 : 1);
}

struct FrameValidArgs {
  std::string file;
  std::string kind;
  std::string schema;
  std::string formula;
};

inline int cmd_frame_valid(Context& cx, const FrameValidArgs& a) {
  if (a.schema.empty() == a.formula.empty()) throw Error("give exactly one of --schema and --formula");
  const AnyModel m = load_any(a.file, a.kind);
  const auto vs = violations_of(m);
  if (!vs.empty()) return report_violations(cx, vs);
  const auto& names = world_names(m);
  std::optional<SchemaId> id;
  if (!a.schema.empty()) {
    id = schema_from_name(a.schema);
    if (!id) throw Error("unknown schema '" + a.schema + "'");
  }
  const Formula f = id ? schema(*id).body : parse(a.formula, ParseOptions{true});
  Verdict<CounterAssignment> v;
  if (auto o = std::get_if<Model>(&m)) v = frame_valid_formula(o->frame, f);
  else v = genframe_valid_formula(std::get<GenModel>(m).genframe, f);
  const std::string what = id ? schema_name(*id) : print(f);
  cx.summary["formula"] = what;
  cx.summary["valid"] = v.holds();
  if (v.holds()) {
    cx.out << what << ": valid\n";
    return cx.finish(0);
  }
  cx.out << what << ": not valid\n" << "counterexample: " << assignment_text(names, v.witness()) << '\n';
  cx.summary["counterexample"] = assignment_json(names, v.witness());
  return cx.finish(1);
}

struct ConditionArgs {
  std::string file;
  std::string kind;
  std::string name;
};

inline int cmd_condition(Context& cx, const ConditionArgs& a) {
  const AnyModel m = load_any(a.file, a.kind);
  const auto vs = violations_of(m);
  if (!vs.empty()) return report_violations(cx, vs);
  const auto& nm = world_names(m);
  const bool ordinary = std::holds_alternative<Model>(m);
  const ConditionId c =
      condition_from_name(a.name, ordinary ? StructureKind::Ordinary : StructureKind::Generalized);
  cx.summary["condition"] = condition_name(c);
  bool holds = false;
  json w = json::object();
  std::vector<std::string> lines;
  auto S = [&](WorldSet s) { return set_text(nm, s); };
  if (ordinary) {
    auto v = check_R_frame_condition(std::get<Model>(m).frame);
    holds = v.holds();
    if (!holds) {
      const auto& x = v.witness();
      lines.push_back("x=" + nm[x.x] + " y=" + nm[x.y] + " z=" + nm[x.z] + " u=" + nm[x.u] + " v=" + nm[x.v]);
      w = {{"x", nm[x.x]}, {"y", nm[x.y]}, {"z", nm[x.z]}, {"u", nm[x.u]}, {"v", nm[x.v]}};
    }
  } else {
    const GenFrame& g = std::get<GenModel>(m).genframe;
    switch (c) {
      case ConditionId::M0set: {
        auto v = check_M0_condition(g);
        holds = v.holds();
        if (!holds) {
          const auto& x = v.witness();
          lines.push_back("w=" + nm[x.w] + " x=" + nm[x.x] + " y=" + nm[x.y] + " Y=" + S(x.big_y));
          w = {{"w", nm[x.w]}, {"x", nm[x.x]}, {"y", nm[x.y]}, {"Y", set_json(nm, x.big_y)}};
        }
        break;
      }
      case ConditionId::P0set: {
        auto v = check_P0_condition(g);
        holds = v.holds();
        if (!holds) {
          const auto& x = v.witness();
          lines.push_back("w=" + nm[x.w] + " x=" + nm[x.x] + " y=" + nm[x.y] + " Y=" + S(x.big_y) + " Z=" + S(x.z));
          w = {{"w", nm[x.w]}, {"x", nm[x.x]}, {"y", nm[x.y]}, {"Y", set_json(nm, x.big_y)}, {"Z", set_json(nm, x.z)}};
        }
        break;
      }
      case ConditionId::Rset: {
        auto v = check_R_condition(g);
        holds = v.holds();
        if (!holds) {
          const auto& x = v.witness();
          lines.push_back("w=" + nm[x.w] + " x=" + nm[x.x] + " y=" + nm[x.y] + " Y=" + S(x.big_y));
          json gs = json::array();
          for (WorldSet gam : x.failing) {
            lines.push_back("choice set Γ=" + S(gam) + " for (" + nm[x.x] + "," + nm[x.y] + "): no " + nm[x.x] + " S_" +
                             nm[x.w] + " Y' with Y' inside Y and R[Y'] inside Γ");
            gs.push_back(set_json(nm, gam));
          }
          w = {{"w", nm[x.w]}, {"x", nm[x.x]}, {"y", nm[x.y]}, {"Y", set_json(nm, x.big_y)}, {"failing", gs}};
        }
        break;
      }
      case ConditionId::NotWset: {
        auto found = find_not_W(g);
        holds = found.has_value();
        if (holds) {
          const auto& x = *found;
          lines.push_back("w=" + nm[x.w] + " z0=" + nm[x.z0] + " U=" + S(x.u) + " Z=" + S(x.z) + " reachable=" +
                          S(x.reachable));
          w = {{"w", nm[x.w]}, {"z0", nm[x.z0]}, {"U", set_json(nm, x.u)}, {"Z", set_json(nm, x.z)},
               {"reachable", set_json(nm, x.reachable)}};
        }
        break;
      }
      default: throw Error("condition does not apply to generalized frames");
    }
  }
  cx.out << condition_name(c) << ": " << (holds ? "holds" : "fails") << '\n';
  for (const auto& l : lines) cx.out << "  " << l << '\n';
  cx.summary["holds"] = holds;
  if (!w.empty()) cx.summary["witness"] = w;
  return cx.finish(holds ? 0 : 1);
}

struct ForcesArgs {
  std::string file;
  std::string kind;
  std::string logic;
  std::string world;
};

inline int cmd_forces_logic(Context& cx, const ForcesArgs& a) {
  const AnyModel m = load_any(a.file, a.kind);
  const auto vs = violations_of(m);
  if (!vs.empty()) return report_violations(cx, vs);
  const auto& nm = world_names(m);
  const auto logic = parse_schema_list(a.logic);
  if (logic.empty()) throw Error("--logic lists no schemata");
  auto run = [&](const auto& model) {
    if (a.world.empty()) return model_forces_logic(model, logic);
    return world_forces_logic(model, world_index(nm, a.world), logic);
  };
  const auto v = std::visit(run, m);
  cx.summary["holds"] = v.holds();
  if (v.holds()) {
    cx.out << (a.world.empty() ? "every world" : a.world) << " forces " << a.logic << '\n';
    return cx.finish(0);
  }
  const auto& f = v.witness();
  cx.out << nm[f.world] << " refutes an instance of " << schema_name(f.schema) << '\n';
  json sets = json::object();
  for (const auto& [name, set] : f.sets) {
    cx.out << "  " << name << " = " << set_text(nm, set) << " ~ " << print(f.substitution.at(name)) << '\n';
    sets[name] = {{"set", set_json(nm, set)}, {"formula", print(f.substitution.at(name))}};
  }
  cx.out << "  instance: " << print(f.instance) << '\n';
  cx.summary["failing"] = {{"schema", schema_name(f.schema)}, {"world", nm[f.world]}, {"sets", sets},
                           {"instance", print(f.instance)}};
  return cx.finish(1);
}

inline int cmd_lift(Context& cx, const ModelArgs& a) {
  const AnyModel m = load_any(a.file, a.kind);
  const auto vs = violations_of(m);
  if (!vs.empty()) return report_violations(cx, vs);
  auto o = std::get_if<Model>(&m);
  if (!o) throw Error("lift takes an ordinary structure");
  const GenModel g = lift(*o);
  cx.out << write_structure(g);
  cx.summary["triples"] = g.genframe.triple_count();
  return cx.finish(0);
}

struct CorrespondArgs {
  std::string kind = "gen";
  std::size_t max = 3;
  std::string conditions;
  bool random = false;
  std::uint64_t seed = 42;
  std::size_t samples = 500;
  unsigned workers = 1;
};

inline int cmd_correspond(Context& cx, const CorrespondArgs& a) {
  SweepOptions opt;
  opt.kind = parse_kind(a.kind);
  opt.max_worlds = a.max;
  opt.random = a.random;
  opt.seed = a.seed;
  opt.samples = a.samples;
  opt.workers = a.workers;
  std::vector<std::string> names = split_list(a.conditions);
  if (names.empty())
    names = opt.kind == StructureKind::Generalized ? std::vector<std::string>{"M0", "P0", "R", "NotW"}
                                                   : std::vector<std::string>{"R", "P0"};
  for (const auto& n : names) opt.conditions.push_back(condition_from_name(n, opt.kind));
  const SweepReport rep = sweep(opt);
  cx.out << (opt.random ? "random" : "exhaustive") << " sweep over " << rep.structures << ' ' << kind_text(opt.kind)
         << " structures\n";
  if (rep.first_mismatch) cx.out << rep.first_mismatch->witness;
  cx.out << rep.summary_line() << '\n';
  cx.err << "seconds=" << rep.seconds << '\n';
  cx.summary["structures"] = rep.structures;
  cx.summary["checked"] = rep.checked;
  cx.summary["mismatches"] = rep.mismatches;
  return cx.finish(rep.mismatches == 0 ? 0 : 1);
}

struct SearchArgs {
  std::string kind = "gen";
  std::string valid;
  std::string invalid;
  std::size_t max_worlds = 8;
  std::size_t max_seeds = 2;
  std::optional<std::uint64_t> seed;
  std::size_t samples = 10000;
  std::optional<double> budget;
  unsigned workers = 1;
  bool incomplete = false;
  std::string logic;
  std::string target = "R";
};

inline std::optional<double> env_budget() {
  const char* s = std::getenv("ILVELT_BUDGET_SECS");
  if (!s || !*s) return std::nullopt;
  char* end = nullptr;
  const double v = std::strtod(s, &end);
  if (*end != '\0' || v <= 0) throw Error(std::string("ILVELT_BUDGET_SECS is not a positive number: ") + s);
  return v;
}

inline int cmd_search(Context& cx, const SearchArgs& a) {
  const std::optional<double> budget = a.budget ? a.budget : env_budget();
  SearchStats stats;
  SearchOutcome outcome;
  if (a.incomplete) {
    IncompletenessSpec spec;
    spec.logic = parse_schema_list(a.logic);
    if (spec.logic.empty()) throw Error("--incomplete needs --logic");
    auto t = schema_from_name(a.target);
    if (!t) throw Error("unknown schema '" + a.target + "'");
    spec.target = *t;
    spec.max_worlds = a.max_worlds;
    spec.max_seeds = a.max_seeds;
    spec.budget_seconds = budget;
    spec.workers = a.workers;
    const auto res = find_incompleteness_model(spec);
    outcome = res.outcome;
    stats = res.stats;
    if (res.model) {
      cx.out << write_structure(*res.model);
      const auto& nm = res.model->frame.names();
      cx.err << nm[res.refuted->world] << " refutes " << print(res.refuted->instance) << '\n';
      cx.summary["refuted"] = {{"world", nm[res.refuted->world]}, {"instance", print(res.refuted->instance)}};
    }
  } else {
    SearchSpec spec;
    spec.kind = parse_kind(a.kind);
    for (const auto& n : split_list(a.valid)) spec.valid.push_back(parse_requirement(n, spec.kind));
    const auto inv = split_list(a.invalid);
    if (inv.size() != 1) throw Error("--invalid takes exactly one schema or condition");
    spec.invalid = parse_requirement(inv[0], spec.kind);
    spec.max_worlds = a.max_worlds;
    spec.max_seeds = a.max_seeds;
    spec.budget_seconds = budget;
    spec.workers = a.workers;
    spec.random_seed = a.seed;
    spec.samples = a.samples;
    const auto res = find_separating_structure(spec);
    outcome = res.outcome;
    stats = res.stats;
    if (res.genframe) cx.out << write_structure(*res.genframe);
    if (res.frame) cx.out << write_structure(*res.frame);
  }
  cx.err << outcome_name(outcome) << ": " << stats.candidates << " candidates, " << stats.seconds << " s\n";
  cx.summary["outcome"] = outcome_name(outcome);
  cx.summary["candidates"] = stats.candidates;
  return cx.finish(outcome == SearchOutcome::Found ? 0 : 1);
}

inline int cmd_prove(Context& cx, const std::string& file) {
  const Derivation d = load_derivation(file);
  const auto v = check_derivation(d);
  cx.summary["steps"] = d.steps.size();
  cx.summary["ok"] = v.holds();
  if (v.holds()) {
    cx.out << "ok: " << d.steps.size() << " steps\n" << "conclusion: " << print(conclusion(d)) << '\n';
    cx.summary["conclusion"] = print(conclusion(d));
    return cx.finish(0);
  }
  const auto& e = v.witness();
  cx.out << "step " << e.step << ": " << e.reason << '\n';
  cx.summary["step"] = e.step;
  cx.summary["reason"] = e.reason;
  return cx.finish(1);
}

}  // namespace cli

/// Runs one command line. Exit 0: the property holds; 1: it fails (witness printed);
/// 2: usage or input error.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  using namespace cli;
  CLI::App app{"Checker for interpretability logics over Veltman semantics", "ilvelt"};
  app.require_subcommand(1);
  app.fallthrough();
  bool json_mode = false;
  app.add_flag("--json", json_mode, "Also print a JSON summary object");

  ParseArgs pa;
  auto* parse_cmd = app.add_subcommand("parse", "Parse a formula and print it canonically");
  parse_cmd->add_option("formula", pa.formula)->required();
  parse_cmd->add_flag("--meta", pa.meta, "Accept capitalized metavariables");

  ModelArgs ma;
  auto* check_cmd = app.add_subcommand("check-model", "Validate a structure file, optionally evaluating a formula");
  check_cmd->add_option("file", ma.file)->required();
  check_cmd->add_option("--kind", ma.kind, "ordinary or gen (default: from the file)");
  check_cmd->add_option("--eval", ma.formula, "Formula whose truth set to print");
  check_cmd->add_option("--world", ma.world, "World at which --eval must hold");

  FrameValidArgs fa;
  auto* fv_cmd = app.add_subcommand("frame-valid", "Is a schema or formula valid on the frame?");
  fv_cmd->add_option("file", fa.file)->required();
  fv_cmd->add_option("--kind", fa.kind);
  fv_cmd->add_option("--schema", fa.schema);
  fv_cmd->add_option("--formula", fa.formula);

  ConditionArgs ca;
  auto* cond_cmd = app.add_subcommand("condition", "Decide a frame condition");
  cond_cmd->add_option("file", ca.file)->required();
  cond_cmd->add_option("--kind", ca.kind);
  cond_cmd->add_option("--name", ca.name, "M0, P0, R or NotW")->required();

  ForcesArgs la;
  auto* forces_cmd = app.add_subcommand("forces-logic", "Do the worlds force every definable instance of a logic?");
  forces_cmd->add_option("file", la.file)->required();
  forces_cmd->add_option("--kind", la.kind);
  forces_cmd->add_option("--logic", la.logic, "Comma-separated schema names")->required();
  forces_cmd->add_option("--world", la.world);

  ModelArgs lifta;
  auto* lift_cmd = app.add_subcommand("lift", "Print the generalized structure of an ordinary one");
  lift_cmd->add_option("file", lifta.file)->required();
  lift_cmd->add_option("--kind", lifta.kind);

  CorrespondArgs cra;
  auto* corr_cmd = app.add_subcommand("correspond", "Compare frame conditions with schema validity");
  corr_cmd->add_option("--kind", cra.kind, "ordinary or gen");
  corr_cmd->add_option("--max", cra.max, "Largest world count");
  corr_cmd->add_option("--conditions", cra.conditions, "Comma-separated condition names");
  corr_cmd->add_flag("--random", cra.random, "Random structures of exactly --max worlds");
  corr_cmd->add_option("--seed", cra.seed);
  corr_cmd->add_option("--samples", cra.samples);
  corr_cmd->add_option("--workers", cra.workers);

  SearchArgs sa;
  auto* search_cmd = app.add_subcommand("search", "Search for a separating frame or an incompleteness model");
  search_cmd->add_option("--kind", sa.kind, "ordinary or gen");
  search_cmd->add_option("--valid", sa.valid, "Comma-separated requirements that must hold");
  search_cmd->add_option("--invalid", sa.invalid, "Requirement that must fail");
  search_cmd->add_option("--max-worlds", sa.max_worlds);
  search_cmd->add_option("--max-seeds", sa.max_seeds);
  search_cmd->add_option("--seed", sa.seed, "Sample randomly with this seed instead of enumerating");
  search_cmd->add_option("--samples", sa.samples);
  search_cmd->add_option("--budget", sa.budget, "Seconds (default: ILVELT_BUDGET_SECS)");
  search_cmd->add_option("--workers", sa.workers);
  search_cmd->add_flag("--incomplete", sa.incomplete, "Look for a model forcing --logic that refutes --target");
  search_cmd->add_option("--logic", sa.logic);
  search_cmd->add_option("--target", sa.target);

  std::string proof;
  auto* prove_cmd = app.add_subcommand("prove", "Check a derivation file");
  prove_cmd->add_option("file", proof)->required();

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  Context cx{out, err, json_mode};
  try {
    if (*parse_cmd) return cmd_parse(cx, pa);
    if (*check_cmd) return cmd_check_model(cx, ma);
    if (*fv_cmd) return cmd_frame_valid(cx, fa);
    if (*cond_cmd) return cmd_condition(cx, ca);
    if (*forces_cmd) return cmd_forces_logic(cx, la);
    if (*lift_cmd) return cmd_lift(cx, lifta);
    if (*corr_cmd) return cmd_correspond(cx, cra);
    if (*search_cmd) return cmd_search(cx, sa);
    if (*prove_cmd) return cmd_prove(cx, proof);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}

}  // namespace ilvelt
