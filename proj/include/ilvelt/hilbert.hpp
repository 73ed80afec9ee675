#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ilvelt/formula.hpp"
#include "ilvelt/parser.hpp"
#include "ilvelt/schema.hpp"
#include "ilvelt/semantics.hpp"
#include "ilvelt/structure_io.hpp"

namespace ilvelt {

namespace detail {

/// Numbers the propositional leaves of f: atoms, metavariables and maximal box/rhd
/// subformulas, identified up to syntactic equality.
inline void collect_leaves(const Formula& f, std::map<std::string, std::size_t>& ids) {
  switch (f.kind()) {
    case Kind::Bottom: return;
    case Kind::Implies:
      collect_leaves(f.left(), ids);
      collect_leaves(f.right(), ids);
      return;
    default: ids.emplace(print(f), ids.size());
  }
}

/// Truth table of f as a bit vector: bit a of the result is f's value under assignment a.
inline std::vector<std::uint64_t> truth_table(const Formula& f, const std::map<std::string, std::size_t>& ids,
                                              std::size_t words) {
  switch (f.kind()) {
    case Kind::Bottom: return std::vector<std::uint64_t>(words, 0);
    case Kind::Implies: {
      auto l = truth_table(f.left(), ids, words);
      const auto r = truth_table(f.right(), ids, words);
      for (std::size_t i = 0; i < words; ++i) l[i] = ~l[i] | r[i];
      return l;
    }
    default: break;
  }
  const std::size_t v = ids.at(print(f));
  std::vector<std::uint64_t> out(words);
  if (v < 6) {
    static constexpr std::uint64_t kPattern[6] = {0xAAAAAAAAAAAAAAAAull, 0xCCCCCCCCCCCCCCCCull,
                                                  0xF0F0F0F0F0F0F0F0ull, 0xFF00FF00FF00FF00ull,
                                                  0xFFFF0000FFFF0000ull, 0xFFFFFFFF00000000ull};
    for (auto& w : out) w = kPattern[v];
  } else {
    for (std::size_t i = 0; i < words; ++i) out[i] = ((i >> (v - 6)) & 1u) ? ~std::uint64_t{0} : 0;
  }
  return out;
}

}  // namespace detail

/// Propositional tautology once every atom, metavariable and maximal modal subformula is
/// read as a propositional variable.
inline bool taut_check(const Formula& f) {
  std::map<std::string, std::size_t> ids;
  detail::collect_leaves(f, ids);
  if (ids.size() > 26) throw Error("too many propositional leaves for a truth table (" + std::to_string(ids.size()) + ")");
  const std::size_t rows = std::size_t{1} << ids.size();
  const std::size_t words = rows <= 64 ? 1 : rows / 64;
  auto table = detail::truth_table(f, ids, words);
  if (rows < 64) table[0] |= ~std::uint64_t{0} << rows;
  for (auto w : table)
    if (w != ~std::uint64_t{0}) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Derivations
//
//   logic: R, W
//   1. p -> p ; taut
//   2. [](A -> B) -> A |> B ... ; ax J1 [A:=p, B:=q]
//   3. ... ; mp 1 2          (step 2 must be step 1 -> this step)
//   4. ... ; nec 3
//
// Steps are numbered from 1 and in order. '#' starts a comment.

enum class Rule { Taut, Axiom, MP, Nec };

struct Justification {
  Rule rule = Rule::Taut;
  SchemaId schema = SchemaId::L1;  // Axiom
  Substitution substitution;       // Axiom
  std::size_t i = 0, j = 0;        // 1-based premises: MP uses both, Nec uses i
};

struct Step {
  Formula formula;
  Justification why;
  std::size_t line = 0;  // in the source text, 0 if built in code
};

struct Derivation {
  std::vector<SchemaId> logic;  // on top of the base schemata
  std::vector<Step> steps;
};

struct StepError {
  std::size_t step = 0;  // 1-based
  std::string reason;
};

inline std::string to_string(const Justification& j) {
  switch (j.rule) {
    case Rule::Taut: return "taut";
    case Rule::MP: return "mp " + std::to_string(j.i) + " " + std::to_string(j.j);
    case Rule::Nec: return "nec " + std::to_string(j.i);
    case Rule::Axiom: {
      std::string out = "ax " + schema_name(j.schema) + " [";
      bool first = true;
      for (const auto& [name, f] : j.substitution) {
        out += (first ? "" : ", ") + name + ":=" + print(f);
        first = false;
      }
      return out + "]";
    }
  }
  return "?";
}

inline std::string write_derivation(const Derivation& d) {
  std::string out = "logic:";
  for (std::size_t i = 0; i < d.logic.size(); ++i) out += (i ? ", " : " ") + schema_name(d.logic[i]);
  out += '\n';
  for (std::size_t k = 0; k < d.steps.size(); ++k)
    out += std::to_string(k + 1) + ". " + print(d.steps[k].formula) + " ; " + to_string(d.steps[k].why) + '\n';
  return out;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline std::size_t parse_index(std::string_view word, std::size_t line) {
  if (word.empty() || word.find_first_not_of("0123456789") != std::string_view::npos)
    throw FormatError("expected a step number, got '" + std::string(word) + "'", line);
  return std::stoul(std::string(word));
}

inline Justification parse_justification(std::string_view text, std::size_t line) {
  Justification j;
  const auto words = split_words(text);
  if (words.empty()) throw FormatError("missing justification", line);
  const std::string& rule = words[0];
  if (rule == "taut") {
    if (words.size() != 1) throw FormatError("'taut' takes no arguments", line);
    j.rule = Rule::Taut;
  } else if (rule == "mp") {
    if (words.size() != 3) throw FormatError("expected 'mp <i> <j>'", line);
    j.rule = Rule::MP;
    j.i = parse_index(words[1], line);
    j.j = parse_index(words[2], line);
  } else if (rule == "nec") {
    if (words.size() != 2) throw FormatError("expected 'nec <i>'", line);
    j.rule = Rule::Nec;
    j.i = parse_index(words[1], line);
  } else if (rule == "ax") {
    if (words.size() < 2) throw FormatError("expected 'ax <schema> [X:=formula, ...]'", line);
    auto id = schema_from_name(words[1]);
    if (!id) throw FormatError("unknown schema '" + words[1] + "'", line);
    j.rule = Rule::Axiom;
    j.schema = *id;
    std::string_view rest = trim(text);
    rest = trim(rest.substr(rest.find(words[1], 2) + words[1].size()));
    if (rest.empty()) return j;
    if (rest.front() != '[' || rest.back() != ']') throw FormatError("substitution must be in brackets", line);
    rest = rest.substr(1, rest.size() - 2);
    std::size_t start = 0;
    while (start <= rest.size()) {
      std::size_t comma = rest.find(',', start);
      if (comma == std::string_view::npos) comma = rest.size();
      const std::string_view item = trim(rest.substr(start, comma - start));
      start = comma + 1;
      if (item.empty()) continue;
      const auto eq = item.find(":=");
      if (eq == std::string_view::npos) throw FormatError("expected 'X:=formula' in substitution", line);
      const std::string name(trim(item.substr(0, eq)));
      if (!is_meta_name(name)) throw FormatError("'" + name + "' is not a metavariable", line);
      if (j.substitution.count(name)) throw FormatError(name + " bound twice", line);
      try {
        j.substitution.emplace(name, parse(item.substr(eq + 2)));
      } catch (const ParseError& e) {
        throw FormatError(std::string("in substitution for ") + name + ": " + e.what(), line);
      }
    }
  } else {
    throw FormatError("unknown rule '" + rule + "'", line);
  }
  return j;
}

}  // namespace detail

inline Derivation parse_derivation(std::string_view text) {
  Derivation d;
  bool have_logic = false;
  std::size_t lineno = 0, pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    if (line.substr(0, 6) == "logic:") {
      if (have_logic) throw FormatError("second logic line", lineno);
      if (!d.steps.empty()) throw FormatError("logic line after the first step", lineno);
      try {
        d.logic = parse_schema_list(line.substr(6));
      } catch (const Error& e) {
        throw FormatError(e.what(), lineno);
      }
      have_logic = true;
      continue;
    }
    const auto dot = line.find('.');
    if (dot == std::string_view::npos) throw FormatError("expected '<n>. <formula> ; <justification>'", lineno);
    const std::size_t number = detail::parse_index(detail::trim(line.substr(0, dot)), lineno);
    if (number != d.steps.size() + 1)
      throw FormatError("step " + std::to_string(number) + " out of sequence, expected " +
                            std::to_string(d.steps.size() + 1),
                        lineno);
    const auto semi = line.find(';', dot);
    if (semi == std::string_view::npos) throw FormatError("missing ';' before the justification", lineno);
    Step step;
    step.line = lineno;
    try {
      step.formula = parse(line.substr(dot + 1, semi - dot - 1));
    } catch (const ParseError& e) {
      throw FormatError(e.what(), lineno);
    }
    step.why = detail::parse_justification(line.substr(semi + 1), lineno);
    d.steps.push_back(std::move(step));
  }
  return d;
}

inline Derivation load_derivation(const std::string& path) { return parse_derivation(read_file(path)); }

/// Checks every step in order and reports the first one that is not justified.
inline Verdict<StepError> check_derivation(const Derivation& d) {
  if (d.steps.empty()) return {StepError{0, "empty derivation"}};
  auto fail = [](std::size_t k, std::string reason) { return Verdict<StepError>{StepError{k, std::move(reason)}}; };
  auto premise = [&](std::size_t k, std::size_t i) -> const Formula* {
    return (i >= 1 && i < k) ? &d.steps[i - 1].formula : nullptr;
  };
  for (std::size_t k = 1; k <= d.steps.size(); ++k) {
    const Step& st = d.steps[k - 1];
    const Formula& f = st.formula;
    const Justification& j = st.why;
    switch (j.rule) {
      case Rule::Taut:
        if (!taut_check(f)) return fail(k, "not a tautology: " + print(f));
        break;
      case Rule::Axiom: {
        bool allowed = false;
        for (SchemaId s : kBaseSchemata) allowed = allowed || s == j.schema;
        for (SchemaId s : d.logic) allowed = allowed || s == j.schema;
        if (!allowed) return fail(k, "axiom " + schema_name(j.schema) + " is not in the logic");
        const auto metas = metas_of(schema(j.schema).body);
        for (const auto& m : metas)
          if (!j.substitution.count(m)) return fail(k, "no binding for " + m);
        for (const auto& [name, _] : j.substitution)
          if (std::find(metas.begin(), metas.end(), name) == metas.end())
            return fail(k, name + " does not occur in " + schema_name(j.schema));
        const Formula want = instantiate(j.schema, j.substitution);
        if (want != f) return fail(k, "expected instance " + print(want) + ", got " + print(f));
        break;
      }
      case Rule::MP: {
        const Formula* a = premise(k, j.i);
        const Formula* b = premise(k, j.j);
        if (!a || !b) return fail(k, "bad index: mp " + std::to_string(j.i) + " " + std::to_string(j.j));
        const Formula want = Formula::implies(*a, f);
        if (*b != want) return fail(k, "step " + std::to_string(j.j) + " is " + print(*b) + ", expected " + print(want));
        break;
      }
      case Rule::Nec: {
        const Formula* a = premise(k, j.i);
        if (!a) return fail(k, "bad index: nec " + std::to_string(j.i));
        const Formula want = Formula::box(*a);
        if (f != want) return fail(k, "expected " + print(want) + ", got " + print(f));
        break;
      }
    }
  }
  return {};
}

/// The last step.
inline const Formula& conclusion(const Derivation& d) {
  if (d.steps.empty()) throw Error("empty derivation");
  return d.steps.back().formula;
}

struct NamedDerivation {
  std::string name;
  Derivation derivation;
};

struct FixtureFailure {
  std::string name;
  StepError error;
};

/// Derivations behind the equality of R plus W with R*: the R* instance from {R, W}, then
/// the R instance, the W instance and the top-C R* instance from {R*}.
inline const std::vector<std::string>& equivalence_fixture_names() {
  static const std::vector<std::string> names = {"rstar_from_rw", "r_from_rstar", "w_from_rstar", "rstar_top_instance"};
  return names;
}

inline std::vector<NamedDerivation> load_equivalence_fixtures(const std::string& dir) {
  std::vector<NamedDerivation> out;
  for (const auto& name : equivalence_fixture_names()) out.push_back({name, load_derivation(dir + "/" + name + ".proof")});
  return out;
}

inline Verdict<FixtureFailure> check_equivalence_fixtures(const std::vector<NamedDerivation>& fixtures) {
  for (const auto& fx : fixtures) {
    auto v = check_derivation(fx.derivation);
    if (!v.holds()) return {FixtureFailure{fx.name, v.witness()}};
  }
  return {};
}

inline Verdict<FixtureFailure> check_equivalence_fixtures(const std::string& dir) {
  return check_equivalence_fixtures(load_equivalence_fixtures(dir));
}

}  // namespace ilvelt
