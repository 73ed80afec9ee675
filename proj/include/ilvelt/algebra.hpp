#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "ilvelt/formula.hpp"
#include "ilvelt/schema.hpp"
#include "ilvelt/semantics.hpp"
#include "ilvelt/world_set.hpp"

namespace ilvelt {

/// A definable world set together with one formula denoting it.
struct DefinableSet {
  WorldSet set;
  Formula formula;
};

/// Sets are ordered by bitmask value.
struct DefinableAlgebra {
  std::vector<DefinableSet> members;

  std::size_t size() const { return members.size(); }
  bool contains(WorldSet s) const {
    return std::binary_search(members.begin(), members.end(), s,
                              [](const auto& a, const auto& b) { return key(a) < key(b); });
  }

 private:
  static WorldSet key(const DefinableSet& d) { return d.set; }
  static WorldSet key(WorldSet s) { return s; }
};

/// Least family containing the empty set and the extensions of `atoms`, closed under
/// complement, intersection, box and rhd. Witness formulas are built from the atoms.
template <VeltmanSemantics M>
DefinableAlgebra definable_algebra(const M& m, const std::vector<std::string>& atoms) {
  const WorldSet all = m.universe();
  std::unordered_map<WorldSet::Bits, std::size_t> index;
  std::vector<DefinableSet> found;
  auto add = [&](WorldSet s, const Formula& f) {
    if (index.emplace(s.bits(), found.size()).second) found.push_back({s, f});
  };
  add(WorldSet{}, Formula::bottom());
  for (const auto& a : atoms) {
    auto it = m.valuation.find(a);
    if (it == m.valuation.end()) throw Error("atom '" + a + "' has no valuation");
    add(it->second & all, Formula::atom(a));
  }
  // Worklist: each new member is combined with every member found before it.
  for (std::size_t i = 0; i < found.size(); ++i) {
    const DefinableSet cur = found[i];
    add(all - cur.set, Formula::neg(cur.formula));
    add(m.box(cur.set), Formula::box(cur.formula));
    for (std::size_t j = 0; j <= i; ++j) {
      const DefinableSet other = found[j];
      add(cur.set & other.set, Formula::conj(other.formula, cur.formula));
      add(m.rhd(cur.set, other.set), Formula::rhd(cur.formula, other.formula));
      add(m.rhd(other.set, cur.set), Formula::rhd(other.formula, cur.formula));
    }
  }
  std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) { return a.set < b.set; });
  return DefinableAlgebra{std::move(found)};
}

/// Uses every atom of the valuation.
template <VeltmanSemantics M>
DefinableAlgebra definable_algebra(const M& m) {
  std::vector<std::string> atoms;
  for (const auto& [name, _] : m.valuation) atoms.push_back(name);
  return definable_algebra(m, atoms);
}

/// A schema instance over definable sets that fails at `world`.
struct FailingInstance {
  SchemaId schema;
  std::map<std::string, WorldSet> sets;
  Substitution substitution;
  Formula instance;
  World world = 0;
};

namespace detail {

struct FailingAssignment {
  SchemaId schema;
  std::vector<std::size_t> picks;  // index into the candidate sets, per metavariable slot
  World world = 0;
};

/// Least (schema, assignment, world) in `logic` order and lexicographic order of picks
/// from `sets` whose truth set misses a world of `where`.
///
/// When the body is an implication whose antecedent uses only a proper prefix of the slots,
/// the antecedent is evaluated once per prefix, and the remaining slots are only tried at
/// worlds where it holds. A modal consequent holds at dead ends, so those are dropped too.
template <VeltmanSemantics M>
std::optional<FailingAssignment> find_failing_assignment(const M& m, std::span<const WorldSet> sets,
                                                         const std::vector<SchemaId>& logic, WorldSet where) {
  const std::size_t n = sets.size();
  if (n == 0) throw Error("no candidate sets");
  const WorldSet dead_ends = m.box(WorldSet{});
  for (SchemaId id : logic) {
    const Formula& body = schema(id).body;
    const Program prog(body);
    const std::size_t k = prog.slots().size();
    std::size_t prefix = k;
    std::optional<Program> ant;
    WorldSet drop;
    if (body.kind() == Kind::Implies) {
      Program a(body.left());
      const auto& as = a.slots();
      bool is_prefix = as.size() < k;
      for (std::size_t i = 0; is_prefix && i < as.size(); ++i) is_prefix = as[i].name == prog.slots()[i].name;
      if (is_prefix) {
        prefix = as.size();
        ant = std::move(a);
        const Kind ck = body.right().kind();
        if (ck == Kind::Box || ck == Kind::Rhd) drop = dead_ends;
      }
    }
    std::vector<std::size_t> pick(k, 0);
    std::vector<WorldSet> values(k);
    WorldSet guard = where;
    std::size_t from = 0;  // lowest slot changed since the last evaluation
    bool first = true;
    while (true) {
      for (std::size_t i = from; i < k; ++i) values[i] = sets[pick[i]];
      if (ant && (first || from < prefix)) guard = (where & ant->run(m, std::span<const WorldSet>(values.data(), prefix))) - drop;
      std::size_t i = k;
      if (guard.empty()) {
        i = prefix;  // nothing can fail under this prefix
      } else {
        const WorldSet bad = guard - prog.run(m, values);
        if (!bad.empty()) return FailingAssignment{id, pick, bad.min()};
      }
      first = false;
      for (std::size_t j = i; j < k; ++j) pick[j] = 0;
      while (i > 0 && ++pick[i - 1] == n) pick[--i] = 0;
      if (i == 0) break;
      from = i - 1;
    }
  }
  return std::nullopt;
}

template <VeltmanSemantics M>
std::optional<FailingInstance> find_failing_instance(const M& m, const DefinableAlgebra& alg,
                                                     const std::vector<SchemaId>& logic, WorldSet where) {
  std::vector<WorldSet> sets;
  for (const auto& d : alg.members) sets.push_back(d.set);
  auto found = find_failing_assignment(m, std::span<const WorldSet>(sets), logic, where);
  if (!found) return std::nullopt;
  const Program prog(schema(found->schema).body);
  FailingInstance out{found->schema, {}, {}, Formula::bottom(), found->world};
  for (std::size_t i = 0; i < found->picks.size(); ++i) {
    const auto& member = alg.members[found->picks[i]];
    out.sets[prog.slots()[i].name] = member.set;
    out.substitution[prog.slots()[i].name] = member.formula;
  }
  out.instance = instantiate(found->schema, out.substitution);
  return out;
}

}  // namespace detail

/// Does w force every instance of every schema in `logic` built from definable sets?
template <VeltmanSemantics M>
Verdict<FailingInstance> world_forces_logic(const M& m, World w, const std::vector<SchemaId>& logic) {
  if (w >= m.world_count()) throw Error("unknown world index " + std::to_string(w));
  const auto alg = definable_algebra(m);
  return {detail::find_failing_instance(m, alg, logic, WorldSet::single(w))};
}

/// world_forces_logic at every world; the witness has the least failing world for the
/// least failing assignment.
template <VeltmanSemantics M>
Verdict<FailingInstance> model_forces_logic(const M& m, const std::vector<SchemaId>& logic) {
  const auto alg = definable_algebra(m);
  return {detail::find_failing_instance(m, alg, logic, m.universe())};
}

template <VeltmanSemantics M>
Verdict<FailingInstance> model_forces_logic(const M& m, const DefinableAlgebra& alg,
                                            const std::vector<SchemaId>& logic) {
  return {detail::find_failing_instance(m, alg, logic, m.universe())};
}

}  // namespace ilvelt
