#pragma once

#include <cstdint>
#include <map>

#include "ilvelt/genframe.hpp"

namespace ilvelt::test_support {

// Truth sets in the ordinary model and in its lift.
using Pair = std::pair<WorldSet, WorldSet>;
// Distinct pairs reached by formulas of bounded depth, with how many formulas reach each.
using Level = std::map<Pair, std::uint64_t>;

struct Tally {
  std::uint64_t formulas = 0;
  std::uint64_t discrepancies = 0;
};

// Formulas of depth <= d are bottom, p, q, []A, A -> B and A |> B for A, B of depth < d.
// Both truth sets of a compound depend only on the pairs of its parts, so each level is
// computed from the distinct pairs of the previous one.
Tally lifting_tally(const Model& m, const GenModel& g, int depth) {
  Level leaves;
  ++leaves[{WorldSet{}, WorldSet{}}];
  ++leaves[{m.valuation.at("p"), g.valuation.at("p")}];
  ++leaves[{m.valuation.at("q"), g.valuation.at("q")}];
  Level cur = leaves;
  for (int d = 1; d <= depth; ++d) {
    Level next;
    for (const auto& [k, c] : leaves) next[k] += c;
    for (const auto& [a, ca] : cur) next[{m.box(a.first), g.box(a.second)}] += ca;
    for (const auto& [a, ca] : cur)
      for (const auto& [b, cb] : cur) {
        next[{(m.universe() - a.first) | b.first, (g.universe() - a.second) | b.second}] += ca * cb;
        next[{m.rhd(a.first, b.first), g.rhd(a.second, b.second)}] += ca * cb;
      }
    cur = std::move(next);
  }
  Tally t;
  for (const auto& [k, c] : cur) {
    t.formulas += c;
    if (k.first != k.second) t.discrepancies += c;
  }
  return t;
}

}  // namespace ilvelt::test_support
