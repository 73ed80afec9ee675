#pragma once

#include <algorithm>
#include <array>
#include <concepts>
#include <cstdint>
#include <optional>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "ilvelt/formula.hpp"
#include "ilvelt/world_set.hpp"

namespace ilvelt {

/// A finite structure with set-valued modal operators. Both ordinary and generalized
/// frames model this; every evaluator below is written once against it.
template <class S>
concept VeltmanSemantics = requires(const S& s, WorldSet a, WorldSet b) {
  { s.world_count() } -> std::convertible_to<std::size_t>;
  { s.universe() } -> std::same_as<WorldSet>;
  { s.box(a) } -> std::same_as<WorldSet>;
  { s.rhd(a, b) } -> std::same_as<WorldSet>;
};

/// Atom name -> extension.
using Valuation = std::map<std::string, WorldSet>;

/// Truth set of f. `lookup(leaf)` gives the extension of an atom or metavariable node.
template <VeltmanSemantics S, class Lookup>
WorldSet extension(const S& s, const Formula& f, Lookup&& lookup) {
  switch (f.kind()) {
    case Kind::Bottom: return WorldSet{};
    case Kind::Atom: case Kind::Meta: return lookup(f);
    case Kind::Implies:
      return (s.universe() - extension(s, f.left(), lookup)) | extension(s, f.right(), lookup);
    case Kind::Box: return s.box(extension(s, f.body(), lookup));
    case Kind::Rhd: return s.rhd(extension(s, f.left(), lookup), extension(s, f.right(), lookup));
  }
  return WorldSet{};
}

/// Postfix form of a formula whose leaves are numbered slots, for evaluating the same
/// formula under many assignments. Slots are the distinct atom and metavariable names,
/// metavariables first, each group sorted by name.
class Program {
 public:
  explicit Program(const Formula& f) {
    for (const auto& m : metas_of(f)) slots_.push_back({Kind::Meta, m});
    for (const auto& a : atoms_of(f)) slots_.push_back({Kind::Atom, a});
    emit(f);
    std::size_t depth = 0;
    for (const auto& op : ops_) {
      depth += (op.kind == Kind::Bottom || op.kind == Kind::Atom) ? 1 : 0;
      depth -= (op.kind == Kind::Implies || op.kind == Kind::Rhd) ? 1 : 0;
      max_depth_ = std::max(max_depth_, depth);
    }
  }

  struct Slot {
    Kind kind;
    std::string name;
  };

  const std::vector<Slot>& slots() const { return slots_; }

  template <VeltmanSemantics S>
  WorldSet run(const S& s, std::span<const WorldSet> values) const {
    constexpr std::size_t kInline = 64;
    std::array<WorldSet, kInline> small{};
    std::vector<WorldSet> big;
    WorldSet* stack = small.data();
    if (max_depth_ > kInline) {
      big.resize(max_depth_);
      stack = big.data();
    }
    std::size_t top = 0;
    const WorldSet all = s.universe();
    for (const auto& op : ops_) {
      switch (op.kind) {
        case Kind::Bottom: stack[top++] = WorldSet{}; break;
        case Kind::Atom: stack[top++] = values[op.slot]; break;
        case Kind::Box: stack[top - 1] = s.box(stack[top - 1]); break;
        case Kind::Implies:
          --top;
          stack[top - 1] = (all - stack[top - 1]) | stack[top];
          break;
        case Kind::Rhd:
          --top;
          stack[top - 1] = s.rhd(stack[top - 1], stack[top]);
          break;
        default: break;
      }
    }
    return stack[0];
  }

 private:
  struct Op {
    Kind kind;  // Atom stands for any slot
    unsigned slot;
  };

  void emit(const Formula& f) {
    switch (f.kind()) {
      case Kind::Bottom: ops_.push_back({Kind::Bottom, 0}); break;
      case Kind::Atom: case Kind::Meta: {
        unsigned i = 0;
        while (!(slots_[i].kind == f.kind() && slots_[i].name == f.name())) ++i;
        ops_.push_back({Kind::Atom, i});
        break;
      }
      case Kind::Box: emit(f.body()); ops_.push_back({Kind::Box, 0}); break;
      case Kind::Implies: case Kind::Rhd:
        emit(f.left());
        emit(f.right());
        ops_.push_back({f.kind(), 0});
        break;
    }
  }

  std::vector<Slot> slots_;
  std::vector<Op> ops_;
  std::size_t max_depth_ = 0;
};

/// A formula whose slots fail to hold everywhere under some assignment of world sets.
struct CounterAssignment {
  std::map<std::string, WorldSet> assignment;
  World world = 0;
};

/// Validity on the bare structure: every slot ranges over all subsets of worlds.
/// Assignments are visited in lexicographic order of (slot_0, slot_1, ...), so the
/// reported counter-assignment and world are the least ones.
template <VeltmanSemantics S>
std::optional<CounterAssignment> find_counter_assignment(const S& s, const Formula& f) {
  const Program prog(f);
  const std::size_t k = prog.slots().size();
  const WorldSet all = s.universe();
  const std::size_t n = s.world_count();
  if (k * n >= 63) throw Error("too many assignments to enumerate");
  std::vector<WorldSet> values(k);
  const std::uint64_t per_slot = std::uint64_t{1} << n;
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < k; ++i) total *= per_slot;
  for (std::uint64_t code = 0; code < total; ++code) {
    std::uint64_t c = code;
    for (std::size_t i = k; i-- > 0;) {
      values[i] = WorldSet(static_cast<WorldSet::Bits>(c % per_slot));
      c /= per_slot;
    }
    const WorldSet truth = prog.run(s, values);
    if (truth != all) {
      CounterAssignment out;
      for (std::size_t i = 0; i < k; ++i) out.assignment[prog.slots()[i].name] = values[i];
      out.world = (all - truth).min();
      return out;
    }
  }
  return std::nullopt;
}

/// Result of a decision procedure: either the property holds, or a witness refutes it.
template <class Witness>
struct Verdict {
  std::optional<Witness> counterexample;

  bool holds() const { return !counterexample.has_value(); }
  explicit operator bool() const { return holds(); }
  const Witness& witness() const { return *counterexample; }
};

}  // namespace ilvelt
