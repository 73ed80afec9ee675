#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "ilvelt/formula.hpp"
#include "ilvelt/frame.hpp"
#include "ilvelt/schema.hpp"
#include "ilvelt/semantics.hpp"
#include "ilvelt/world_set.hpp"

namespace ilvelt {

/// Finite generalized Veltman frame: S relates a base w and a source x to nonempty world
/// sets. The family of targets of each (w, x) is kept sorted by mask.
class GenFrame {
 public:
  explicit GenFrame(std::vector<std::string> names)
      : names_(std::move(names)), succ_(names_.size()), s_(names_.size() * names_.size()) {
    check_world_names(names_);
  }
  explicit GenFrame(std::size_t n) : GenFrame(default_world_names(n)) {}

  std::size_t world_count() const { return names_.size(); }
  WorldSet universe() const { return WorldSet::first(names_.size()); }
  const std::vector<std::string>& names() const { return names_; }
  const std::string& name(World w) const { return names_.at(w); }

  std::optional<World> find(const std::string& name) const {
    auto it = std::find(names_.begin(), names_.end(), name);
    if (it == names_.end()) return std::nullopt;
    return static_cast<World>(it - names_.begin());
  }
  World at(const std::string& name) const {
    if (auto w = find(name)) return *w;
    throw Error("unknown world '" + name + "'");
  }

  void add_r(World a, World b) { succ_.at(a).insert(b); }
  void set_successors(World a, WorldSet set) { succ_.at(a) = set; }

  /// Adds (w, x, Y). Returns whether it was new.
  bool add_s(World w, World x, WorldSet y) {
    auto& fam = s_.at(index(w, x));
    auto it = std::lower_bound(fam.begin(), fam.end(), y);
    if (it != fam.end() && *it == y) return false;
    fam.insert(it, y);
    return true;
  }

  bool r(World a, World b) const { return succ_[a].contains(b); }
  WorldSet successors(World a) const { return succ_[a]; }
  const std::vector<WorldSet>& targets(World w, World x) const { return s_[index(w, x)]; }
  bool s(World w, World x, WorldSet y) const {
    const auto& fam = targets(w, x);
    return std::binary_search(fam.begin(), fam.end(), y);
  }

  WorldSet box(WorldSet x) const {
    WorldSet out;
    for (World w = 0; w < succ_.size(); ++w)
      if (succ_[w].subset_of(x)) out.insert(w);
    return out;
  }

  /// {w : every R-successor x of w in a has some target Y inside b}
  WorldSet rhd(WorldSet a, WorldSet b) const {
    WorldSet out;
    for (World w = 0; w < succ_.size(); ++w) {
      bool ok = true;
      for (World x : succ_[w] & a) {
        const auto& fam = targets(w, x);
        if (std::none_of(fam.begin(), fam.end(), [&](WorldSet y) { return y.subset_of(b); })) {
          ok = false;
          break;
        }
      }
      if (ok) out.insert(w);
    }
    return out;
  }

  std::size_t triple_count() const {
    std::size_t total = 0;
    for (const auto& fam : s_) total += fam.size();
    return total;
  }

  friend bool operator==(const GenFrame&, const GenFrame&) = default;

 private:
  std::size_t index(World w, World x) const { return w * names_.size() + x; }

  std::vector<std::string> names_;
  std::vector<WorldSet> succ_;
  std::vector<std::vector<WorldSet>> s_;
};

struct GenModel {
  GenFrame genframe;
  Valuation valuation;

  std::size_t world_count() const { return genframe.world_count(); }
  WorldSet universe() const { return genframe.universe(); }
  WorldSet box(WorldSet x) const { return genframe.box(x); }
  WorldSet rhd(WorldSet x, WorldSet y) const { return genframe.rhd(x, y); }
};

inline std::vector<Violation> validate_genframe(const GenFrame& g) {
  std::vector<Violation> out;
  const auto& nm = g.names();
  const std::size_t n = g.world_count();
  std::vector<WorldSet> succ(n);
  for (World w = 0; w < n; ++w) succ[w] = g.successors(w);
  detail::check_r(nm, succ, out);
  auto triple = [&](World w, World x, WorldSet y) {
    return nm[x] + " S_" + nm[w] + " " + format_set(y, nm);
  };
  for (World w = 0; w < n; ++w) {
    for (World x = 0; x < n; ++x) {
      for (WorldSet y : g.targets(w, x)) {
        if (y.empty()) {
          detail::add_violation(out, "targets nonempty", {w, x}, triple(w, x, y) + " has an empty target");
          continue;
        }
        if (!g.r(w, x) || !y.subset_of(succ[w]))
          detail::add_violation(out, "S within R", {w, x},
                                triple(w, x, y) + " but not all of it is R-accessible from " + nm[w]);
        for (World m : y)
          for (WorldSet z : g.targets(w, m))
            if (!z.contains(m) && !g.s(w, x, z))
              detail::add_violation(out, "S quasi-transitive", {w, x, m},
                                    triple(w, x, y) + " and " + triple(w, m, z) + " but not " + triple(w, x, z));
      }
    }
    for (World x : succ[w]) {
      if (!g.s(w, x, WorldSet::single(x)))
        detail::add_violation(out, "S quasi-reflexive", {w, x},
                              nm[w] + " R " + nm[x] + " but not " + triple(w, x, WorldSet::single(x)));
      for (World y : succ[x])
        if (!g.s(w, x, WorldSet::single(y)))
          detail::add_violation(out, "R included in S", {w, x, y},
                                nm[w] + " R " + nm[x] + " R " + nm[y] + " but not " +
                                    triple(w, x, WorldSet::single(y)));
    }
  }
  return out;
}

inline void require_valid(const GenFrame& g) {
  auto v = validate_genframe(g);
  if (!v.empty()) throw Error("not a generalized Veltman frame: " + v.front().condition + ": " + v.front().message);
}

/// Least generalized frame containing the seed. R grows by transitivity and by the edges
/// each triple presupposes; S by quasi-reflexivity, R-induced singletons and
/// quasi-transitivity.
inline GenFrame close_genframe(const GenFrame& seed) {
  GenFrame g = seed;
  const std::size_t n = g.world_count();
  for (World w = 0; w < n; ++w)
    for (World x = 0; x < n; ++x)
      for (WorldSet y : g.targets(w, x))
        if (y.empty()) throw Error("empty target in " + g.name(x) + " S_" + g.name(w) + " {}");
  while (true) {
    std::vector<WorldSet> succ(n);
    for (World w = 0; w < n; ++w) {
      succ[w] = g.successors(w);
      for (World x = 0; x < n; ++x)
        for (WorldSet y : g.targets(w, x)) succ[w] |= y | WorldSet::single(x);
    }
    detail::transitive_closure(succ);
    if (auto w = detail::first_on_cycle(succ))
      throw Error("closure makes R cyclic through '" + g.name(*w) + "'");
    for (World w = 0; w < n; ++w) g.set_successors(w, succ[w]);

    bool changed = false;
    for (World w = 0; w < n; ++w) {
      for (World x : succ[w]) {
        changed |= g.add_s(w, x, WorldSet::single(x));
        for (World y : succ[x]) changed |= g.add_s(w, x, WorldSet::single(y));
      }
      // Quasi-transitivity, to a fixpoint for this base world.
      bool grew = true;
      while (grew) {
        grew = false;
        for (World x = 0; x < n; ++x) {
          const auto fam = g.targets(w, x);
          for (WorldSet y : fam)
            for (World m : y) {
              const auto next = g.targets(w, m);
              for (WorldSet z : next)
                if (!z.contains(m) && g.add_s(w, x, z)) grew = true;
            }
        }
        changed |= grew;
      }
    }
    if (!changed) return g;
  }
}

/// Truth of f at w, generalized clause for rhd.
inline bool geval(const GenModel& m, World w, const Formula& f) {
  if (w >= m.world_count()) throw Error("unknown world index " + std::to_string(w));
  return truth_set(m, f).contains(w);
}

inline bool geval(const GenModel& m, const std::string& world, const Formula& f) {
  return geval(m, m.genframe.at(world), f);
}

/// Generalized frame with S' = {(w, x, Y) : Y nonempty, x S_w y for all y in Y}.
inline GenFrame lift(const Frame& fr) {
  require_valid(fr);
  GenFrame g(fr.names());
  const std::size_t n = fr.world_count();
  for (World w = 0; w < n; ++w) {
    g.set_successors(w, fr.successors(w));
    for (World x : fr.successors(w))
      for_each_subset(fr.s_image(w, x), [&](WorldSet y) {
        if (!y.empty()) g.add_s(w, x, y);
      });
  }
  return g;
}

inline GenModel lift(const Model& m) { return GenModel{lift(m.frame), m.valuation}; }

}  // namespace ilvelt
