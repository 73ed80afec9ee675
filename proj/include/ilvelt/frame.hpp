#pragma once

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

#include "ilvelt/formula.hpp"
#include "ilvelt/schema.hpp"
#include "ilvelt/semantics.hpp"
#include "ilvelt/world_set.hpp"

namespace ilvelt {

/// One failed structural condition, with the worlds that witness it.
struct Violation {
  std::string condition;
  std::vector<World> worlds;
  std::string message;
};

inline std::vector<std::string> default_world_names(std::size_t n) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("w" + std::to_string(i));
  return names;
}

inline void check_world_names(const std::vector<std::string>& names) {
  if (names.empty()) throw Error("a structure needs at least one world");
  if (names.size() > kMaxWorlds) throw Error("too many worlds (limit " + std::to_string(kMaxWorlds) + ")");
  for (std::size_t i = 0; i < names.size(); ++i)
    for (std::size_t j = i + 1; j < names.size(); ++j)
      if (names[i] == names[j]) throw Error("duplicate world id '" + names[i] + "'");
}

/// Finite ordinary Veltman frame. R is stored as successor sets; S as, for each base
/// world x and source world y, the set of z with y S_x z.
class Frame {
 public:
  explicit Frame(std::vector<std::string> names)
      : names_(std::move(names)), succ_(names_.size()), s_(names_.size() * names_.size()) {
    check_world_names(names_);
  }
  explicit Frame(std::size_t n) : Frame(default_world_names(n)) {}

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
  void add_s(World base, World from, World to) { s_.at(index(base, from)).insert(to); }
  void set_successors(World a, WorldSet set) { succ_.at(a) = set; }
  void set_s_image(World base, World from, WorldSet set) { s_.at(index(base, from)) = set; }

  bool r(World a, World b) const { return succ_[a].contains(b); }
  WorldSet successors(World a) const { return succ_[a]; }
  bool s(World base, World from, World to) const { return s_[index(base, from)].contains(to); }
  WorldSet s_image(World base, World from) const { return s_[index(base, from)]; }

  /// {w : every R-successor of w is in x}
  WorldSet box(WorldSet x) const {
    WorldSet out;
    for (World w = 0; w < succ_.size(); ++w)
      if (succ_[w].subset_of(x)) out.insert(w);
    return out;
  }

  /// {w : every R-successor u of w in x has some S_w-successor in y}
  WorldSet rhd(WorldSet x, WorldSet y) const {
    WorldSet out;
    const std::size_t n = succ_.size();
    for (World w = 0; w < n; ++w) {
      bool ok = true;
      for (World u : succ_[w] & x) {
        if (!s_[w * n + u].intersects(y)) { ok = false; break; }
      }
      if (ok) out.insert(w);
    }
    return out;
  }

  friend bool operator==(const Frame&, const Frame&) = default;

 private:
  std::size_t index(World base, World from) const { return base * names_.size() + from; }

  std::vector<std::string> names_;
  std::vector<WorldSet> succ_;
  std::vector<WorldSet> s_;
};

/// Frame plus valuation.
struct Model {
  Frame frame;
  Valuation valuation;

  std::size_t world_count() const { return frame.world_count(); }
  WorldSet universe() const { return frame.universe(); }
  WorldSet box(WorldSet x) const { return frame.box(x); }
  WorldSet rhd(WorldSet x, WorldSet y) const { return frame.rhd(x, y); }
};

namespace detail {

inline std::string join_names(const std::vector<std::string>& names, std::initializer_list<World> ws) {
  std::string out;
  for (World w : ws) {
    if (!out.empty()) out += ", ";
    out += names[w];
  }
  return out;
}

/// Transitive closure of a successor relation (Warshall on bitsets).
inline void transitive_closure(std::vector<WorldSet>& succ) {
  const std::size_t n = succ.size();
  for (World k = 0; k < n; ++k)
    for (World i = 0; i < n; ++i)
      if (succ[i].contains(k)) succ[i] |= succ[k];
}

inline std::optional<World> first_on_cycle(const std::vector<WorldSet>& closed_succ) {
  for (World w = 0; w < closed_succ.size(); ++w)
    if (closed_succ[w].contains(w)) return w;
  return std::nullopt;
}

inline void add_violation(std::vector<Violation>& out, std::string cond, std::vector<World> ws, std::string msg) {
  out.push_back(Violation{std::move(cond), std::move(ws), std::move(msg)});
}

/// Violations of transitivity and acyclicity of R (shared with generalized frames).
inline void check_r(const std::vector<std::string>& names, const std::vector<WorldSet>& succ,
                    std::vector<Violation>& out) {
  const std::size_t n = succ.size();
  for (World x = 0; x < n; ++x)
    for (World y : succ[x])
      for (World z : succ[y])
        if (!succ[x].contains(z))
          add_violation(out, "R transitive", {x, y, z},
                        names[x] + " R " + names[y] + " R " + names[z] + " but not " + names[x] + " R " + names[z]);
  auto closed = succ;
  transitive_closure(closed);
  if (auto w = first_on_cycle(closed))
    add_violation(out, "R conversely well-founded", {*w}, "R has a cycle through " + names[*w]);
}

}  // namespace detail

/// Checks the six frame conditions. Empty result means the frame is a Veltman frame.
inline std::vector<Violation> validate_frame(const Frame& fr) {
  std::vector<Violation> out;
  const auto& nm = fr.names();
  const std::size_t n = fr.world_count();
  std::vector<WorldSet> succ(n);
  for (World w = 0; w < n; ++w) succ[w] = fr.successors(w);
  detail::check_r(nm, succ, out);
  for (World x = 0; x < n; ++x) {
    for (World y = 0; y < n; ++y) {
      const WorldSet img = fr.s_image(x, y);
      if (img.empty()) continue;
      if (!fr.r(x, y))
        detail::add_violation(out, "S within R", {x, y}, nm[y] + " S_" + nm[x] + " _ but not " + nm[x] + " R " + nm[y]);
      for (World z : img - fr.successors(x))
        detail::add_violation(out, "S within R", {x, y, z},
                              nm[y] + " S_" + nm[x] + " " + nm[z] + " but not " + nm[x] + " R " + nm[z]);
    }
    for (World y : fr.successors(x)) {
      if (!fr.s(x, y, y))
        detail::add_violation(out, "S reflexive", {x, y},
                              nm[x] + " R " + nm[y] + " but not " + nm[y] + " S_" + nm[x] + " " + nm[y]);
      for (World z : fr.successors(y))
        if (!fr.s(x, y, z))
          detail::add_violation(out, "R included in S", {x, y, z},
                                detail::join_names(nm, {x, y, z}) + ": " + nm[x] + " R " + nm[y] + " R " + nm[z] +
                                    " but not " + nm[y] + " S_" + nm[x] + " " + nm[z]);
    }
    for (World u = 0; u < n; ++u)
      for (World v : fr.s_image(x, u))
        for (World w : fr.s_image(x, v))
          if (!fr.s(x, u, w))
            detail::add_violation(out, "S transitive", {x, u, v, w},
                                  nm[u] + " S_" + nm[x] + " " + nm[v] + " S_" + nm[x] + " " + nm[w] + " but not " +
                                      nm[u] + " S_" + nm[x] + " " + nm[w]);
  }
  return out;
}

inline void require_valid(const Frame& fr) {
  auto v = validate_frame(fr);
  if (!v.empty()) throw Error("not a Veltman frame: " + v.front().condition + ": " + v.front().message);
}

/// Least Veltman frame containing the seed: R is closed transitively and extended by the
/// R-edges every S-triple presupposes; S is made reflexive on successors, made to
/// contain R-induced pairs, and closed transitively per base world.
inline Frame close_frame(const Frame& seed) {
  Frame fr = seed;
  const std::size_t n = fr.world_count();
  while (true) {
    std::vector<WorldSet> succ(n);
    for (World x = 0; x < n; ++x) {
      succ[x] = fr.successors(x);
      for (World y = 0; y < n; ++y) {
        const WorldSet img = fr.s_image(x, y);
        if (!img.empty()) succ[x] |= img | WorldSet::single(y);
      }
    }
    detail::transitive_closure(succ);
    if (auto w = detail::first_on_cycle(succ))
      throw Error("closure makes R cyclic through '" + fr.name(*w) + "'");
    for (World x = 0; x < n; ++x) fr.set_successors(x, succ[x]);

    bool changed = false;
    for (World x = 0; x < n; ++x) {
      std::vector<WorldSet> rel(n);
      for (World y = 0; y < n; ++y) rel[y] = fr.s_image(x, y);
      for (World y : succ[x]) rel[y] |= WorldSet::single(y) | succ[y];
      detail::transitive_closure(rel);
      for (World y = 0; y < n; ++y) {
        if (rel[y] != fr.s_image(x, y)) {
          fr.set_s_image(x, y, rel[y]);
          changed = true;
        }
      }
    }
    // New S pairs stay inside R, so an unchanged S means R is stable too.
    if (!changed) return fr;
  }
}

/// Truth of f at w. Throws on unknown worlds, undeclared atoms and metavariables.
inline bool eval(const Model& m, World w, const Formula& f) {
  if (w >= m.world_count()) throw Error("unknown world index " + std::to_string(w));
  const WorldSet ext = extension(m, f, [&](const Formula& leaf) {
    if (leaf.is(Kind::Meta)) throw Error("metavariable " + leaf.name() + " in an object formula");
    auto it = m.valuation.find(leaf.name());
    if (it == m.valuation.end()) throw Error("atom '" + leaf.name() + "' has no valuation");
    return it->second;
  });
  return ext.contains(w);
}

inline bool eval(const Model& m, const std::string& world, const Formula& f) {
  return eval(m, m.frame.at(world), f);
}

/// Truth set of an object formula in a model (atoms must be declared).
template <class M>
WorldSet truth_set(const M& m, const Formula& f) {
  return extension(m, f, [&](const Formula& leaf) {
    if (leaf.is(Kind::Meta)) throw Error("metavariable " + leaf.name() + " in an object formula");
    auto it = m.valuation.find(leaf.name());
    if (it == m.valuation.end()) throw Error("atom '" + leaf.name() + "' has no valuation");
    return it->second;
  });
}

/// x R y R z, z S_x u, u R v, but not z S_y v.
struct RFrameWitness {
  World x, y, z, u, v;
};

/// Decides  x R y R z S_x u R v  =>  z S_y v.  Witnesses are lexicographically least.
inline Verdict<RFrameWitness> check_R_frame_condition(const Frame& fr) {
  require_valid(fr);
  const std::size_t n = fr.world_count();
  for (World x = 0; x < n; ++x)
    for (World y : fr.successors(x))
      for (World z : fr.successors(y))
        for (World u : fr.s_image(x, z)) {
          const WorldSet missing = fr.successors(u) - fr.s_image(y, z);
          if (!missing.empty()) return {RFrameWitness{x, y, z, u, missing.min()}};
        }
  return {};
}

/// Validity of a schema on a frame: all subset assignments to its metavariables, all worlds.
inline Verdict<CounterAssignment> frame_valid_schema(const Frame& fr, const Schema& s) {
  require_valid(fr);
  return {find_counter_assignment(fr, s.body)};
}

inline Verdict<CounterAssignment> frame_valid_schema(const Frame& fr, SchemaId id) {
  return frame_valid_schema(fr, schema(id));
}

/// Frame validity of an arbitrary formula; atoms are quantified like metavariables.
inline Verdict<CounterAssignment> frame_valid_formula(const Frame& fr, const Formula& f) {
  require_valid(fr);
  return {find_counter_assignment(fr, f)};
}

}  // namespace ilvelt
