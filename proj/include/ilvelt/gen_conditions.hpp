#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <set>
#include <vector>

#include "ilvelt/genframe.hpp"
#include "ilvelt/schema.hpp"
#include "ilvelt/semantics.hpp"
#include "ilvelt/world_set.hpp"

namespace ilvelt {

/// w R x R y with y S_w Y, and no Y' inside Y with x S_w Y' whose members only see
/// successors of x.
struct M0Witness {
  World w, x, y;
  WorldSet big_y;
};

inline Verdict<M0Witness> check_M0_condition(const GenFrame& g) {
  require_valid(g);
  const std::size_t n = g.world_count();
  for (World w = 0; w < n; ++w)
    for (World x : g.successors(w)) {
      const WorldSet above_x = g.successors(x);
      for (World y : g.successors(x))
        for (WorldSet big_y : g.targets(w, y)) {
          const auto& fam = g.targets(w, x);
          const bool ok = std::any_of(fam.begin(), fam.end(), [&](WorldSet yp) {
            if (!yp.subset_of(big_y)) return false;
            for (World m : yp)
              if (!g.successors(m).subset_of(above_x)) return false;
            return true;
          });
          if (!ok) return {M0Witness{w, x, y, big_y}};
        }
    }
  return {};
}

/// w R x R y S_w Y, and Z meets the successors of every member of Y, but no Z' inside Z
/// has y S_x Z'.
struct P0Witness {
  World w, x, y;
  WorldSet big_y;
  WorldSet z;
};

namespace detail {

/// Images of choice functions picking one R-successor for each member of y, sorted by
/// mask. Empty when some member has no successor.
inline std::vector<WorldSet> successor_selections(const GenFrame& g, WorldSet y) {
  std::set<WorldSet> images{WorldSet{}};
  for (World m : y) {
    std::set<WorldSet> next;
    for (WorldSet img : images)
      for (World z : g.successors(m)) next.insert(img | WorldSet::single(z));
    images = std::move(next);
  }
  return {images.begin(), images.end()};
}

}  // namespace detail

inline Verdict<P0Witness> check_P0_condition(const GenFrame& g) {
  require_valid(g);
  const std::size_t n = g.world_count();
  for (World w = 0; w < n; ++w)
    for (World x : g.successors(w))
      for (World y : g.successors(x)) {
        const auto& fam = g.targets(x, y);
        for (WorldSet big_y : g.targets(w, y))
          for (WorldSet z : detail::successor_selections(g, big_y)) {
            const bool ok = std::any_of(fam.begin(), fam.end(), [&](WorldSet zp) { return zp.subset_of(z); });
            if (!ok) return {P0Witness{w, x, y, big_y, z}};
          }
      }
  return {};
}

struct ChoiceSet {
  World base, source;
  WorldSet members;
};

/// Sets meeting every target of (w, x), inside the union of those targets, by mask.
/// With `minimal`, only the inclusion-minimal ones.
inline std::vector<ChoiceSet> choice_sets(const GenFrame& g, World w, World x, bool minimal) {
  if (!g.r(w, x)) throw Error(g.name(w) + " does not see " + g.name(x));
  const auto& fam = g.targets(w, x);
  WorldSet all;
  for (WorldSet t : fam) all |= t;
  auto hits = [&](WorldSet gamma) {
    return std::all_of(fam.begin(), fam.end(), [&](WorldSet t) { return t.intersects(gamma); });
  };
  std::vector<ChoiceSet> out;
  for_each_subset(all, [&](WorldSet gamma) {
    if (!hits(gamma)) return;
    if (minimal) {
      for (World m : gamma)
        if (hits(gamma - WorldSet::single(m))) return;
    }
    out.push_back(ChoiceSet{w, x, gamma});
  });
  return out;
}

/// w R x R y S_w Y together with every minimal choice set for (x, y) that no Y' inside Y
/// answers. `failing` is sorted by mask; its first element is the least witness.
struct RWitness {
  World w, x, y;
  WorldSet big_y;
  std::vector<WorldSet> failing;
};

inline Verdict<RWitness> check_R_condition(const GenFrame& g) {
  require_valid(g);
  const std::size_t n = g.world_count();
  for (World w = 0; w < n; ++w)
    for (World x : g.successors(w))
      for (World y : g.successors(x)) {
        const auto& fam = g.targets(w, x);
        std::vector<ChoiceSet> gammas;
        bool computed = false;
        for (WorldSet big_y : g.targets(w, y)) {
          if (!computed) {
            gammas = choice_sets(g, x, y, true);
            computed = true;
          }
          RWitness wit{w, x, y, big_y, {}};
          for (const auto& gamma : gammas) {
            const bool ok = std::any_of(fam.begin(), fam.end(), [&](WorldSet yp) {
              if (!yp.subset_of(big_y)) return false;
              for (World m : yp)
                if (!g.successors(m).subset_of(gamma.members)) return false;
              return true;
            });
            if (!ok) wit.failing.push_back(gamma.members);
          }
          if (!wit.failing.empty()) return {std::move(wit)};
        }
      }
  return {};
}

/// A finite presentation of the Not-W configuration at base w: every z in Z has a target
/// inside `u` (the union of the Y_i), and every such target has a member seeing into Z.
struct NotWWitness {
  World w;
  World z0;
  WorldSet u;
  WorldSet z;
  std::vector<WorldSet> family;  // targets inside u of members of Z
  WorldSet reachable;            // closure of {z0} under taking S_w targets
};

namespace detail {

inline WorldSet r_preimage(const GenFrame& g, WorldSet z) {
  WorldSet out;
  for (World y = 0; y < g.world_count(); ++y)
    if (g.successors(y).intersects(z)) out.insert(y);
  return out;
}

/// Greatest Z within w's successors such that every member has a target inside u and every
/// target inside u has a member with an R-successor in Z.
inline WorldSet not_w_core(const GenFrame& g, World w, WorldSet u) {
  WorldSet z;
  for (World c : g.successors(w)) {
    const auto& fam = g.targets(w, c);
    if (std::any_of(fam.begin(), fam.end(), [&](WorldSet t) { return t.subset_of(u); })) z.insert(c);
  }
  bool removed = true;
  while (removed && !z.empty()) {
    removed = false;
    const WorldSet pre = r_preimage(g, z);
    for (World c : z) {
      const auto& fam = g.targets(w, c);
      if (std::any_of(fam.begin(), fam.end(), [&](WorldSet t) { return t.subset_of(u) && !t.intersects(pre); })) {
        z.erase(c);
        removed = true;
      }
    }
  }
  return z;
}

}  // namespace detail

/// Not-W holds iff some base w and some U admit a nonempty core.
/// Bases and U are tried in increasing order, so the witness is the least one.
inline std::optional<NotWWitness> find_not_W(const GenFrame& g) {
  require_valid(g);
  const std::size_t n = g.world_count();
  for (World w = 0; w < n; ++w) {
    std::optional<NotWWitness> found;
    any_subset(g.successors(w), [&](WorldSet u) {
      const WorldSet z = detail::not_w_core(g, w, u);
      if (z.empty()) return false;
      NotWWitness wit{w, z.min(), u, z, {}, {}};
      std::set<WorldSet> fam;
      for (World c : z)
        for (WorldSet t : g.targets(w, c))
          if (t.subset_of(u)) fam.insert(t);
      wit.family.assign(fam.begin(), fam.end());
      WorldSet reach = WorldSet::single(wit.z0);
      for (bool grew = true; grew;) {
        grew = false;
        for (World c : reach)
          for (WorldSet t : g.targets(w, c))
            if (!t.subset_of(reach)) {
              reach |= t;
              grew = true;
            }
      }
      wit.reachable = reach;
      found = std::move(wit);
      return true;
    });
    if (found) return found;
  }
  return std::nullopt;
}

/// True iff Not-W holds. The witness lives in `find_not_W`.
inline bool check_not_W(const GenFrame& g) { return find_not_W(g).has_value(); }

inline Verdict<CounterAssignment> genframe_valid_schema(const GenFrame& g, const Schema& s) {
  require_valid(g);
  return {find_counter_assignment(g, s.body)};
}

inline Verdict<CounterAssignment> genframe_valid_schema(const GenFrame& g, SchemaId id) {
  return genframe_valid_schema(g, schema(id));
}

inline Verdict<CounterAssignment> genframe_valid_formula(const GenFrame& g, const Formula& f) {
  require_valid(g);
  return {find_counter_assignment(g, f)};
}

}  // namespace ilvelt
