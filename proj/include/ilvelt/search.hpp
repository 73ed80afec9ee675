#pragma once

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <string>
#include <thread>
#include <unordered_map>
#include <variant>
#include <vector>

#include "ilvelt/algebra.hpp"
#include "ilvelt/correspond.hpp"
#include "ilvelt/enumerate.hpp"
#include "ilvelt/frame.hpp"
#include "ilvelt/gen_conditions.hpp"
#include "ilvelt/genframe.hpp"
#include "ilvelt/schema.hpp"

namespace ilvelt {

enum class SearchOutcome { Found, BoundExhausted, BudgetExhausted };

inline const char* outcome_name(SearchOutcome o) {
  switch (o) {
    case SearchOutcome::Found: return "found";
    case SearchOutcome::BoundExhausted: return "bound exhausted";
    case SearchOutcome::BudgetExhausted: return "budget exhausted";
  }
  return "?";
}

/// A frame property: validity of a schema or a hand-coded frame condition.
struct Requirement {
  std::variant<SchemaId, ConditionId> what;

  std::string name() const {
    if (auto s = std::get_if<SchemaId>(&what)) return schema_name(*s);
    return condition_name(std::get<ConditionId>(what));
  }
  friend bool operator==(const Requirement&, const Requirement&) = default;
};

/// Condition names (M0, P0, R, NotW or the full ids) are tried first, then schema names.
inline Requirement parse_requirement(const std::string& name, StructureKind kind) {
  try {
    return Requirement{condition_from_name(name, kind)};
  } catch (const Error&) {
  }
  if (auto s = schema_from_name(name)) return Requirement{*s};
  throw Error("unknown schema or condition '" + name + "'");
}

inline bool satisfies(const GenFrame& g, const Requirement& r) {
  if (auto s = std::get_if<SchemaId>(&r.what)) return genframe_valid_schema(g, *s).holds();
  return decide_condition(g, std::get<ConditionId>(r.what));
}

inline bool satisfies(const Frame& fr, const Requirement& r) {
  if (auto s = std::get_if<SchemaId>(&r.what)) return frame_valid_schema(fr, *s).holds();
  return decide_condition(fr, std::get<ConditionId>(r.what));
}

struct SearchSpec {
  StructureKind kind = StructureKind::Generalized;
  std::size_t max_worlds = 8;
  std::vector<Requirement> valid;
  Requirement invalid{ConditionId::M0set};
  std::size_t max_seeds = 2;              // seed triples closed into each candidate S
  std::optional<double> budget_seconds;   // none means unlimited
  unsigned workers = 1;
  bool prune = true;
  std::optional<std::uint64_t> random_seed;  // sample randomly instead of enumerating
  std::size_t samples = 10000;
};

struct SearchStats {
  std::size_t candidates = 0;  // closed structures examined
  std::size_t pruned = 0;      // order types skipped by the prefilter
  double seconds = 0;
};

struct SeparationResult {
  SearchOutcome outcome = SearchOutcome::BoundExhausted;
  std::optional<Frame> frame;
  std::optional<GenFrame> genframe;
  SearchStats stats;
};

namespace detail {

/// Encoding of the order alone, least over renamings that keep world 0 first. Worlds are
/// grouped by an isomorphism-invariant key and only permuted within groups.
inline std::string order_code(const std::vector<WorldSet>& succ) {
  const std::size_t n = succ.size();
  std::vector<WorldSet> pred(n);
  for (World a = 0; a < n; ++a)
    for (World b : succ[a]) pred[b].insert(a);
  using Key = std::pair<std::size_t, std::size_t>;
  std::vector<std::pair<Key, World>> keyed;
  for (World a = 1; a < n; ++a) keyed.push_back({{pred[a].size(), succ[a].size()}, a});
  std::sort(keyed.begin(), keyed.end());
  std::vector<std::pair<std::size_t, std::size_t>> groups;  // [begin, end) into keyed
  for (std::size_t i = 0; i < keyed.size();) {
    std::size_t j = i;
    while (j < keyed.size() && keyed[j].first == keyed[i].first) ++j;
    groups.push_back({i, j});
    i = j;
  }
  std::vector<World> order(n);  // order[new label] = old world
  order[0] = 0;
  for (std::size_t i = 0; i < keyed.size(); ++i) order[i + 1] = keyed[i].second;
  std::string best;
  std::function<void(std::size_t)> rec = [&](std::size_t gi) {
    if (gi == groups.size()) {
      std::vector<World> label(n);
      for (World i = 0; i < n; ++i) label[order[i]] = i;
      std::string code(n * n, '0');
      for (World a = 0; a < n; ++a)
        for (World b : succ[a]) code[label[a] * n + label[b]] = '1';
      if (best.empty() || code < best) best = std::move(code);
      return;
    }
    auto first = order.begin() + 1 + groups[gi].first;
    auto last = order.begin() + 1 + groups[gi].second;
    std::sort(first, last);
    do {
      rec(gi + 1);
    } while (std::next_permutation(first, last));
  };
  rec(0);
  return best;
}

}  // namespace detail

/// Strict orders on n worlds in which world 0 sees every other world, one per
/// isomorphism class, in a fixed deterministic order. Labels respect the order
/// (a R b implies a < b).
inline std::vector<std::vector<WorldSet>> rooted_orders(std::size_t n) {
  std::vector<std::vector<WorldSet>> out;
  if (n == 0) return out;
  std::vector<std::pair<World, World>> free;
  for (World a = 1; a < n; ++a)
    for (World b = a + 1; b < n; ++b) free.emplace_back(a, b);
  std::set<std::string> seen;
  const std::uint64_t total = std::uint64_t{1} << free.size();
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    std::vector<WorldSet> succ(n);
    succ[0] = WorldSet::first(n) - WorldSet::single(0);
    for (std::size_t i = 0; i < free.size(); ++i)
      if ((mask >> i) & 1u) succ[free[i].first].insert(free[i].second);
    bool ok = true;
    for (World a = 1; a < n && ok; ++a)
      for (World b : succ[a])
        if (!succ[b].subset_of(succ[a])) { ok = false; break; }
    if (!ok) continue;
    if (seen.insert(detail::order_code(succ)).second) out.push_back(std::move(succ));
  }
  return out;
}

namespace detail {

/// Sound R-level filters: if one returns false, no S over this order can violate the
/// target condition.
inline bool order_may_violate(const std::vector<WorldSet>& succ, const Requirement& target) {
  auto c = std::get_if<ConditionId>(&target.what);
  if (!c) return true;
  const std::size_t n = succ.size();
  switch (*c) {
    case ConditionId::M0set:
      // Needs w R x R y and some u seen by w, outside x and x's successors, with a
      // successor x does not see.
      for (World w = 0; w < n; ++w)
        for (World x : succ[w]) {
          if (succ[x].empty()) continue;
          for (World u : succ[w] - succ[x] - WorldSet::single(x))
            if (!succ[u].subset_of(succ[x])) return true;
        }
      return false;
    case ConditionId::Rset:
      // Needs w R x R y and some u seen by w, other than y, that has successors.
      for (World w = 0; w < n; ++w)
        for (World x : succ[w])
          for (World y : succ[x])
            for (World u : succ[w] - WorldSet::single(y))
              if (!succ[u].empty()) return true;
      return false;
    case ConditionId::Rordinary:
    case ConditionId::P0ordinary:
      // Needs x R y R z and some u seen by x, other than z, that has successors.
      for (World x = 0; x < n; ++x)
        for (World y : succ[x])
          for (World z : succ[y])
            for (World u : succ[x] - WorldSet::single(z))
              if (!succ[u].empty()) return true;
      return false;
    default: return true;
  }
}

inline std::string exact_code(const GenFrame& g) {
  std::vector<World> id(g.world_count());
  std::iota(id.begin(), id.end(), 0);
  return encode(g, id);
}

inline std::string exact_code(const Frame& fr) {
  std::vector<World> id(fr.world_count());
  std::iota(id.begin(), id.end(), 0);
  return encode(fr, id);
}

/// Base closure of an order, the optional seed triples over it (in a fixed order), and a
/// way to add one seed.
struct GenSeeds {
  using Structure = GenFrame;
  struct Seed {
    World w, x;
    WorldSet y;
  };
  GenFrame base;
  std::vector<Seed> seeds;

  explicit GenSeeds(const std::vector<WorldSet>& succ) : base(succ.size()) {
    const std::size_t n = succ.size();
    for (World w = 0; w < n; ++w) base.set_successors(w, succ[w]);
    base = close_genframe(base);
    for (World w = 0; w < n; ++w)
      for (World x : succ[w])
        for_each_subset(succ[w], [&](WorldSet y) {
          if (!y.empty() && !base.s(w, x, y)) seeds.push_back({w, x, y});
        });
  }
  void add(GenFrame& g, std::size_t i) const { g.add_s(seeds[i].w, seeds[i].x, seeds[i].y); }
  static GenFrame close(const GenFrame& g) { return close_genframe(g); }
};

struct FrameSeeds {
  using Structure = Frame;
  struct Seed {
    World x, y, z;
  };
  Frame base;
  std::vector<Seed> seeds;

  explicit FrameSeeds(const std::vector<WorldSet>& succ) : base(succ.size()) {
    const std::size_t n = succ.size();
    for (World x = 0; x < n; ++x) base.set_successors(x, succ[x]);
    base = close_frame(base);
    for (World x = 0; x < n; ++x)
      for (World y : succ[x])
        for (World z : succ[x])
          if (y != z && !base.s(x, y, z)) seeds.push_back({x, y, z});
  }
  void add(Frame& fr, std::size_t i) const { fr.add_s(seeds[i].x, seeds[i].y, seeds[i].z); }
  static Frame close(const Frame& fr) { return close_frame(fr); }
};

/// Calls visit on each distinct closure of at most max_seeds seeds, by seed count and
/// then lexicographic seed indices. Stops when visit returns true; returns that.
template <class Seeds, class Visit>
bool for_each_closure(const Seeds& space, std::size_t max_seeds, Visit&& visit) {
  std::set<std::string> seen;
  std::vector<std::size_t> pick;
  auto try_pick = [&]() {
    auto f = space.base;
    for (std::size_t i : pick) space.add(f, i);
    f = Seeds::close(f);
    if (!seen.insert(exact_code(f)).second) return false;
    return visit(f);
  };
  const std::size_t m = space.seeds.size();
  for (std::size_t k = 0; k <= std::min(max_seeds, m); ++k) {
    pick.resize(k);
    std::iota(pick.begin(), pick.end(), 0);
    while (true) {
      if (try_pick()) return true;
      // Next k-combination in lexicographic order.
      std::size_t i = k;
      while (i > 0 && pick[i - 1] == m - k + i - 1) --i;
      if (i == 0) break;
      ++pick[i - 1];
      for (std::size_t j = i; j < k; ++j) pick[j] = pick[j - 1] + 1;
    }
  }
  return false;
}

class Deadline {
 public:
  explicit Deadline(std::optional<double> seconds) : start_(std::chrono::steady_clock::now()), limit_(seconds) {}
  bool passed() const { return limit_ && elapsed() > *limit_; }
  double elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
  std::optional<double> limit_;
};

/// Runs `check(order, stop)` over the orders, in parallel, and keeps the hit with the least
/// index. `check` returns a structure or nothing; it should poll `stop()` and give up early.
/// Returns the least index hit, and whether every order before it was fully examined.
template <class T, class Check>
std::pair<std::optional<T>, bool> least_hit(const std::vector<std::vector<WorldSet>>& orders, unsigned workers,
                                            const Deadline& deadline, Check&& check) {
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> best{SIZE_MAX};
  std::atomic<bool> timed_out{false};
  std::vector<char> finished(orders.size(), 0);
  std::map<std::size_t, T> hits;
  std::mutex mu;
  auto work = [&]() {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= orders.size() || i > best.load()) return;
      auto stop = [&]() {
        if (i > best.load()) return true;
        if (deadline.passed()) {
          timed_out = true;
          return true;
        }
        return false;
      };
      std::optional<T> hit = check(orders[i], stop);
      std::lock_guard lock(mu);
      if (hit) {
        hits.emplace(i, std::move(*hit));
        std::size_t cur = best.load();
        while (i < cur && !best.compare_exchange_weak(cur, i)) {
        }
        finished[i] = 1;
      } else if (!stop()) {
        finished[i] = 1;
      }
    }
  };
  const unsigned k = std::max(1u, workers);
  if (k == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < k; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  const std::size_t b = best.load();
  const std::size_t upto = std::min(b, orders.size());
  bool complete = true;
  for (std::size_t i = 0; i < upto; ++i)
    if (!finished[i]) complete = false;
  if (b != SIZE_MAX && complete) return {std::move(hits.at(b)), true};
  return {std::nullopt, complete && !timed_out};
}

template <class F>
bool meets_spec(const F& f, const SearchSpec& spec) {
  if (satisfies(f, spec.invalid)) return false;
  for (const auto& r : spec.valid)
    if (!satisfies(f, r)) return false;
  return true;
}

template <class Seeds>
SeparationResult separate(const SearchSpec& spec) {
  using F = typename Seeds::Structure;
  Deadline deadline(spec.budget_seconds);
  SeparationResult res;
  std::atomic<std::size_t> candidates{0}, pruned{0};
  auto finish = [&](SearchOutcome o) {
    res.outcome = o;
    res.stats.candidates = candidates;
    res.stats.pruned = pruned;
    res.stats.seconds = deadline.elapsed();
    return res;
  };
  for (std::size_t n = 1; n <= spec.max_worlds; ++n) {
    if (deadline.passed()) return finish(SearchOutcome::BudgetExhausted);
    const auto orders = rooted_orders(n);
    auto check = [&](const std::vector<WorldSet>& succ, auto&& stop) -> std::optional<F> {
      if (spec.prune && !order_may_violate(succ, spec.invalid)) {
        ++pruned;
        return std::nullopt;
      }
      const Seeds space(succ);
      std::optional<F> hit;
      std::size_t polled = 0;
      for_each_closure(space, spec.max_seeds, [&](const F& f) {
        if ((++polled & 15u) == 0 && stop()) return true;
        ++candidates;
        if (meets_spec(f, spec)) {
          hit = f;
          return true;
        }
        return false;
      });
      return hit;
    };
    auto [hit, complete] = least_hit<F>(orders, spec.workers, deadline, check);
    if (hit) {
      // Self-check with the public deciders, independent of the filters above.
      if constexpr (std::is_same_v<F, GenFrame>) {
        require_valid(*hit);
        if (!meets_spec(*hit, spec)) throw Error("search produced a structure that fails its own check");
        res.genframe = std::move(*hit);
      } else {
        require_valid(*hit);
        if (!meets_spec(*hit, spec)) throw Error("search produced a structure that fails its own check");
        res.frame = std::move(*hit);
      }
      return finish(SearchOutcome::Found);
    }
    if (!complete) return finish(SearchOutcome::BudgetExhausted);
  }
  return finish(SearchOutcome::BoundExhausted);
}

}  // namespace detail

/// Least structure (by world count, order type, then seed triples) that satisfies every
/// `valid` requirement and violates `invalid`. Candidates are rooted, which loses nothing:
/// all properties involved are decided by generated subframes.
inline SeparationResult find_separating_structure(const SearchSpec& spec) {
  if (spec.max_worlds < 1) throw Error("max-worlds must be at least 1");
  for (const auto& r : spec.valid)
    if (r == spec.invalid) throw Error("'" + r.name() + "' is both required and refuted");
  for (const auto& r : spec.valid)
    if (auto c = std::get_if<ConditionId>(&r.what); c && condition_kind(*c) != spec.kind)
      throw Error(r.name() + " does not apply to this kind of frame");
  if (auto c = std::get_if<ConditionId>(&spec.invalid.what); c && condition_kind(*c) != spec.kind)
    throw Error(spec.invalid.name() + " does not apply to this kind of frame");

  if (spec.random_seed) {
    detail::Deadline deadline(spec.budget_seconds);
    std::mt19937_64 rng(*spec.random_seed);
    SeparationResult res;
    for (std::size_t i = 0; i < spec.samples; ++i) {
      if (deadline.passed()) {
        res.outcome = SearchOutcome::BudgetExhausted;
        break;
      }
      const std::size_t n = 1 + rng() % spec.max_worlds;
      ++res.stats.candidates;
      if (spec.kind == StructureKind::Generalized) {
        auto g = random_genframe(n, rng);
        if (detail::meets_spec(g, spec)) {
          res.genframe = std::move(g);
          res.outcome = SearchOutcome::Found;
          break;
        }
      } else {
        auto fr = random_frame(n, rng);
        if (detail::meets_spec(fr, spec)) {
          res.frame = std::move(fr);
          res.outcome = SearchOutcome::Found;
          break;
        }
      }
    }
    res.stats.seconds = deadline.elapsed();
    return res;
  }
  if (spec.kind == StructureKind::Generalized) return detail::separate<detail::GenSeeds>(spec);
  return detail::separate<detail::FrameSeeds>(spec);
}

// ---------------------------------------------------------------------------
// Incompleteness: a model forcing a logic everywhere yet refuting an instance of a target.

struct IncompletenessSpec {
  std::vector<SchemaId> logic;
  SchemaId target = SchemaId::R;
  std::size_t max_worlds = 8;
  std::size_t max_seeds = 2;
  std::optional<double> budget_seconds;
  unsigned workers = 1;
};

struct IncompletenessResult {
  SearchOutcome outcome = SearchOutcome::BoundExhausted;
  std::optional<Model> model;
  std::optional<FailingInstance> refuted;  // least refuted target instance
  SearchStats stats;
};

namespace detail {

/// Height of each world: length of the longest R-path upward.
inline std::vector<std::size_t> heights(const Frame& fr) {
  const std::size_t n = fr.world_count();
  std::vector<std::size_t> h(n, 0);
  for (bool grew = true; grew;) {
    grew = false;
    for (World a = 0; a < n; ++a)
      for (World b : fr.successors(a))
        if (h[a] < h[b] + 1) {
          h[a] = h[b] + 1;
          grew = true;
        }
  }
  return h;
}

/// Valuation giving block i the binary code of i over atoms p, q, r, ...
inline Valuation block_valuation(const std::vector<std::size_t>& block_of, std::size_t blocks) {
  static const char* names[] = {"p", "q", "r", "s", "t", "u", "v", "w"};
  std::size_t bits = 0;
  while ((std::size_t{1} << bits) < blocks) ++bits;
  Valuation val;
  for (std::size_t k = 0; k < bits; ++k) {
    WorldSet ext;
    for (World a = 0; a < block_of.size(); ++a)
      if ((block_of[a] >> k) & 1u) ext.insert(a);
    val[names[k]] = ext;
  }
  return val;
}

/// Set partitions of the worlds refining the height partition, in restricted-growth order.
template <class Visit>
bool for_each_height_partition(const std::vector<std::size_t>& h, Visit&& visit) {
  const std::size_t n = h.size();
  std::vector<std::size_t> block(n, 0);
  std::vector<std::size_t> block_height;
  std::function<bool(World, std::size_t)> rec = [&](World a, std::size_t used) -> bool {
    if (a == n) return visit(block, used);
    for (std::size_t b = 0; b <= used; ++b) {
      if (b < used && block_height[b] != h[a]) continue;
      block[a] = b;
      if (b == used) block_height.push_back(h[a]);
      const bool stop = rec(a + 1, b == used ? used + 1 : used);
      if (b == used) block_height.pop_back();
      if (stop) return true;
    }
    return false;
  };
  return rec(0, 0);
}

struct Partition {
  std::vector<std::size_t> block_of;  // world -> block index
  std::vector<WorldSet> blocks;
  std::vector<WorldSet> unions;  // all unions of blocks, by block-index mask

  bool refines(const Partition& coarse) const {
    for (WorldSet b : blocks)
      if (!b.subset_of(coarse.blocks[coarse.block_of[b.min()]])) return false;
    return true;
  }
};

inline Partition make_partition(const std::vector<std::size_t>& block_of, std::size_t count) {
  Partition p{block_of, std::vector<WorldSet>(count), {}};
  for (World a = 0; a < block_of.size(); ++a) p.blocks[block_of[a]].insert(a);
  p.unions.resize(std::size_t{1} << count);
  for (std::size_t mask = 1; mask < p.unions.size(); ++mask) {
    const std::size_t low = static_cast<std::size_t>(std::countr_zero(mask));
    p.unions[mask] = p.unions[mask & (mask - 1)] | p.blocks[low];
  }
  return p;
}

/// The model collapsed onto the blocks of a stable partition: a set of blocks stands for
/// its union, and box and rhd are read from tables.
struct Quotient {
  std::size_t blocks = 0;
  std::vector<WorldSet> box_tab;  // by block mask
  std::vector<WorldSet> rhd_tab;  // by (first mask << blocks) | second mask

  std::size_t world_count() const { return blocks; }
  WorldSet universe() const { return WorldSet::first(blocks); }
  WorldSet box(WorldSet a) const { return box_tab[a.bits()]; }
  WorldSet rhd(WorldSet a, WorldSet b) const { return rhd_tab[(std::size_t{a.bits()} << blocks) | b.bits()]; }

  std::string key() const {
    std::string out(1, static_cast<char>(blocks));
    for (WorldSet s : box_tab) out += static_cast<char>(s.bits());
    for (WorldSet s : rhd_tab) out += static_cast<char>(s.bits());
    return out;
  }
};

/// Verdicts per quotient, shared by all frames of one search.
class QuotientCache {
 public:
  enum Verdict : unsigned char { NotRefuted, NotForced, Hit };

  template <class Compute>
  Verdict get(const Quotient& q, Compute&& compute) {
    std::string k = q.key();
    {
      std::lock_guard lock(mu_);
      if (auto it = seen_.find(k); it != seen_.end()) return it->second;
    }
    const Verdict v = compute();
    std::lock_guard lock(mu_);
    seen_.emplace(std::move(k), v);
    return v;
  }

 private:
  std::mutex mu_;
  std::unordered_map<std::string, Verdict> seen_;
};

/// The quotient, if the unions of blocks are closed under box and rhd. Rhd turns unions
/// in its first argument into intersections, so single blocks suffice there.
inline std::optional<Quotient> quotient(const Frame& fr, const Partition& p) {
  const std::size_t b = p.blocks.size();
  const std::size_t masks = p.unions.size();
  auto to_mask = [&](WorldSet s) -> std::optional<WorldSet> {
    WorldSet out;
    for (std::size_t i = 0; i < b; ++i)
      if (p.blocks[i].intersects(s)) {
        if (!p.blocks[i].subset_of(s)) return std::nullopt;
        out.insert(static_cast<World>(i));
      }
    return out;
  };
  Quotient q{b, std::vector<WorldSet>(masks), std::vector<WorldSet>(masks * masks)};
  std::vector<WorldSet> single(b * masks);
  for (std::size_t v = 0; v < masks; ++v) {
    auto bx = to_mask(fr.box(p.unions[v]));
    if (!bx) return std::nullopt;
    q.box_tab[v] = *bx;
    for (std::size_t i = 0; i < b; ++i) {
      auto r = to_mask(fr.rhd(p.blocks[i], p.unions[v]));
      if (!r) return std::nullopt;
      single[i * masks + v] = *r;
    }
  }
  for (std::size_t u = 0; u < masks; ++u)
    for (std::size_t v = 0; v < masks; ++v) {
      WorldSet acc = q.universe();
      for (World i : WorldSet(static_cast<WorldSet::Bits>(u))) acc &= single[i * masks + v];
      q.rhd_tab[u * masks + v] = acc;
    }
  return q;
}

/// A model on fr that forces the logic everywhere and refutes the target somewhere, if one
/// exists. Every model on fr has as definable sets the unions of a stable partition
/// refining the height partition, and conversely. Refuting only gets easier and forcing
/// only harder as the partition gets finer, which prunes most candidates.
inline std::optional<Model> model_on(const Frame& fr, const IncompletenessSpec& spec, QuotientCache& cache) {
  std::vector<std::pair<Partition, Quotient>> stable;
  for_each_height_partition(heights(fr), [&](const std::vector<std::size_t>& block, std::size_t used) {
    auto p = make_partition(block, used);
    if (auto q = quotient(fr, p)) stable.emplace_back(std::move(p), std::move(*q));
    return false;
  });
  std::stable_sort(stable.begin(), stable.end(),
                   [](const auto& a, const auto& b) { return a.first.blocks.size() < b.first.blocks.size(); });
  std::vector<const Partition*> not_refuted, not_forced;
  std::vector<WorldSet> sets;
  for (const auto& [p, q] : stable) {
    if (std::any_of(not_forced.begin(), not_forced.end(), [&](const Partition* o) { return p.refines(*o); }))
      continue;
    if (std::any_of(not_refuted.begin(), not_refuted.end(), [&](const Partition* o) { return o->refines(p); }))
      continue;
    const auto verdict = cache.get(q, [&] {
      sets.resize(p.unions.size());
      for (std::size_t v = 0; v < sets.size(); ++v) sets[v] = WorldSet(static_cast<WorldSet::Bits>(v));
      if (!find_failing_assignment(q, std::span<const WorldSet>(sets), {spec.target}, q.universe()))
        return QuotientCache::NotRefuted;
      if (find_failing_assignment(q, std::span<const WorldSet>(sets), spec.logic, q.universe()))
        return QuotientCache::NotForced;
      return QuotientCache::Hit;
    });
    if (verdict == QuotientCache::NotRefuted) {
      not_refuted.push_back(&p);
      continue;
    }
    if (verdict == QuotientCache::NotForced) {
      not_forced.push_back(&p);
      continue;
    }
    return Model{fr, block_valuation(p.block_of, p.blocks.size())};
  }
  return std::nullopt;
}

inline bool frame_refutes(const Frame& fr, SchemaId target) {
  if (target == SchemaId::R || target == SchemaId::P0) return !check_R_frame_condition(fr).holds();
  return !frame_valid_schema(fr, target).holds();
}

}  // namespace detail

/// Searches rooted ordinary frames that refute the target, and on each all definable
/// algebras (one per stable partition refining the height partition).
inline IncompletenessResult find_incompleteness_model(const IncompletenessSpec& spec) {
  if (spec.max_worlds < 1) throw Error("max-worlds must be at least 1");
  for (SchemaId s : spec.logic)
    if (s == spec.target) throw Error("target " + schema_name(s) + " is part of the logic");
  detail::Deadline deadline(spec.budget_seconds);
  IncompletenessResult res;
  detail::QuotientCache cache;
  std::atomic<std::size_t> candidates{0};
  auto finish = [&](SearchOutcome o) {
    res.outcome = o;
    res.stats.candidates = candidates;
    res.stats.seconds = deadline.elapsed();
    return res;
  };
  for (std::size_t n = 1; n <= spec.max_worlds; ++n) {
    if (deadline.passed()) return finish(SearchOutcome::BudgetExhausted);
    const auto orders = rooted_orders(n);
    auto check = [&](const std::vector<WorldSet>& succ, auto&& stop) -> std::optional<Model> {
      const detail::FrameSeeds space(succ);
      std::optional<Model> hit;
      detail::for_each_closure(space, spec.max_seeds, [&](const Frame& fr) {
        if (stop()) return true;
        ++candidates;
        if (!detail::frame_refutes(fr, spec.target)) return false;
        hit = detail::model_on(fr, spec, cache);
        return hit.has_value();
      });
      return hit;
    };
    auto [hit, complete] = detail::least_hit<Model>(orders, spec.workers, deadline, check);
    if (hit) {
      require_valid(hit->frame);
      if (!model_forces_logic(*hit, spec.logic).holds())
        throw Error("search produced a model that does not force its logic");
      auto refuted = model_forces_logic(*hit, {spec.target});
      if (refuted.holds()) throw Error("search produced a model that does not refute its target");
      res.refuted = refuted.witness();
      res.model = std::move(hit);
      return finish(SearchOutcome::Found);
    }
    if (!complete) return finish(SearchOutcome::BudgetExhausted);
  }
  return finish(SearchOutcome::BoundExhausted);
}

}  // namespace ilvelt
