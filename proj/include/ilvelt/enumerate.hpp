#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "ilvelt/frame.hpp"
#include "ilvelt/genframe.hpp"
#include "ilvelt/world_set.hpp"

namespace ilvelt {

namespace detail {

/// Strict partial orders on n labeled worlds, as successor sets, in increasing order of
/// their pair mask.
inline std::vector<std::vector<WorldSet>> strict_orders(std::size_t n) {
  std::vector<std::pair<World, World>> pairs;
  for (World a = 0; a < n; ++a)
    for (World b = 0; b < n; ++b)
      if (a != b) pairs.emplace_back(a, b);
  std::vector<std::vector<WorldSet>> out;
  const std::uint64_t total = std::uint64_t{1} << pairs.size();
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    std::vector<WorldSet> succ(n);
    for (std::size_t i = 0; i < pairs.size(); ++i)
      if ((mask >> i) & 1u) succ[pairs[i].first].insert(pairs[i].second);
    bool ok = true;
    for (World a = 0; a < n && ok; ++a)
      for (World b : succ[a])
        if (!succ[b].subset_of(succ[a]) || succ[b].contains(a)) { ok = false; break; }
    if (ok) out.push_back(std::move(succ));
  }
  return out;
}

inline WorldSet permute(const std::vector<World>& perm, WorldSet s) {
  WorldSet out;
  for (World w : s) out.insert(perm[w]);
  return out;
}

/// Bit string describing a frame after renaming world i to perm[i].
inline std::string encode(const Frame& fr, const std::vector<World>& perm) {
  const std::size_t n = fr.world_count();
  std::vector<World> inv(n);
  for (World i = 0; i < n; ++i) inv[perm[i]] = i;
  std::string code;
  code.reserve(n * n + n * n * n);
  for (World a = 0; a < n; ++a)
    for (World b = 0; b < n; ++b) code += fr.r(inv[a], inv[b]) ? '1' : '0';
  for (World x = 0; x < n; ++x)
    for (World y = 0; y < n; ++y) {
      const WorldSet img = permute(perm, fr.s_image(inv[x], inv[y]));
      for (World z = 0; z < n; ++z) code += img.contains(z) ? '1' : '0';
    }
  return code;
}

inline std::string encode(const GenFrame& g, const std::vector<World>& perm) {
  const std::size_t n = g.world_count();
  std::vector<World> inv(n);
  for (World i = 0; i < n; ++i) inv[perm[i]] = i;
  std::string code;
  for (World a = 0; a < n; ++a)
    for (World b = 0; b < n; ++b) code += g.r(inv[a], inv[b]) ? '1' : '0';
  const std::size_t subsets = std::size_t{1} << n;
  for (World w = 0; w < n; ++w)
    for (World x = 0; x < n; ++x) {
      std::string fam(subsets, '0');
      for (WorldSet y : g.targets(inv[w], inv[x])) fam[permute(perm, y).bits()] = '1';
      code += fam;
    }
  return code;
}

/// Least encoding over all renamings.
template <class F>
std::string canonical_code(const F& f) {
  std::vector<World> perm(f.world_count());
  std::iota(perm.begin(), perm.end(), 0);
  std::string best = encode(f, perm);
  while (std::next_permutation(perm.begin(), perm.end())) best = std::min(best, encode(f, perm));
  return best;
}

template <class F>
bool is_canonical(const F& f) {
  std::vector<World> perm(f.world_count());
  std::iota(perm.begin(), perm.end(), 0);
  const std::string own = encode(f, perm);
  while (std::next_permutation(perm.begin(), perm.end()))
    if (encode(f, perm) < own) return false;
  return true;
}

/// All preorders on `dom` containing the pairs in `base` (base[y] = forced successors of y).
inline void for_each_preorder(WorldSet dom, const std::vector<WorldSet>& base,
                              const std::function<void(const std::vector<WorldSet>&)>& fn) {
  std::vector<std::pair<World, World>> free;
  for (World a : dom)
    for (World b : dom)
      if (a != b && !base[a].contains(b)) free.emplace_back(a, b);
  const std::uint64_t total = std::uint64_t{1} << free.size();
  std::vector<WorldSet> rel(base.size());
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    for (World a = 0; a < base.size(); ++a) rel[a] = dom.contains(a) ? (base[a] | WorldSet::single(a)) : WorldSet{};
    for (std::size_t i = 0; i < free.size(); ++i)
      if ((mask >> i) & 1u) rel[free[i].first].insert(free[i].second);
    bool ok = true;
    for (World a : dom) {
      for (World b : rel[a])
        if (!rel[b].subset_of(rel[a])) { ok = false; break; }
      if (!ok) break;
    }
    if (ok) fn(rel);
  }
}

}  // namespace detail

/// Every Veltman frame on exactly n worlds, one per isomorphism class (the
/// representative whose encoding is least). Deterministic order.
inline std::vector<Frame> enumerate_frames(std::size_t n) {
  std::vector<Frame> out;
  for (const auto& succ : detail::strict_orders(n)) {
    // Per base world, the admissible S_x relations on x's successors.
    std::vector<std::vector<std::vector<WorldSet>>> options(n);
    for (World x = 0; x < n; ++x) {
      std::vector<WorldSet> base(n);
      for (World y : succ[x]) base[y] = succ[y];
      detail::for_each_preorder(succ[x], base, [&](const std::vector<WorldSet>& rel) { options[x].push_back(rel); });
    }
    std::vector<std::size_t> pick(n, 0);
    while (true) {
      Frame fr(n);
      for (World x = 0; x < n; ++x) {
        fr.set_successors(x, succ[x]);
        for (World y : succ[x]) fr.set_s_image(x, y, options[x][pick[x]][y]);
      }
      if (detail::is_canonical(fr)) out.push_back(std::move(fr));
      std::size_t i = n;
      while (i > 0 && ++pick[i - 1] == options[i - 1].size()) pick[--i] = 0;
      if (i == 0) break;
    }
  }
  return out;
}

inline std::vector<Frame> enumerate_frames_upto(std::size_t max) {
  std::vector<Frame> out;
  for (std::size_t n = 1; n <= max; ++n) {
    auto part = enumerate_frames(n);
    std::move(part.begin(), part.end(), std::back_inserter(out));
  }
  return out;
}

/// Every generalized Veltman frame on exactly n worlds up to isomorphism. Each is the
/// closure of a set of optional triples over some strict order; closures are deduplicated
/// by canonical code. Practical for n <= 3.
inline std::vector<GenFrame> enumerate_genframes(std::size_t n) {
  std::vector<GenFrame> out;
  std::set<std::string> seen;
  for (const auto& succ : detail::strict_orders(n)) {
    GenFrame base(n);
    for (World w = 0; w < n; ++w) base.set_successors(w, succ[w]);
    base = close_genframe(base);
    struct Triple {
      World w, x;
      WorldSet y;
    };
    std::vector<Triple> optional;
    for (World w = 0; w < n; ++w)
      for (World x : succ[w])
        for_each_subset(succ[w], [&](WorldSet y) {
          if (!y.empty() && !base.s(w, x, y)) optional.push_back({w, x, y});
        });
    if (optional.size() > 24) throw Error("too many optional triples to enumerate");
    const std::uint64_t total = std::uint64_t{1} << optional.size();
    for (std::uint64_t mask = 0; mask < total; ++mask) {
      GenFrame g = base;
      for (std::size_t i = 0; i < optional.size(); ++i)
        if ((mask >> i) & 1u) g.add_s(optional[i].w, optional[i].x, optional[i].y);
      g = close_genframe(g);
      if (seen.insert(detail::canonical_code(g)).second) out.push_back(std::move(g));
    }
  }
  // Report canonical representatives only.
  std::vector<GenFrame> canon;
  canon.reserve(out.size());
  for (auto& g : out) {
    if (detail::is_canonical(g)) {
      canon.push_back(std::move(g));
    } else {
      const std::string want = detail::canonical_code(g);
      std::vector<World> perm(n);
      std::iota(perm.begin(), perm.end(), 0);
      do {
        if (detail::encode(g, perm) == want) break;
      } while (std::next_permutation(perm.begin(), perm.end()));
      GenFrame h(n);
      for (World a = 0; a < n; ++a) {
        h.set_successors(perm[a], detail::permute(perm, g.successors(a)));
        for (World b = 0; b < n; ++b)
          for (WorldSet y : g.targets(a, b)) h.add_s(perm[a], perm[b], detail::permute(perm, y));
      }
      canon.push_back(std::move(h));
    }
  }
  return canon;
}

inline std::vector<GenFrame> enumerate_genframes_upto(std::size_t max) {
  std::vector<GenFrame> out;
  for (std::size_t n = 1; n <= max; ++n) {
    auto part = enumerate_genframes(n);
    std::move(part.begin(), part.end(), std::back_inserter(out));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Random structures. All draws are engine() % bound so runs are reproducible.

namespace detail {

inline std::vector<WorldSet> random_order(std::size_t n, std::mt19937_64& rng) {
  std::vector<WorldSet> succ(n);
  for (World a = 0; a < n; ++a)
    for (World b = a + 1; b < n; ++b)
      if (rng() % 2) succ[a].insert(b);
  transitive_closure(succ);
  return succ;
}

inline WorldSet random_subset(WorldSet of, std::mt19937_64& rng) {
  WorldSet out;
  for (World w : of)
    if (rng() % 2) out.insert(w);
  return out;
}

inline World random_member(WorldSet of, std::mt19937_64& rng) {
  std::size_t k = rng() % of.size();
  for (World w : of)
    if (k-- == 0) return w;
  return of.min();
}

}  // namespace detail

/// Random Veltman frame on n worlds: a random order on the labels plus up to n random
/// S seeds, closed.
inline Frame random_frame(std::size_t n, std::mt19937_64& rng) {
  const auto succ = detail::random_order(n, rng);
  Frame fr(n);
  for (World a = 0; a < n; ++a) fr.set_successors(a, succ[a]);
  const std::size_t seeds = rng() % (2 * n + 1);
  for (std::size_t i = 0; i < seeds; ++i) {
    const World x = static_cast<World>(rng() % n);
    if (succ[x].empty()) continue;
    fr.add_s(x, detail::random_member(succ[x], rng), detail::random_member(succ[x], rng));
  }
  return close_frame(fr);
}

/// Random generalized frame on n worlds: a random order plus up to n random seed triples
/// with random nonempty targets, closed.
inline GenFrame random_genframe(std::size_t n, std::mt19937_64& rng) {
  const auto succ = detail::random_order(n, rng);
  GenFrame g(n);
  for (World a = 0; a < n; ++a) g.set_successors(a, succ[a]);
  const std::size_t seeds = rng() % (2 * n + 1);
  for (std::size_t i = 0; i < seeds; ++i) {
    const World w = static_cast<World>(rng() % n);
    if (succ[w].empty()) continue;
    WorldSet y = detail::random_subset(succ[w], rng);
    if (y.empty()) y.insert(detail::random_member(succ[w], rng));
    g.add_s(w, detail::random_member(succ[w], rng), y);
  }
  return close_genframe(g);
}

inline Valuation random_valuation(std::size_t n, const std::vector<std::string>& atoms, std::mt19937_64& rng) {
  Valuation val;
  for (const auto& a : atoms) val[a] = detail::random_subset(WorldSet::first(n), rng);
  return val;
}

/// Random model with 1..max_worlds worlds.
inline Model random_model(std::size_t max_worlds, const std::vector<std::string>& atoms, std::mt19937_64& rng) {
  const std::size_t n = 1 + rng() % max_worlds;
  Frame fr = random_frame(n, rng);
  return Model{std::move(fr), random_valuation(n, atoms, rng)};
}

}  // namespace ilvelt
