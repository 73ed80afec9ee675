#pragma once

#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <iterator>
#include <stdexcept>
#include <string>
#include <vector>

namespace ilvelt {

/// Index of a world inside a finite structure. Worlds are totally ordered by index.
using World = unsigned;

inline constexpr std::size_t kMaxWorlds = 32;

/// Base class for every error the library reports about its inputs.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A finite set of worlds stored as a bitmask. Sets compare by their mask value,
/// which is the order used whenever a "least" set or witness is reported.
class WorldSet {
 public:
  using Bits = std::uint32_t;

  constexpr WorldSet() = default;
  constexpr explicit WorldSet(Bits bits) : bits_(bits) {}

  static constexpr WorldSet single(World w) { return WorldSet(Bits{1} << w); }

  /// {0, ..., n-1}
  static constexpr WorldSet first(std::size_t n) {
    return WorldSet(n >= 32 ? ~Bits{0} : ((Bits{1} << n) - 1));
  }

  constexpr Bits bits() const { return bits_; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr std::size_t size() const { return static_cast<std::size_t>(std::popcount(bits_)); }
  constexpr bool contains(World w) const { return (bits_ >> w) & 1u; }
  constexpr void insert(World w) { bits_ |= Bits{1} << w; }
  constexpr void erase(World w) { bits_ &= ~(Bits{1} << w); }
  constexpr bool subset_of(WorldSet other) const { return (bits_ & ~other.bits_) == 0; }
  constexpr bool intersects(WorldSet other) const { return (bits_ & other.bits_) != 0; }
  constexpr World min() const { return static_cast<World>(std::countr_zero(bits_)); }

  constexpr WorldSet operator|(WorldSet o) const { return WorldSet(bits_ | o.bits_); }
  constexpr WorldSet operator&(WorldSet o) const { return WorldSet(bits_ & o.bits_); }
  constexpr WorldSet operator-(WorldSet o) const { return WorldSet(bits_ & ~o.bits_); }
  constexpr WorldSet& operator|=(WorldSet o) { bits_ |= o.bits_; return *this; }
  constexpr WorldSet& operator&=(WorldSet o) { bits_ &= o.bits_; return *this; }
  constexpr WorldSet& operator-=(WorldSet o) { bits_ &= ~o.bits_; return *this; }

  friend constexpr bool operator==(WorldSet, WorldSet) = default;
  friend constexpr auto operator<=>(WorldSet, WorldSet) = default;

  class iterator {
   public:
    using value_type = World;
    using difference_type = std::ptrdiff_t;
    using iterator_category = std::forward_iterator_tag;

    constexpr iterator() = default;
    constexpr explicit iterator(Bits rest) : rest_(rest) {}
    constexpr World operator*() const { return static_cast<World>(std::countr_zero(rest_)); }
    constexpr iterator& operator++() { rest_ &= rest_ - 1; return *this; }
    constexpr iterator operator++(int) { auto old = *this; ++*this; return old; }
    friend constexpr bool operator==(iterator, iterator) = default;

   private:
    Bits rest_ = 0;
  };

  constexpr iterator begin() const { return iterator(bits_); }
  constexpr iterator end() const { return iterator(0); }

 private:
  Bits bits_ = 0;
};

/// Calls fn on every subset of `universe`, in increasing mask order, starting with the empty set.
template <class Fn>
void for_each_subset(WorldSet universe, Fn&& fn) {
  const auto u = universe.bits();
  WorldSet::Bits s = 0;
  do {
    fn(WorldSet(s));
    s = (s - u) & u;
  } while (s != 0);
}

/// Same as for_each_subset, but stops as soon as fn returns true. Returns whether it stopped.
template <class Fn>
bool any_subset(WorldSet universe, Fn&& fn) {
  const auto u = universe.bits();
  WorldSet::Bits s = 0;
  do {
    if (fn(WorldSet(s))) return true;
    s = (s - u) & u;
  } while (s != 0);
  return false;
}

/// "{a, b}" using the given world names.
inline std::string format_set(WorldSet set, const std::vector<std::string>& names) {
  std::string out = "{";
  bool first = true;
  for (World w : set) {
    if (!first) out += ", ";
    out += w < names.size() ? names[w] : std::to_string(w);
    first = false;
  }
  out += "}";
  return out;
}

}  // namespace ilvelt
