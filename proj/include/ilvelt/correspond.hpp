#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "ilvelt/enumerate.hpp"
#include "ilvelt/frame.hpp"
#include "ilvelt/gen_conditions.hpp"
#include "ilvelt/genframe.hpp"
#include "ilvelt/schema.hpp"
#include "ilvelt/structure_io.hpp"

namespace ilvelt {

/// A frame condition paired with the schema it should correspond to.
/// P0ordinary compares the ordinary R condition against validity of P0.
enum class ConditionId { M0set, P0set, Rset, NotWset, Rordinary, P0ordinary };

inline const char* condition_name(ConditionId c) {
  switch (c) {
    case ConditionId::M0set: return "M0set";
    case ConditionId::P0set: return "P0set";
    case ConditionId::Rset: return "Rset";
    case ConditionId::NotWset: return "NotWset";
    case ConditionId::Rordinary: return "Rordinary";
    case ConditionId::P0ordinary: return "P0ordinary";
  }
  return "?";
}

inline StructureKind condition_kind(ConditionId c) {
  return (c == ConditionId::Rordinary || c == ConditionId::P0ordinary) ? StructureKind::Ordinary
                                                                       : StructureKind::Generalized;
}

/// Full ids, or the short forms M0, P0, R, NotW read against `kind`.
inline ConditionId condition_from_name(const std::string& name, StructureKind kind) {
  const bool gen = kind == StructureKind::Generalized;
  for (auto c : {ConditionId::M0set, ConditionId::P0set, ConditionId::Rset, ConditionId::NotWset,
                 ConditionId::Rordinary, ConditionId::P0ordinary})
    if (name == condition_name(c)) return c;
  if (name == "M0" && gen) return ConditionId::M0set;
  if (name == "P0") return gen ? ConditionId::P0set : ConditionId::P0ordinary;
  if (name == "R") return gen ? ConditionId::Rset : ConditionId::Rordinary;
  if ((name == "NotW" || name == "Not-W") && gen) return ConditionId::NotWset;
  throw Error("unknown condition '" + name + "' for " + (gen ? "generalized" : "ordinary") + " frames");
}

/// The schema whose validity the condition should match. Not-W matches invalidity of W.
inline SchemaId condition_schema(ConditionId c) {
  switch (c) {
    case ConditionId::M0set: return SchemaId::M0;
    case ConditionId::P0set: case ConditionId::P0ordinary: return SchemaId::P0;
    case ConditionId::Rset: case ConditionId::Rordinary: return SchemaId::R;
    case ConditionId::NotWset: return SchemaId::W;
  }
  return SchemaId::R;
}

struct CorrespondenceCase {
  ConditionId condition;
  std::variant<Frame, GenFrame> structure;
  bool decider = false;
  bool oracle = false;
  std::string witness;  // set when the two sides disagree

  bool mismatch() const { return decider != oracle; }
};

inline bool decide_condition(const GenFrame& g, ConditionId c) {
  switch (c) {
    case ConditionId::M0set: return check_M0_condition(g).holds();
    case ConditionId::P0set: return check_P0_condition(g).holds();
    case ConditionId::Rset: return check_R_condition(g).holds();
    case ConditionId::NotWset: return check_not_W(g);
    default: throw Error(std::string(condition_name(c)) + " is a condition on ordinary frames");
  }
}

inline bool decide_condition(const Frame& fr, ConditionId c) {
  if (condition_kind(c) != StructureKind::Ordinary)
    throw Error(std::string(condition_name(c)) + " is a condition on generalized frames");
  return check_R_frame_condition(fr).holds();
}

namespace detail {

template <class F>
CorrespondenceCase run_case(const F& f, ConditionId c) {
  CorrespondenceCase out{c, f, false, false, {}};
  out.decider = decide_condition(f, c);
  const SchemaId s = condition_schema(c);
  if constexpr (std::is_same_v<F, Frame>) {
    out.oracle = frame_valid_schema(f, s).holds();
  } else {
    out.oracle = genframe_valid_schema(f, s).holds();
    if (c == ConditionId::NotWset) out.oracle = !out.oracle;
  }
  if (out.mismatch())
    out.witness = std::string(condition_name(c)) + ": decider " + (out.decider ? "true" : "false") +
                  ", oracle " + (out.oracle ? "true" : "false") + " on\n" + write_structure(f);
  return out;
}

}  // namespace detail

inline CorrespondenceCase verify_correspondence(const GenFrame& g, ConditionId c) {
  if (condition_kind(c) != StructureKind::Generalized)
    throw Error(std::string(condition_name(c)) + " is a condition on ordinary frames");
  return detail::run_case(g, c);
}

inline CorrespondenceCase verify_correspondence(const Frame& fr, ConditionId c) {
  if (condition_kind(c) != StructureKind::Ordinary)
    throw Error(std::string(condition_name(c)) + " is a condition on generalized frames");
  return detail::run_case(fr, c);
}

struct SweepOptions {
  StructureKind kind = StructureKind::Generalized;
  std::size_t max_worlds = 3;
  std::vector<ConditionId> conditions;
  bool random = false;  // otherwise exhaustive over 1..max_worlds
  std::uint64_t seed = 42;
  std::size_t samples = 500;  // random structures, each with exactly max_worlds worlds
  unsigned workers = 1;
};

struct SweepReport {
  std::size_t structures = 0;
  std::size_t checked = 0;
  std::size_t mismatches = 0;
  std::optional<CorrespondenceCase> first_mismatch;  // lowest structure index, then condition order
  double seconds = 0;

  std::string summary_line() const {
    return "mismatches=" + std::to_string(mismatches) + " checked=" + std::to_string(checked);
  }
};

namespace detail {

template <class F>
SweepReport sweep_over(const std::vector<F>& items, const SweepOptions& opt) {
  const unsigned workers = std::max(1u, opt.workers);
  struct Partial {
    std::size_t checked = 0, mismatches = 0;
    std::size_t first_index = SIZE_MAX;
    std::optional<CorrespondenceCase> first;
  };
  std::vector<Partial> parts(workers);
  auto work = [&](unsigned id) {
    Partial& p = parts[id];
    for (std::size_t i = id; i < items.size(); i += workers)
      for (ConditionId c : opt.conditions) {
        auto cs = run_case(items[i], c);
        ++p.checked;
        if (cs.mismatch()) {
          ++p.mismatches;
          if (i < p.first_index) {
            p.first_index = i;
            p.first = std::move(cs);
          }
        }
      }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned id = 0; id < workers; ++id) pool.emplace_back(work, id);
    for (auto& t : pool) t.join();
  }
  SweepReport rep;
  rep.structures = items.size();
  std::size_t best = SIZE_MAX;
  for (auto& p : parts) {
    rep.checked += p.checked;
    rep.mismatches += p.mismatches;
    if (p.first_index < best) {
      best = p.first_index;
      rep.first_mismatch = std::move(p.first);
    }
  }
  return rep;
}

}  // namespace detail

/// Compares every condition in `opt.conditions` with its schema on each structure.
inline SweepReport sweep(const SweepOptions& opt) {
  if (opt.max_worlds < 1) throw Error("max-worlds must be at least 1");
  for (ConditionId c : opt.conditions)
    if (condition_kind(c) != opt.kind)
      throw Error(std::string(condition_name(c)) + " does not apply to this kind of frame");
  const auto start = std::chrono::steady_clock::now();
  SweepReport rep;
  std::mt19937_64 rng(opt.seed);
  if (opt.kind == StructureKind::Generalized) {
    std::vector<GenFrame> items;
    if (opt.random) {
      for (std::size_t i = 0; i < opt.samples; ++i) items.push_back(random_genframe(opt.max_worlds, rng));
    } else {
      items = enumerate_genframes_upto(opt.max_worlds);
    }
    rep = detail::sweep_over(items, opt);
  } else {
    std::vector<Frame> items;
    if (opt.random) {
      for (std::size_t i = 0; i < opt.samples; ++i) items.push_back(random_frame(opt.max_worlds, rng));
    } else {
      items = enumerate_frames_upto(opt.max_worlds);
    }
    rep = detail::sweep_over(items, opt);
  }
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

}  // namespace ilvelt
