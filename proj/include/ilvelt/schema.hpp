#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ilvelt/formula.hpp"
#include "ilvelt/parser.hpp"

namespace ilvelt {

enum class SchemaId { L1, L2, L3, J1, J2, J3, J4, J5, M, P, M0, W, Wstar, P0, R, Rstar };

inline constexpr std::array<SchemaId, 16> kAllSchemata = {
    SchemaId::L1, SchemaId::L2, SchemaId::L3, SchemaId::J1, SchemaId::J2, SchemaId::J3,
    SchemaId::J4, SchemaId::J5, SchemaId::M,  SchemaId::P,  SchemaId::M0, SchemaId::W,
    SchemaId::Wstar, SchemaId::P0, SchemaId::R, SchemaId::Rstar};

/// The axiom schemata of the base logic IL.
inline constexpr std::array<SchemaId, 8> kBaseSchemata = {
    SchemaId::L1, SchemaId::L2, SchemaId::L3, SchemaId::J1,
    SchemaId::J2, SchemaId::J3, SchemaId::J4, SchemaId::J5};

struct Schema {
  SchemaId id;
  std::string name;
  Formula body;
};

namespace detail {

struct SchemaText {
  SchemaId id;
  std::string_view name;
  std::string_view text;
};

inline constexpr std::array<SchemaText, 16> kSchemaTexts = {{
    {SchemaId::L1, "L1", "[](A -> B) -> ([]A -> []B)"},
    {SchemaId::L2, "L2", "[]A -> [][]A"},
    {SchemaId::L3, "L3", "[]([]A -> A) -> []A"},
    {SchemaId::J1, "J1", "[](A -> B) -> A |> B"},
    {SchemaId::J2, "J2", "(A |> B) & (B |> C) -> A |> C"},
    {SchemaId::J3, "J3", "(A |> C) & (B |> C) -> A | B |> C"},
    {SchemaId::J4, "J4", "A |> B -> (<>A -> <>B)"},
    {SchemaId::J5, "J5", "<>A |> A"},
    {SchemaId::M, "M", "A |> B -> A & []C |> B & []C"},
    {SchemaId::P, "P", "A |> B -> [](A |> B)"},
    {SchemaId::M0, "M0", "A |> B -> <>A & []C |> B & []C"},
    {SchemaId::W, "W", "A |> B -> A |> B & []~A"},
    {SchemaId::Wstar, "Wstar", "A |> B -> B & []C |> B & []C & []~A"},
    {SchemaId::P0, "P0", "A |> <>B -> [](A |> B)"},
    {SchemaId::R, "R", "A |> B -> ~(A |> ~C) |> B & []C"},
    {SchemaId::Rstar, "Rstar", "A |> B -> ~(A |> ~C) |> B & []C & []~A"},
}};

}  // namespace detail

inline const Schema& schema(SchemaId id) {
  static const std::array<Schema, 16> catalog = [] {
    std::array<Schema, 16> out{};
    for (std::size_t i = 0; i < out.size(); ++i) {
      const auto& t = detail::kSchemaTexts[i];
      out[i] = Schema{t.id, std::string(t.name), parse_schema_body(t.text)};
    }
    return out;
  }();
  return catalog[static_cast<std::size_t>(id)];
}

inline const std::string& schema_name(SchemaId id) { return schema(id).name; }

/// Accepts the catalog names plus "W*" and "R*".
inline std::optional<SchemaId> schema_from_name(std::string_view name) {
  if (name == "W*") return SchemaId::Wstar;
  if (name == "R*") return SchemaId::Rstar;
  for (const auto& t : detail::kSchemaTexts)
    if (t.name == name) return t.id;
  return std::nullopt;
}

inline std::vector<SchemaId> parse_schema_list(std::string_view text) {
  std::vector<SchemaId> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t comma = text.find(',', start);
    if (comma == std::string_view::npos) comma = text.size();
    std::string_view item = text.substr(start, comma - start);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    if (!item.empty()) {
      auto id = schema_from_name(item);
      if (!id) throw Error("unknown schema '" + std::string(item) + "'");
      out.push_back(*id);
    }
    start = comma + 1;
  }
  return out;
}

using Substitution = std::map<std::string, Formula>;

/// Replaces every metavariable by its binding. Object atoms are left alone.
inline Formula substitute(const Formula& f, const Substitution& subst) {
  switch (f.kind()) {
    case Kind::Bottom: case Kind::Atom: return f;
    case Kind::Meta: {
      auto it = subst.find(f.name());
      if (it == subst.end()) throw Error("no binding for metavariable " + f.name());
      return it->second;
    }
    case Kind::Box: return Formula::box(substitute(f.body(), subst));
    case Kind::Implies: return Formula::implies(substitute(f.left(), subst), substitute(f.right(), subst));
    case Kind::Rhd: return Formula::rhd(substitute(f.left(), subst), substitute(f.right(), subst));
  }
  return f;
}

inline Formula instantiate(const Schema& s, const Substitution& subst) { return substitute(s.body, subst); }
inline Formula instantiate(SchemaId id, const Substitution& subst) { return instantiate(schema(id), subst); }

}  // namespace ilvelt
