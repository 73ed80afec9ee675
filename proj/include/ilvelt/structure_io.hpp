#pragma once

#include <cstddef>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "ilvelt/frame.hpp"
#include "ilvelt/genframe.hpp"
#include "ilvelt/world_set.hpp"

namespace ilvelt {

/// Malformed structure text; `line` is 1-based.
class FormatError : public Error {
 public:
  FormatError(const std::string& what, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

enum class StructureKind { Ordinary, Generalized };

/// A structure file as written, before closure.
///
///   worlds w x y
///   R w x
///   S w x : y          (x S_w y, or x S_w {y} in a generalized structure)
///   S w y : a0 a1      (generalized only)
///   val p : x y
///   closure on|off     (default off)
///   kind ordinary|gen  (optional; otherwise guessed from S-line arity)
struct StructureText {
  std::vector<std::string> worlds;
  std::vector<std::pair<World, World>> r;
  std::vector<std::tuple<World, World, WorldSet>> s;
  Valuation valuation;
  bool closure = false;
  std::optional<StructureKind> declared_kind;

  /// Declared kind, else generalized iff some S line has a target other than one world.
  StructureKind kind() const {
    if (declared_kind) return *declared_kind;
    for (const auto& t : s)
      if (std::get<2>(t).size() != 1) return StructureKind::Generalized;
    return StructureKind::Ordinary;
  }
};

namespace detail {

inline std::vector<std::string> split_words(std::string_view line) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.emplace_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace detail

inline StructureText parse_structure(std::string_view text) {
  StructureText st;
  bool have_worlds = false;
  std::size_t lineno = 0;
  std::size_t pos = 0;
  auto world = [&](const std::string& name) -> World {
    for (World i = 0; i < st.worlds.size(); ++i)
      if (st.worlds[i] == name) return i;
    throw FormatError("unknown world '" + name + "'", lineno);
  };
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    auto words = detail::split_words(line);
    if (words.empty()) continue;
    const std::string& head = words[0];
    if (head != "worlds" && head != "closure" && head != "kind" && !have_worlds)
      throw FormatError("'" + head + "' before the worlds line", lineno);
    if (head == "worlds") {
      if (have_worlds) throw FormatError("second worlds line", lineno);
      if (words.size() < 2) throw FormatError("worlds line lists no worlds", lineno);
      st.worlds.assign(words.begin() + 1, words.end());
      try {
        check_world_names(st.worlds);
      } catch (const Error& e) {
        throw FormatError(e.what(), lineno);
      }
      have_worlds = true;
    } else if (head == "R") {
      if (words.size() != 3) throw FormatError("expected 'R <from> <to>'", lineno);
      st.r.emplace_back(world(words[1]), world(words[2]));
    } else if (head == "S") {
      if (words.size() < 5 || words[3] != ":") throw FormatError("expected 'S <base> <from> : <to>...'", lineno);
      WorldSet to;
      for (std::size_t i = 4; i < words.size(); ++i) to.insert(world(words[i]));
      st.s.emplace_back(world(words[1]), world(words[2]), to);
    } else if (head == "val") {
      if (words.size() < 3 || words[2] != ":") throw FormatError("expected 'val <atom> : <world>...'", lineno);
      if (!is_atom_name(words[1])) throw FormatError("invalid atom name '" + words[1] + "'", lineno);
      if (st.valuation.count(words[1])) throw FormatError("atom '" + words[1] + "' valued twice", lineno);
      WorldSet ext;
      for (std::size_t i = 3; i < words.size(); ++i) ext.insert(world(words[i]));
      st.valuation[words[1]] = ext;
    } else if (head == "closure") {
      if (words.size() != 2 || (words[1] != "on" && words[1] != "off"))
        throw FormatError("expected 'closure on' or 'closure off'", lineno);
      st.closure = words[1] == "on";
    } else if (head == "kind") {
      if (words.size() != 2 || (words[1] != "ordinary" && words[1] != "gen"))
        throw FormatError("expected 'kind ordinary' or 'kind gen'", lineno);
      st.declared_kind = words[1] == "gen" ? StructureKind::Generalized : StructureKind::Ordinary;
    } else {
      throw FormatError("unknown directive '" + head + "'", lineno);
    }
  }
  if (!have_worlds) throw FormatError("missing worlds line", lineno);
  return st;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline StructureText load_structure(const std::string& path) { return parse_structure(read_file(path)); }

/// Builds the ordinary model, closing it if the text asks for closure.
inline Model to_model(const StructureText& st) {
  Frame fr(st.worlds);
  for (auto [a, b] : st.r) fr.add_r(a, b);
  for (const auto& [base, from, to] : st.s) {
    if (to.size() != 1) throw Error("ordinary S lines take exactly one target");
    fr.add_s(base, from, to.min());
  }
  if (st.closure) fr = close_frame(fr);
  return Model{std::move(fr), st.valuation};
}

inline GenModel to_genmodel(const StructureText& st) {
  GenFrame g(st.worlds);
  for (auto [a, b] : st.r) g.add_r(a, b);
  for (const auto& [base, from, to] : st.s) g.add_s(base, from, to);
  if (st.closure) g = close_genframe(g);
  return GenModel{std::move(g), st.valuation};
}

namespace detail {

inline void write_header(std::ostringstream& out, const std::vector<std::string>& names, const char* kind) {
  out << "kind " << kind << "\nworlds";
  for (const auto& n : names) out << ' ' << n;
  out << '\n';
}

inline void write_valuation(std::ostringstream& out, const std::vector<std::string>& names, const Valuation& val) {
  for (const auto& [atom, ext] : val) {
    out << "val " << atom << " :";
    for (World w : ext) out << ' ' << names[w];
    out << '\n';
  }
}

}  // namespace detail

/// Full structure, every pair and triple listed, so it reads back without closure.
inline std::string write_structure(const Frame& fr, const Valuation& val = {}) {
  std::ostringstream out;
  const auto& nm = fr.names();
  detail::write_header(out, nm, "ordinary");
  for (World a = 0; a < fr.world_count(); ++a)
    for (World b : fr.successors(a)) out << "R " << nm[a] << ' ' << nm[b] << '\n';
  for (World x = 0; x < fr.world_count(); ++x)
    for (World y = 0; y < fr.world_count(); ++y)
      for (World z : fr.s_image(x, y)) out << "S " << nm[x] << ' ' << nm[y] << " : " << nm[z] << '\n';
  detail::write_valuation(out, nm, val);
  out << "closure off\n";
  return out.str();
}

inline std::string write_structure(const GenFrame& g, const Valuation& val = {}) {
  std::ostringstream out;
  const auto& nm = g.names();
  detail::write_header(out, nm, "gen");
  for (World a = 0; a < g.world_count(); ++a)
    for (World b : g.successors(a)) out << "R " << nm[a] << ' ' << nm[b] << '\n';
  for (World w = 0; w < g.world_count(); ++w)
    for (World x = 0; x < g.world_count(); ++x)
      for (WorldSet y : g.targets(w, x)) {
        out << "S " << nm[w] << ' ' << nm[x] << " :";
        for (World m : y) out << ' ' << nm[m];
        out << '\n';
      }
  detail::write_valuation(out, nm, val);
  out << "closure off\n";
  return out.str();
}

inline std::string write_structure(const Model& m) { return write_structure(m.frame, m.valuation); }
inline std::string write_structure(const GenModel& m) { return write_structure(m.genframe, m.valuation); }

}  // namespace ilvelt
