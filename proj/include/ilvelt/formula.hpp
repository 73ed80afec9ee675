#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <memory>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "ilvelt/world_set.hpp"

namespace ilvelt {

/// Core constructors of the language. Negation, conjunction, disjunction, equivalence,
/// diamond and verum are abbreviations and never appear as node kinds.
/// `Meta` is a schema metavariable (A, B, C, ...); it only occurs in schema bodies.
enum class Kind : unsigned char { Bottom, Atom, Meta, Implies, Box, Rhd };

inline bool is_atom_name(std::string_view name) {
  if (name.empty() || name.front() < 'a' || name.front() > 'z') return false;
  for (char c : name) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
    if (!ok) return false;
  }
  return true;
}

inline bool is_meta_name(std::string_view name) {
  if (name.empty() || name.front() < 'A' || name.front() > 'Z') return false;
  for (char c : name) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
    if (!ok) return false;
  }
  return true;
}

/// Immutable formula value. Copies share structure.
class Formula {
 public:
  Formula() : Formula(bottom()) {}

  static Formula bottom() {
    static const Formula f{std::make_shared<const Node>(Node{Kind::Bottom, {}, nullptr, nullptr})};
    return f;
  }
  static Formula atom(std::string name) {
    if (!is_atom_name(name)) throw Error("invalid atom name '" + name + "'");
    return Formula{std::make_shared<const Node>(Node{Kind::Atom, std::move(name), nullptr, nullptr})};
  }
  static Formula meta(std::string name) {
    if (!is_meta_name(name)) throw Error("invalid metavariable name '" + name + "'");
    return Formula{std::make_shared<const Node>(Node{Kind::Meta, std::move(name), nullptr, nullptr})};
  }
  static Formula implies(Formula l, Formula r) {
    return Formula{std::make_shared<const Node>(Node{Kind::Implies, {}, std::move(l.node_), std::move(r.node_)})};
  }
  static Formula box(Formula f) {
    return Formula{std::make_shared<const Node>(Node{Kind::Box, {}, std::move(f.node_), nullptr})};
  }
  static Formula rhd(Formula l, Formula r) {
    return Formula{std::make_shared<const Node>(Node{Kind::Rhd, {}, std::move(l.node_), std::move(r.node_)})};
  }

  // Abbreviations, desugared on construction.
  static Formula neg(Formula f) { return implies(std::move(f), bottom()); }
  static Formula top() { return neg(bottom()); }
  static Formula conj(Formula a, Formula b) { return neg(implies(std::move(a), neg(std::move(b)))); }
  static Formula disj(Formula a, Formula b) { return implies(neg(std::move(a)), std::move(b)); }
  static Formula iff(const Formula& a, const Formula& b) { return conj(implies(a, b), implies(b, a)); }
  static Formula diamond(Formula f) { return neg(box(neg(std::move(f)))); }

  Kind kind() const { return node_->kind; }
  const std::string& name() const { return node_->name; }
  Formula left() const { return Formula{node_->left}; }
  Formula right() const { return Formula{node_->right}; }
  Formula body() const { return Formula{node_->left}; }

  bool is(Kind k) const { return node_->kind == k; }
  bool is_modal() const { return is(Kind::Box) || is(Kind::Rhd); }

  /// Identity of the shared node; equal ids imply equal formulas.
  const void* id() const { return node_.get(); }

  /// Number of nodes in the tree.
  std::size_t size() const {
    switch (kind()) {
      case Kind::Bottom: case Kind::Atom: case Kind::Meta: return 1;
      case Kind::Box: return 1 + body().size();
      default: return 1 + left().size() + right().size();
    }
  }

  std::size_t depth() const {
    switch (kind()) {
      case Kind::Bottom: case Kind::Atom: case Kind::Meta: return 0;
      case Kind::Box: return 1 + body().depth();
      default: return 1 + std::max(left().depth(), right().depth());
    }
  }

  friend bool operator==(const Formula& a, const Formula& b) { return equal(a.node_.get(), b.node_.get()); }

 private:
  struct Node {
    Kind kind;
    std::string name;
    std::shared_ptr<const Node> left;
    std::shared_ptr<const Node> right;
  };

  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  static bool equal(const Node* a, const Node* b) {
    while (true) {
      if (a == b) return true;
      if (a->kind != b->kind) return false;
      switch (a->kind) {
        case Kind::Bottom: return true;
        case Kind::Atom: case Kind::Meta: return a->name == b->name;
        case Kind::Box: a = a->left.get(); b = b->left.get(); continue;
        default:
          if (!equal(a->left.get(), b->left.get())) return false;
          a = a->right.get();
          b = b->right.get();
      }
    }
  }

  std::shared_ptr<const Node> node_;
};

// ---------------------------------------------------------------------------
// Recognizers for the abbreviations, used by the printer.

inline bool match_neg(const Formula& f, Formula* arg = nullptr) {
  if (!f.is(Kind::Implies) || !f.right().is(Kind::Bottom)) return false;
  if (arg) *arg = f.left();
  return true;
}

inline bool match_top(const Formula& f) {
  return f.is(Kind::Implies) && f.left().is(Kind::Bottom) && f.right().is(Kind::Bottom);
}

// ~(a -> ~b)
inline bool match_conj(const Formula& f, Formula* a = nullptr, Formula* b = nullptr) {
  Formula inner, nb;
  if (!match_neg(f, &inner) || !inner.is(Kind::Implies) || !match_neg(inner.right(), &nb)) return false;
  if (a) *a = inner.left();
  if (b) *b = nb;
  return true;
}

// ~[]~a
inline bool match_diamond(const Formula& f, Formula* a = nullptr) {
  Formula boxed, na;
  if (!match_neg(f, &boxed) || !boxed.is(Kind::Box) || !match_neg(boxed.body(), &na)) return false;
  if (a) *a = na;
  return true;
}

namespace detail {

// Binding strength; larger binds tighter.
enum Prec : int { kImplies = 2, kRhd = 3, kAnd = 5, kUnary = 6, kPrimary = 7 };

inline int precedence(const Formula& f) {
  switch (f.kind()) {
    case Kind::Bottom: case Kind::Atom: case Kind::Meta: return kPrimary;
    case Kind::Box: return kUnary;
    case Kind::Rhd: return kRhd;
    case Kind::Implies:
      if (match_top(f)) return kPrimary;
      if (match_conj(f)) return kAnd;
      if (match_neg(f)) return kUnary;
      return kImplies;
  }
  return kPrimary;
}

inline void print_into(std::string& out, const Formula& f, int required) {
  const int prec = precedence(f);
  const bool parens = prec < required;
  if (parens) out += '(';
  Formula a, b;
  switch (f.kind()) {
    case Kind::Bottom: out += "false"; break;
    case Kind::Atom: case Kind::Meta: out += f.name(); break;
    case Kind::Box:
      out += "[]";
      print_into(out, f.body(), kUnary);
      break;
    case Kind::Rhd:
      print_into(out, f.left(), kRhd + 1);
      out += " |> ";
      print_into(out, f.right(), kRhd + 1);
      break;
    case Kind::Implies:
      if (match_top(f)) {
        out += "true";
      } else if (match_conj(f, &a, &b)) {
        print_into(out, a, kAnd);
        out += " & ";
        print_into(out, b, kAnd + 1);
      } else if (match_diamond(f, &a)) {
        out += "<>";
        print_into(out, a, kUnary);
      } else if (match_neg(f, &a)) {
        out += "~";
        print_into(out, a, kUnary);
      } else {
        print_into(out, f.left(), kImplies + 1);
        out += " -> ";
        print_into(out, f.right(), kImplies);
      }
      break;
  }
  if (parens) out += ')';
}

}  // namespace detail

/// Canonical ASCII text. Re-sugars ~, &, <> and true; parsing the result yields the same AST.
inline std::string print(const Formula& f) {
  std::string out;
  detail::print_into(out, f, 0);
  return out;
}

inline std::ostream& operator<<(std::ostream& os, const Formula& f) { return os << print(f); }

/// Distinct subformulas, children before parents (post-order, first occurrence wins).
inline std::vector<Formula> subformulas(const Formula& f) {
  std::vector<Formula> out;
  std::function<void(const Formula&)> visit = [&](const Formula& g) {
    switch (g.kind()) {
      case Kind::Box: visit(g.body()); break;
      case Kind::Implies: case Kind::Rhd: visit(g.left()); visit(g.right()); break;
      default: break;
    }
    for (const auto& seen : out)
      if (seen == g) return;
    out.push_back(g);
  };
  visit(f);
  return out;
}

/// Names of atoms (or metavariables) occurring in f, sorted and unique.
inline std::vector<std::string> names_of(const Formula& f, Kind which) {
  std::vector<std::string> out;
  std::function<void(const Formula&)> visit = [&](const Formula& g) {
    switch (g.kind()) {
      case Kind::Atom: case Kind::Meta:
        if (g.kind() == which) out.push_back(g.name());
        break;
      case Kind::Box: visit(g.body()); break;
      case Kind::Implies: case Kind::Rhd: visit(g.left()); visit(g.right()); break;
      default: break;
    }
  };
  visit(f);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

inline std::vector<std::string> atoms_of(const Formula& f) { return names_of(f, Kind::Atom); }
inline std::vector<std::string> metas_of(const Formula& f) { return names_of(f, Kind::Meta); }

}  // namespace ilvelt
