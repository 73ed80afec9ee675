#include <gtest/gtest.h>

#include <random>
#include <set>

#include "ilvelt/formula.hpp"
#include "ilvelt/parser.hpp"
#include "ilvelt/schema.hpp"
#include "ilvelt/world_set.hpp"

namespace ilvelt {
namespace {

Formula P() { return Formula::atom("p"); }
Formula Q() { return Formula::atom("q"); }
Formula R() { return Formula::atom("r"); }

TEST(WorldSet, BasicOperations) {
  WorldSet s = WorldSet::first(3);
  EXPECT_EQ(s.size(), 3u);
  s.erase(1);
  EXPECT_TRUE(s.contains(0));
  EXPECT_FALSE(s.contains(1));
  EXPECT_TRUE(WorldSet::single(2).subset_of(s));
  EXPECT_EQ((s - WorldSet::single(0)).min(), 2u);
  std::vector<World> seen;
  for (World w : s) seen.push_back(w);
  EXPECT_EQ(seen, (std::vector<World>{0, 2}));
  EXPECT_EQ(format_set(s, {"a", "b", "c"}), "{a, c}");
}

TEST(Parse, RhdBindsTighterThanImplication) {
  EXPECT_EQ(parse("p |> q -> [](p |> q)"),
            Formula::implies(Formula::rhd(P(), Q()), Formula::box(Formula::rhd(P(), Q()))));
}

TEST(Parse, NegationDesugars) { EXPECT_EQ(parse("~p"), Formula::implies(P(), Formula::bottom())); }

TEST(Parse, DiamondDesugars) {
  const Formula bot = Formula::bottom();
  EXPECT_EQ(parse("<> p"), Formula::implies(Formula::box(Formula::implies(P(), bot)), bot));
}

TEST(Parse, DerivedConnectives) {
  EXPECT_EQ(parse("p & q"), Formula::implies(Formula::implies(P(), Formula::implies(Q(), Formula::bottom())),
                                             Formula::bottom()));
  EXPECT_EQ(parse("p | q"), Formula::implies(Formula::neg(P()), Q()));
  EXPECT_EQ(parse("p <-> q"), Formula::conj(Formula::implies(P(), Q()), Formula::implies(Q(), P())));
  EXPECT_EQ(parse("true"), Formula::neg(Formula::bottom()));
}

TEST(Parse, Precedence) {
  EXPECT_EQ(parse("p & q | r"), Formula::disj(Formula::conj(P(), Q()), R()));
  EXPECT_EQ(parse("p -> q -> r"), Formula::implies(P(), Formula::implies(Q(), R())));
  EXPECT_EQ(parse("p | q |> r"), Formula::rhd(Formula::disj(P(), Q()), R()));
  EXPECT_EQ(parse("[]p & q"), Formula::conj(Formula::box(P()), Q()));
  EXPECT_EQ(parse("p <-> q <-> r"), Formula::iff(P(), Formula::iff(Q(), R())));
  EXPECT_EQ(parse("p -> q <-> r"), Formula::iff(Formula::implies(P(), Q()), R()));
}

TEST(Parse, WhitespaceAndComments) {
  EXPECT_EQ(parse("  p\t|>\nq  # trailing"), Formula::rhd(P(), Q()));
}

TEST(Parse, Errors) {
  EXPECT_THROW(parse("p |>"), ParseError);
  EXPECT_THROW(parse("p |> q |> r"), ParseError);
  EXPECT_THROW(parse("(p"), ParseError);
  EXPECT_THROW(parse("p $ q"), ParseError);
  EXPECT_THROW(parse("A -> p"), ParseError);
  EXPECT_THROW(parse(""), ParseError);
  try {
    parse("p & & q");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), 4u);
    EXPECT_EQ(e.line(), 1u);
    EXPECT_EQ(e.column(), 5u);
  }
}

TEST(Parse, Metavariables) {
  EXPECT_EQ(parse("A |> B", ParseOptions{true}), Formula::rhd(Formula::meta("A"), Formula::meta("B")));
  EXPECT_TRUE(is_atom_name("p1_x"));
  EXPECT_FALSE(is_atom_name("P"));
  EXPECT_FALSE(is_atom_name("1p"));
}

TEST(Print, Examples) {
  EXPECT_EQ(print(Formula::bottom()), "false");
  EXPECT_EQ(print(Formula::rhd(P(), Q())), "p |> q");
  const Formula f = Formula::implies(Formula::rhd(P(), Q()), Formula::rhd(P(), Formula::conj(Q(), R())));
  EXPECT_EQ(parse(print(f)), f);
}

TEST(Print, CanonicalTextIsFixed) {
  for (const char* s : {"p |> q -> [](p |> q)", "~(p |> ~r) |> q & []r", "<>p & []r |> q & []r",
                        "(p |> q) & (q |> r) -> p |> r", "(~p -> q) |> r", "[][]false", "true"})
    EXPECT_EQ(print(parse(s)), s);
}

// Every core formula of depth at most 3 over p, q.
TEST(Print, RoundTripExhaustiveDepth3) {
  const std::vector<Formula> leaves{Formula::bottom(), P(), Q()};
  std::vector<Formula> upto2 = leaves;
  for (int d = 1; d <= 2; ++d) {
    std::vector<Formula> next = leaves;
    for (const auto& a : upto2) next.push_back(Formula::box(a));
    for (const auto& a : upto2)
      for (const auto& b : upto2) {
        next.push_back(Formula::implies(a, b));
        next.push_back(Formula::rhd(a, b));
      }
    upto2 = std::move(next);
  }
  ASSERT_EQ(upto2.size(), 1179u);
  std::size_t checked = 0, bad = 0;
  auto check = [&](const Formula& f) {
    ++checked;
    if (!(parse(print(f)) == f)) ++bad;
  };
  for (const auto& a : leaves) check(a);
  for (const auto& a : upto2) check(Formula::box(a));
  for (const auto& a : upto2)
    for (const auto& b : upto2) {
      check(Formula::implies(a, b));
      check(Formula::rhd(a, b));
    }
  EXPECT_EQ(checked, 2781264u);
  EXPECT_EQ(bad, 0u);
}

Formula random_formula(std::mt19937_64& rng, int depth) {
  if (depth == 0 || rng() % 5 == 0) {
    switch (rng() % 4) {
      case 0: return Formula::bottom();
      case 1: return P();
      case 2: return Q();
      default: return Formula::atom("x_" + std::to_string(rng() % 3));
    }
  }
  switch (rng() % 3) {
    case 0: return Formula::box(random_formula(rng, depth - 1));
    case 1: return Formula::implies(random_formula(rng, depth - 1), random_formula(rng, depth - 1));
    default: return Formula::rhd(random_formula(rng, depth - 1), random_formula(rng, depth - 1));
  }
}

TEST(Print, RoundTripRandomDeep) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 3000; ++i) {
    const Formula f = random_formula(rng, 4 + static_cast<int>(rng() % 5));
    ASSERT_EQ(parse(print(f)), f) << print(f);
  }
}

TEST(Schema, CatalogHasSixteenDistinctSchemata) {
  std::set<std::string> names;
  for (SchemaId id : kAllSchemata) {
    EXPECT_EQ(schema(id).id, id);
    names.insert(schema_name(id));
    for (const auto& a : atoms_of(schema(id).body)) ADD_FAILURE() << schema_name(id) << " has object atom " << a;
  }
  EXPECT_EQ(names.size(), 16u);
  EXPECT_EQ(kBaseSchemata.size(), 8u);
  EXPECT_EQ(schema_from_name("W*"), SchemaId::Wstar);
  EXPECT_EQ(schema_from_name("R*"), SchemaId::Rstar);
  EXPECT_FALSE(schema_from_name("Q").has_value());
}

TEST(Schema, InstantiateR) {
  const Substitution s{{"A", P()}, {"B", Q()}, {"C", R()}};
  EXPECT_EQ(instantiate(SchemaId::R, s), parse("p|>q -> ~(p|>~r) |> q & []r"));
}

TEST(Schema, InstantiateP0) {
  EXPECT_EQ(instantiate(SchemaId::P0, {{"A", P()}, {"B", Q()}}), parse("p |> <>q -> [](p |> q)"));
}

TEST(Schema, InstantiateL2) {
  EXPECT_EQ(instantiate(SchemaId::L2, {{"A", Formula::bottom()}}), parse("[]false -> [][]false"));
}

TEST(Schema, MissingBindingThrows) {
  EXPECT_THROW(instantiate(SchemaId::R, {{"A", P()}, {"B", Q()}}), Error);
}

TEST(Schema, ObjectAtomsAreUntouched) {
  const Formula body = parse("A |> p", ParseOptions{true});
  EXPECT_EQ(substitute(body, {{"A", Q()}, {"p", R()}}), parse("q |> p"));
}

TEST(Schema, NoMetavariablesMeansIdentity) {
  const Formula body = parse("p |> []q -> r");
  const Schema s{SchemaId::L1, "closed", body};
  EXPECT_EQ(instantiate(s, {}), body);
  EXPECT_EQ(instantiate(s, {{"A", P()}}), body);
}

TEST(Schema, RstarExtendsRConsequentWithBoxNotA) {
  const Formula& r = schema(SchemaId::R).body;
  const Formula& rs = schema(SchemaId::Rstar).body;
  EXPECT_EQ(rs.left(), r.left());
  EXPECT_EQ(rs.right().left(), r.right().left());
  EXPECT_EQ(rs.right().right(), Formula::conj(r.right().right(), Formula::box(Formula::neg(Formula::meta("A")))));
}

TEST(Schema, ParseSchemaList) {
  EXPECT_EQ(parse_schema_list("P0, W*"), (std::vector<SchemaId>{SchemaId::P0, SchemaId::Wstar}));
  EXPECT_THROW(parse_schema_list("P0,Nope"), Error);
}

TEST(Subformulas, ChildrenBeforeParents) {
  EXPECT_EQ(subformulas(P()), std::vector<Formula>{P()});
  EXPECT_EQ(subformulas(Formula::box(P())), (std::vector<Formula>{P(), Formula::box(P())}));
  const Formula f = Formula::rhd(P(), Formula::box(P()));
  EXPECT_EQ(subformulas(f), (std::vector<Formula>{P(), Formula::box(P()), f}));
}

TEST(Subformulas, DistinctAndClosed) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 300; ++i) {
    const Formula f = random_formula(rng, 5);
    const auto subs = subformulas(f);
    EXPECT_EQ(subs.back(), f);
    for (std::size_t a = 0; a < subs.size(); ++a)
      for (std::size_t b = a + 1; b < subs.size(); ++b) EXPECT_FALSE(subs[a] == subs[b]);
    for (std::size_t a = 0; a < subs.size(); ++a) {
      const Formula& g = subs[a];
      auto before = [&](const Formula& child) {
        for (std::size_t b = 0; b < a; ++b)
          if (subs[b] == child) return true;
        return false;
      };
      if (g.kind() == Kind::Box) {
        EXPECT_TRUE(before(g.body()));
      } else if (g.kind() == Kind::Implies || g.kind() == Kind::Rhd) {
        EXPECT_TRUE(before(g.left()) && before(g.right()));
      }
    }
  }
}

}  // namespace
}  // namespace ilvelt
