#include <gtest/gtest.h>

#include <random>

#include "ilvelt/hilbert.hpp"
#include "ilvelt/parser.hpp"

namespace ilvelt {
namespace {

const std::string kData = ILVELT_DATA_DIR;

Derivation fixture(const std::string& name) { return load_derivation(kData + "/" + name + ".proof"); }

const std::vector<std::string> kAllFixtures{"p0_from_r",    "m0_from_r",    "rstar_from_rw",
                                            "r_from_rstar", "w_from_rstar", "rstar_top_instance"};

TEST(Taut, Examples) {
  EXPECT_TRUE(taut_check(parse("p -> p")));
  EXPECT_TRUE(taut_check(parse("[]p -> []p")));
  EXPECT_TRUE(taut_check(parse("(p |> q) & r -> r & (p |> q)")));
  EXPECT_FALSE(taut_check(parse("<>a & []c -> ~(a |> ~c)")));
  EXPECT_FALSE(taut_check(parse("[]p -> p")));
  EXPECT_FALSE(taut_check(parse("p |> q -> p |> q & q")));
}

TEST(Taut, TooManyLeaves) {
  std::string text = "x0";
  for (int i = 1; i < 27; ++i) text += " & x" + std::to_string(i);
  EXPECT_THROW(taut_check(parse(text)), Error);
}

void leaves(const Formula& f, std::vector<std::string>& out) {
  if (f.kind() == Kind::Implies) {
    leaves(f.left(), out);
    leaves(f.right(), out);
  } else if (f.kind() != Kind::Bottom) {
    const std::string k = print(f);
    if (std::find(out.begin(), out.end(), k) == out.end()) out.push_back(k);
  }
}

bool naive_value(const Formula& f, const std::vector<std::string>& ls, unsigned row) {
  switch (f.kind()) {
    case Kind::Bottom: return false;
    case Kind::Implies: return !naive_value(f.left(), ls, row) || naive_value(f.right(), ls, row);
    default: {
      const auto i = std::find(ls.begin(), ls.end(), print(f)) - ls.begin();
      return (row >> i) & 1u;
    }
  }
}

Formula random_prop(std::mt19937_64& rng, int depth) {
  static const std::vector<Formula> atoms{parse("p"), parse("q"), parse("[]p"), parse("p |> q"), parse("false")};
  if (depth == 0 || rng() % 4 == 0) return atoms[rng() % atoms.size()];
  return Formula::implies(random_prop(rng, depth - 1), random_prop(rng, depth - 1));
}

TEST(Taut, AgreesWithNaiveTruthTable) {
  std::mt19937_64 rng(37);
  int tautologies = 0;
  for (int i = 0; i < 4000; ++i) {
    const Formula f = random_prop(rng, 5);
    std::vector<std::string> ls;
    leaves(f, ls);
    ASSERT_LE(ls.size(), 4u);
    bool all = true;
    for (unsigned row = 0; row < (1u << ls.size()); ++row) all = all && naive_value(f, ls, row);
    EXPECT_EQ(taut_check(f), all) << f;
    tautologies += all;
  }
  EXPECT_GT(tautologies, 100);
}

TEST(Fixtures, AllCheck) {
  for (const auto& name : kAllFixtures) {
    const auto v = check_derivation(fixture(name));
    EXPECT_TRUE(v.holds()) << name << ": step " << v.witness().step << ": " << v.witness().reason;
  }
}

TEST(Fixtures, Conclusions) {
  const Substitution abc{{"A", parse("p")}, {"B", parse("q")}, {"C", parse("r")}};
  EXPECT_EQ(conclusion(fixture("p0_from_r")), parse("p |> <>q -> [](p |> q)"));
  EXPECT_EQ(conclusion(fixture("m0_from_r")), instantiate(SchemaId::M0, abc));
  EXPECT_EQ(conclusion(fixture("rstar_from_rw")), instantiate(SchemaId::Rstar, abc));
  EXPECT_EQ(conclusion(fixture("r_from_rstar")), instantiate(SchemaId::R, abc));
  EXPECT_EQ(conclusion(fixture("w_from_rstar")), instantiate(SchemaId::W, abc));
  EXPECT_EQ(conclusion(fixture("rstar_top_instance")), parse("p |> q -> ~(p |> false) |> q & []true & []~p"));
}

TEST(Fixtures, Logics) {
  EXPECT_EQ(fixture("p0_from_r").logic, std::vector<SchemaId>{SchemaId::R});
  EXPECT_EQ(fixture("rstar_from_rw").logic, (std::vector<SchemaId>{SchemaId::R, SchemaId::W}));
  EXPECT_EQ(fixture("w_from_rstar").logic, std::vector<SchemaId>{SchemaId::Rstar});
}

TEST(Fixtures, PrefixesCheck) {
  for (const auto& name : kAllFixtures) {
    const Derivation d = fixture(name);
    for (std::size_t len = 1; len <= d.steps.size(); ++len) {
      Derivation prefix{d.logic, {d.steps.begin(), d.steps.begin() + static_cast<std::ptrdiff_t>(len)}};
      EXPECT_TRUE(check_derivation(prefix).holds()) << name << " prefix " << len;
    }
  }
}

TEST(Fixtures, RoundTripThroughText) {
  for (const auto& name : kAllFixtures) {
    const Derivation d = fixture(name);
    const Derivation again = parse_derivation(write_derivation(d));
    ASSERT_EQ(again.steps.size(), d.steps.size());
    for (std::size_t k = 0; k < d.steps.size(); ++k) EXPECT_EQ(again.steps[k].formula, d.steps[k].formula);
    EXPECT_TRUE(check_derivation(again).holds()) << name;
  }
}

// Redirecting any premise index of an mp or nec step must be caught at that step.
TEST(Fixtures, IndexMutationsAreRejectedAtTheMutatedStep) {
  for (const auto& name : kAllFixtures) {
    const Derivation d = fixture(name);
    const std::size_t n = d.steps.size();
    std::size_t mutations = 0;
    for (std::size_t k = 1; k <= n; ++k) {
      const Rule rule = d.steps[k - 1].why.rule;
      if (rule != Rule::MP && rule != Rule::Nec) continue;
      for (int field = 0; field < (rule == Rule::MP ? 2 : 1); ++field)
        for (std::size_t v = 0; v <= n + 1; ++v) {
          Derivation m = d;
          std::size_t& idx = field == 0 ? m.steps[k - 1].why.i : m.steps[k - 1].why.j;
          if (idx == v) continue;
          idx = v;
          ++mutations;
          const auto res = check_derivation(m);
          ASSERT_FALSE(res.holds()) << name << " step " << k << " -> " << v;
          EXPECT_EQ(res.witness().step, k) << name;
        }
    }
    EXPECT_GT(mutations, 0u) << name;
  }
}

TEST(Equivalence, FixturesCheck) {
  const auto v = check_equivalence_fixtures(kData);
  EXPECT_TRUE(v.holds()) << v.witness().name;
}

TEST(Equivalence, WithoutRstarTheFirstInclusionFixtureFails) {
  auto fx = load_equivalence_fixtures(kData);
  for (auto& f : fx) std::erase(f.derivation.logic, SchemaId::Rstar);
  const auto v = check_equivalence_fixtures(fx);
  ASSERT_FALSE(v.holds());
  EXPECT_EQ(v.witness().name, "r_from_rstar");
  EXPECT_EQ(v.witness().error.step, 1u);
}

Derivation small(const std::string& body) { return parse_derivation("logic: R\n" + body); }

TEST(Check, MpOnNonImplication) {
  const auto v = check_derivation(small("1. p -> p ; taut\n2. []false -> []false ; taut\n3. q ; mp 1 2\n"));
  ASSERT_FALSE(v.holds());
  EXPECT_EQ(v.witness().step, 3u);
}

TEST(Check, ForwardIndex) {
  const auto v = check_derivation(small("1. p -> p ; taut\n2. [](p -> p) ; nec 2\n"));
  ASSERT_FALSE(v.holds());
  EXPECT_EQ(v.witness().step, 2u);
  EXPECT_NE(v.witness().reason.find("bad index"), std::string::npos);
}

TEST(Check, AxiomOutsideLogic) {
  const auto v = check_derivation(small("1. p |> q -> p |> q & []~p ; ax W [A:=p, B:=q]\n"));
  ASSERT_FALSE(v.holds());
  EXPECT_EQ(v.witness().step, 1u);
}

TEST(Check, AxiomBindings) {
  EXPECT_FALSE(check_derivation(small("1. <>p |> p ; ax J5 []\n")).holds());
  EXPECT_FALSE(check_derivation(small("1. <>p |> p ; ax J5 [A:=p, B:=q]\n")).holds());
  EXPECT_FALSE(check_derivation(small("1. <>p |> q ; ax J5 [A:=p]\n")).holds());
  EXPECT_TRUE(check_derivation(small("1. <>p |> p ; ax J5 [A:=p]\n")).holds());
}

TEST(Check, NotATautology) {
  const auto v = check_derivation(small("1. []p -> p ; taut\n"));
  ASSERT_FALSE(v.holds());
  EXPECT_NE(v.witness().reason.find("not a tautology"), std::string::npos);
}

TEST(Check, Empty) { EXPECT_FALSE(check_derivation(Derivation{}).holds()); }

TEST(Parse, Errors) {
  EXPECT_THROW(parse_derivation("1. p -> p ; taut\n3. p -> p ; taut\n"), FormatError);
  EXPECT_THROW(parse_derivation("1. p -> p ; frob\n"), FormatError);
  EXPECT_THROW(parse_derivation("1. p -> p\n"), FormatError);
  EXPECT_THROW(parse_derivation("1. p -> ; taut\n"), FormatError);
  EXPECT_THROW(parse_derivation("logic: Nope\n"), FormatError);
  EXPECT_THROW(parse_derivation("1. p ; ax J5 [p:=q]\n"), FormatError);
  EXPECT_THROW(parse_derivation("1. p ; ax J5 A:=q\n"), FormatError);
  try {
    parse_derivation("logic: R\n\n1. p -> p ; mp x 2\n");
    FAIL();
  } catch (const FormatError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(Parse, StarNamesAndComments) {
  const Derivation d = parse_derivation("# c\nlogic: R*, W*\n1. p -> p ; taut # trailing\n");
  EXPECT_EQ(d.logic, (std::vector<SchemaId>{SchemaId::Rstar, SchemaId::Wstar}));
  ASSERT_EQ(d.steps.size(), 1u);
  EXPECT_EQ(d.steps[0].line, 3u);
}

}  // namespace
}  // namespace ilvelt
