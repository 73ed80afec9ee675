#include <gtest/gtest.h>

#include <random>

#include "ilvelt/enumerate.hpp"
#include "ilvelt/gen_conditions.hpp"
#include "ilvelt/genframe.hpp"
#include "ilvelt/parser.hpp"
#include "ilvelt/structure_io.hpp"

namespace ilvelt {
namespace {

const std::string kData = ILVELT_DATA_DIR;

GenFrame f7() { return to_genmodel(load_structure(kData + "/f7.frame")).genframe; }
GenFrame g4() { return to_genmodel(load_structure(kData + "/g4.frame")).genframe; }

WorldSet set_of(const GenFrame& g, std::initializer_list<const char*> names) {
  WorldSet s;
  for (const char* n : names) s.insert(g.at(n));
  return s;
}

bool has_condition(const std::vector<Violation>& vs, const std::string& cond) {
  for (const auto& v : vs)
    if (v.condition == cond) return true;
  return false;
}

bool same(const GenFrame& a, const GenFrame& b) {
  const std::size_t n = a.world_count();
  for (World w = 0; w < n; ++w) {
    if (a.successors(w) != b.successors(w)) return false;
    for (World x = 0; x < n; ++x)
      if (a.targets(w, x) != b.targets(w, x)) return false;
  }
  return true;
}

TEST(ValidateGenframe, F7ClosedIsValid) { EXPECT_TRUE(validate_genframe(f7()).empty()); }

TEST(ValidateGenframe, EmptyTarget) {
  GenFrame g({"w", "x"});
  g.add_r(0, 1);
  g.add_s(0, 1, WorldSet::single(1));
  g.add_s(0, 1, WorldSet{});
  EXPECT_TRUE(has_condition(validate_genframe(g), "targets nonempty"));
  EXPECT_THROW(close_genframe(g), Error);
}

TEST(ValidateGenframe, TargetOutsideR) {
  GenFrame g({"w", "x", "y"});
  g.add_r(0, 1);
  g.add_s(0, 1, WorldSet::single(1));
  g.add_s(0, 1, WorldSet::single(2));
  EXPECT_TRUE(has_condition(validate_genframe(g), "S within R"));
}

TEST(ValidateGenframe, MissingQuasiTransitivity) {
  GenFrame g = close_genframe([] {
    GenFrame s({"w", "x", "y", "z"});
    s.add_r(0, 1);
    s.add_r(0, 2);
    s.add_r(0, 3);
    return s;
  }());
  g.add_s(0, 1, WorldSet::single(2));
  g.add_s(0, 2, WorldSet::single(3));
  EXPECT_TRUE(has_condition(validate_genframe(g), "S quasi-transitive"));
  EXPECT_TRUE(validate_genframe(close_genframe(g)).empty());
}

TEST(CloseGenframe, F7Closure) {
  const GenFrame g = f7();
  const World w = g.at("w"), x = g.at("x"), y = g.at("y");
  EXPECT_TRUE(g.s(w, y, set_of(g, {"b0"})));
  EXPECT_TRUE(g.s(w, y, set_of(g, {"b1"})));
  // from x S_w {y}, y S_w A and y outside A
  EXPECT_TRUE(g.s(w, x, set_of(g, {"y"})));
  EXPECT_TRUE(g.s(w, x, set_of(g, {"a0", "a1"})));
  EXPECT_FALSE(g.s(w, x, set_of(g, {"b0", "b1"})));
  EXPECT_EQ(g.targets(x, y), (std::vector<WorldSet>{set_of(g, {"y"}), set_of(g, {"b0", "b1"})}));
  EXPECT_EQ(g.triple_count(), 21u);
  EXPECT_TRUE(same(close_genframe(g), g));
}

TEST(CloseGenframe, QuasiReflexiveSeed) {
  GenFrame seed({"w", "x"});
  seed.add_r(0, 1);
  const GenFrame g = close_genframe(seed);
  EXPECT_EQ(g.targets(0, 1), std::vector<WorldSet>{WorldSet::single(1)});
  EXPECT_EQ(g.triple_count(), 1u);
}

TEST(CloseGenframe, CycleThrows) {
  GenFrame seed({"a", "b"});
  seed.add_r(0, 1);
  seed.add_s(1, 0, WorldSet::single(0));
  EXPECT_THROW(close_genframe(seed), Error);
}

TEST(CloseGenframe, RandomSeedsAreIdempotent) {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 200; ++i) {
    const GenFrame g = random_genframe(1 + rng() % 5, rng);
    EXPECT_TRUE(validate_genframe(g).empty());
    EXPECT_TRUE(same(close_genframe(g), g));
  }
}

TEST(Geval, VacuousBox) { EXPECT_TRUE(geval(GenModel{GenFrame(1), {}}, World{0}, parse("[]false"))); }

TEST(Geval, F7Rhd) {
  GenModel m{f7(), {}};
  m.valuation["p"] = set_of(m.genframe, {"y"});
  m.valuation["q"] = set_of(m.genframe, {"a0", "a1"});
  EXPECT_TRUE(geval(m, "w", parse("p |> q")));
  m.valuation["q"] = set_of(m.genframe, {"a0"});
  EXPECT_FALSE(geval(m, "w", parse("p |> q")));
  EXPECT_THROW(geval(m, "v", parse("p")), Error);
}

TEST(Lift, SingleEdge) {
  Frame seed({"w", "x"});
  seed.add_r(0, 1);
  const GenFrame g = lift(close_frame(seed));
  EXPECT_TRUE(g.s(0, 1, WorldSet::single(1)));
  EXPECT_TRUE(validate_genframe(g).empty());
}

TEST(Lift, PairTarget) {
  Frame seed({"w", "x", "y"});
  seed.add_r(0, 1);
  seed.add_r(0, 2);
  seed.add_s(0, 1, 2);
  const GenFrame g = lift(close_frame(seed));
  EXPECT_TRUE(g.s(0, 1, set_of(g, {"x", "y"})));
  EXPECT_FALSE(g.s(0, 2, set_of(g, {"x", "y"})));
}

TEST(Lift, ValidAndPreservesForcing) {
  std::mt19937_64 rng(17);
  const std::vector<Formula> fs{parse("p |> q"), parse("(p |> q) -> [](p |> q)"), parse("<>p |> p & []q"),
                                parse("~(p |> ~q) |> q & []~p"), parse("(p | q) |> []false")};
  for (int i = 0; i < 300; ++i) {
    const Model m = random_model(5, {"p", "q"}, rng);
    const GenModel gm = lift(m);
    ASSERT_TRUE(validate_genframe(gm.genframe).empty());
    for (const auto& f : fs)
      for (World w = 0; w < m.world_count(); ++w) EXPECT_EQ(geval(gm, w, f), eval(m, w, f)) << f;
  }
}

TEST(M0Condition, F7) { EXPECT_TRUE(check_M0_condition(f7()).holds()); }

TEST(M0Condition, SingleWorld) { EXPECT_TRUE(check_M0_condition(GenFrame(1)).holds()); }

TEST(P0Condition, F7) { EXPECT_TRUE(check_P0_condition(f7()).holds()); }

TEST(P0Condition, SingleWorld) { EXPECT_TRUE(check_P0_condition(GenFrame(1)).holds()); }

// y S_w {a} and a R b, but x does not see b, so y has no S_x target inside {b}.
TEST(P0Condition, FailsWithWitness) {
  GenFrame seed({"w", "x", "y", "a", "b"});
  seed.add_r(0, 1);
  seed.add_r(1, 2);
  seed.add_s(0, 2, WorldSet::single(3));
  seed.add_r(3, 4);
  const GenFrame g = close_genframe(seed);
  const auto v = check_P0_condition(g);
  ASSERT_FALSE(v.holds());
  const auto& wit = v.witness();
  EXPECT_EQ(wit.w, 0u);
  EXPECT_EQ(wit.x, 1u);
  EXPECT_EQ(wit.y, 2u);
  EXPECT_EQ(wit.big_y, WorldSet::single(3));
  EXPECT_EQ(wit.z, WorldSet::single(4));
  EXPECT_FALSE(genframe_valid_schema(g, SchemaId::P0).holds());
}

TEST(ChoiceSets, F7MinimalForXY) {
  const GenFrame g = f7();
  const auto cs = choice_sets(g, g.at("x"), g.at("y"), true);
  ASSERT_EQ(cs.size(), 2u);
  EXPECT_EQ(cs[0].members, set_of(g, {"y", "b0"}));
  EXPECT_EQ(cs[1].members, set_of(g, {"y", "b1"}));
  const auto all = choice_sets(g, g.at("x"), g.at("y"), false);
  ASSERT_EQ(all.size(), 3u);
  EXPECT_EQ(all[2].members, set_of(g, {"y", "b0", "b1"}));
}

TEST(ChoiceSets, OnlyQuasiReflexive) {
  GenFrame seed({"w", "x"});
  seed.add_r(0, 1);
  const auto cs = choice_sets(close_genframe(seed), 0, 1, true);
  ASSERT_EQ(cs.size(), 1u);
  EXPECT_EQ(cs[0].members, WorldSet::single(1));
}

TEST(ChoiceSets, RequiresR) { EXPECT_THROW(choice_sets(GenFrame(2), 0, 1, true), Error); }

TEST(ChoiceSets, MinimalOnesAreMinimalHittingSets) {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 100; ++i) {
    const GenFrame g = random_genframe(5, rng);
    for (World w = 0; w < g.world_count(); ++w)
      for (World x : g.successors(w)) {
        const auto all = choice_sets(g, w, x, false);
        const auto mins = choice_sets(g, w, x, true);
        for (const auto& c : all) {
          for (WorldSet t : g.targets(w, x)) EXPECT_TRUE(t.intersects(c.members));
          bool above = false;
          for (const auto& m : mins) above |= m.members.subset_of(c.members);
          EXPECT_TRUE(above);
        }
      }
  }
}

TEST(RCondition, F7FailsOmittingB0) {
  const GenFrame g = f7();
  const auto v = check_R_condition(g);
  ASSERT_FALSE(v.holds());
  const auto& wit = v.witness();
  EXPECT_EQ(wit.w, g.at("w"));
  EXPECT_EQ(wit.x, g.at("x"));
  EXPECT_EQ(wit.y, g.at("y"));
  EXPECT_EQ(wit.big_y, set_of(g, {"a0", "a1"}));
  EXPECT_EQ(wit.failing, (std::vector<WorldSet>{set_of(g, {"y", "b0"}), set_of(g, {"y", "b1"})}));
  EXPECT_FALSE(genframe_valid_schema(g, SchemaId::R).holds());
}

TEST(RCondition, SingleWorld) { EXPECT_TRUE(check_R_condition(GenFrame(1)).holds()); }

TEST(RCondition, F7WithoutAEdges) {
  auto st = load_structure(kData + "/f7.frame");
  std::erase_if(st.r, [&](auto e) { return st.worlds[e.first][0] == 'a'; });
  const GenFrame g = to_genmodel(st).genframe;
  EXPECT_TRUE(g.successors(g.at("a0")).empty());
  EXPECT_TRUE(check_R_condition(g).holds());
  EXPECT_TRUE(genframe_valid_schema(g, SchemaId::R).holds());
}

// Enlarging a choice set only makes the conclusion easier to meet.
TEST(RCondition, MonotoneInGamma) {
  std::mt19937_64 rng(29);
  for (int i = 0; i < 60; ++i) {
    const GenFrame g = random_genframe(5, rng);
    for (World w = 0; w < g.world_count(); ++w)
      for (World x : g.successors(w))
        for (World y : g.successors(x))
          for (WorldSet big_y : g.targets(w, y)) {
            auto answered = [&](WorldSet gamma) {
              for (WorldSet yp : g.targets(w, x)) {
                if (!yp.subset_of(big_y)) continue;
                bool ok = true;
                for (World m : yp) ok &= g.successors(m).subset_of(gamma);
                if (ok) return true;
              }
              return false;
            };
            for_each_subset(g.universe(), [&](WorldSet gamma) {
              if (!answered(gamma)) return;
              for (World extra = 0; extra < g.world_count(); ++extra)
                EXPECT_TRUE(answered(gamma | WorldSet::single(extra)));
            });
          }
  }
}

TEST(NotW, SingleWorld) { EXPECT_FALSE(check_not_W(GenFrame(1))); }

TEST(NotW, G4) {
  const GenFrame g = g4();
  const auto wit = find_not_W(g);
  ASSERT_TRUE(wit.has_value());
  EXPECT_EQ(wit->w, g.at("w"));
  EXPECT_EQ(wit->z0, g.at("z0"));
  EXPECT_EQ(wit->u, set_of(g, {"y"}));
  EXPECT_EQ(wit->z, set_of(g, {"z0", "z1"}) | set_of(g, {"y"}));
  EXPECT_EQ(wit->reachable, set_of(g, {"z0", "y", "z1"}));
  const auto v = genframe_valid_schema(g, SchemaId::W);
  ASSERT_FALSE(v.holds());
  GenModel m{g, {{"p", set_of(g, {"z0", "z1"})}, {"q", set_of(g, {"y"})}}};
  EXPECT_FALSE(geval(m, "w", parse("p |> q -> p |> q & []~p")));
}

TEST(NotW, OnLiftedFramesMatchesWInvalidity) {
  std::size_t lifted = 0, invalid = 0;
  for (const Frame& fr : enumerate_frames_upto(4)) {
    const bool w = frame_valid_schema(fr, SchemaId::W).holds();
    const GenFrame g = lift(fr);
    EXPECT_EQ(check_not_W(g), !w) << write_structure(fr);
    ++lifted;
    invalid += !w;
  }
  EXPECT_GT(invalid, 0u);
  EXPECT_GT(lifted, invalid);
}

TEST(GenValidSchema, F7) {
  const GenFrame g = f7();
  EXPECT_TRUE(genframe_valid_schema(g, SchemaId::M0).holds());
  EXPECT_TRUE(genframe_valid_schema(g, SchemaId::P0).holds());
  EXPECT_FALSE(genframe_valid_schema(g, SchemaId::R).holds());
}

TEST(GenValidSchema, IlAxiomsOnRandomGenframes) {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 40; ++i) {
    const GenFrame g = random_genframe(1 + rng() % 4, rng);
    for (SchemaId id : kBaseSchemata) EXPECT_TRUE(genframe_valid_schema(g, id).holds()) << schema_name(id);
  }
}

}  // namespace
}  // namespace ilvelt
