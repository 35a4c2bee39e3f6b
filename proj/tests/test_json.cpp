#include <gtest/gtest.h>

#include "circlesim/json_io.hpp"
#include "circlesim/random.hpp"

using namespace circlesim;
namespace jio = circlesim::json_io;

namespace {
Rational q(long p, long d = 1) { return ratio(Integer(p), Integer(d)); }
}  // namespace

TEST(Json, RationalParsing) {
  EXPECT_EQ(parse_rational("2/4"), q(1, 2));
  EXPECT_EQ(parse_rational("-3"), -3);
  EXPECT_THROW(parse_rational("1/0"), ParseError);
  EXPECT_THROW(parse_rational("abc"), ParseError);
  EXPECT_THROW(parse_rational(""), ParseError);
}

TEST(Json, MeasureRoundtrip) {
  auto mu = convolve(StepMeasure::uniform(0, q(1, 4)), StepMeasure::uniform(0, q(1, 4)));
  EXPECT_EQ(jio::measure_from_json(jio::to_json(mu)), mu);
  StepMeasure atomic({{0, Polynomial::constant(q(1, 2))}}, {{q(1, 3), q(1, 2)}});
  EXPECT_EQ(jio::measure_from_json(jio::to_json(atomic)), atomic);
  auto parsed = jio::measure_from_json(
      jio::parse_text(R"({"pieces":[{"from":"0","density":"1/2"},{"from":"1/2","density":"3/2"}],"atoms":[]})"));
  EXPECT_EQ(mass(parsed, {q(1, 4), q(3, 4)}), q(1, 2));
}

TEST(Json, AdaptationTransformActionRoundtrip) {
  auto rng = random::trial_engine(71, 0);
  auto h = random::adaptation(rng, 3, 16);
  EXPECT_EQ(jio::adaptation_from_json(jio::to_json(h)), h);
  auto T = random::permutation(rng, 8);
  EXPECT_EQ(jio::transform_from_json(jio::to_json(T)).perm(), T.perm());
  auto A = random::action(rng, 2, 12);
  EXPECT_EQ(jio::action_from_json(jio::to_json(A)), A);
  DyadicSet S(3, {0, 1, 1, 0, 1, 0, 0, 1});
  EXPECT_EQ(jio::to_json(S)["mask"], "01101001");
  EXPECT_EQ(jio::dyadic_set_from_json(jio::to_json(S)), S);
}

TEST(Json, TableRoundtripAndFormat) {
  auto t = diagonal_table(Window(1, 2), Partition::uniform(2));
  auto j = jio::to_json(t);
  EXPECT_EQ(j["masses"]["0,0"], "1/2");
  EXPECT_EQ(jio::table_from_json(j), t);
  auto parsed = jio::table_from_json(
      jio::parse_text(R"({"d":1,"w":2,"cuts":["0","1/2"],"masses":{"0,0":"1/2","1,1":"1/2"}})"));
  EXPECT_EQ(parsed, t);
}

TEST(Json, WitnessFormat) {
  auto t = action_to_sim(LatticeAction({IntervalPermutation::rotation(2, 1)}), Window(1, 2), Partition::uniform(2));
  auto j = jio::to_json(graph_witness(t));
  EXPECT_EQ(j["pairs"][0]["alpha"], nlohmann::json::array({0}));
  EXPECT_EQ(j["pairs"][0]["beta"], nlohmann::json::array({1}));
  EXPECT_EQ(j["pairs"][0]["map"], nlohmann::json::array({1, 0}));
  EXPECT_EQ(j["pairs"][0]["defect"], "0");
}

TEST(Json, Errors) {
  EXPECT_THROW(jio::parse_text("{"), ParseError);
  EXPECT_THROW(jio::action_from_json(jio::parse_text(R"({"d":1,"n":2})")), ParseError);
  EXPECT_THROW(jio::action_from_json(jio::parse_text(R"({"d":1,"n":3,"generators":[[1,0]]})")), ShapeMismatch);
  EXPECT_THROW(jio::action_from_json(jio::parse_text(R"({"d":2,"n":2,"generators":[[1,0]]})")), ShapeMismatch);
  EXPECT_THROW(jio::action_from_json(jio::parse_text(R"({"d":1,"n":2,"generators":[[1,1]]})")), DomainError);
  EXPECT_THROW(jio::table_from_json(jio::parse_text(R"({"d":1,"w":2,"cuts":["0"],"masses":{"0,x":"1"}})")),
               ParseError);
  EXPECT_THROW(jio::dyadic_set_from_json(jio::parse_text(R"({"level":1,"mask":"0a"})")), ParseError);
  EXPECT_THROW(jio::read_file("/nonexistent/file.json"), ParseError);
}
