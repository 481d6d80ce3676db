#include "robustdp/game.hpp"
#include "robustdp/rssd.hpp"

#include "support/test_games.hpp"

#include <gtest/gtest.h>

using namespace robustdp;

namespace {

RawGame singleton_raw(double payoff) {
  RawGame raw;
  raw.n_players = 1;
  raw.states = {"only"};
  raw.player_actions = {{"stay"}};
  raw.payoffs = {{0, {0}, 0, {payoff}}};
  raw.uncertainty = {{0, {0}, {{1.0}}}};
  return raw;
}

RawGame two_state_raw() {
  RawGame raw;
  raw.n_players = 1;
  raw.states = {"a", "b"};
  raw.player_actions = {{"x", "y"}};
  raw.default_payoff = 0.0;
  for (int s = 0; s < 2; ++s) {
    for (int a = 0; a < 2; ++a) raw.uncertainty.push_back({s, {a}, {{0.5, 0.5}}});
  }
  return raw;
}

bool any_contains(const std::vector<std::string>& errors, const std::string& needle) {
  for (const auto& e : errors) {
    if (e.find(needle) != std::string::npos) return true;
  }
  return false;
}

}  // namespace

TEST(Game, SingletonIsValidWithZeroRmax) {
  const TeamMarkovGame g = validate_game(singleton_raw(0.0));
  EXPECT_EQ(g.num_states(), 1);
  EXPECT_EQ(g.num_joint_actions(), 1);
  EXPECT_DOUBLE_EQ(g.r_max(), 0.0);
  EXPECT_EQ(g.uncertainty(0, 0).size(), 1);
}

TEST(Game, RowSumViolationIsReported) {
  RawGame raw = two_state_raw();
  raw.uncertainty[1].rows = {{0.5, 0.6}};
  try {
    validate_game(raw);
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_TRUE(any_contains(e.errors(), "row sum 1.1 != 1")) << e.what();
  }
}

TEST(Game, AllErrorsAreCollected) {
  RawGame raw = two_state_raw();
  raw.uncertainty[0].rows = {{0.5, 0.6}};
  raw.uncertainty[2].rows = {{-0.5, 1.5}};
  raw.uncertainty.pop_back();
  try {
    validate_game(raw);
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.errors().size(), 3u) << e.what();
    EXPECT_TRUE(any_contains(e.errors(), "negative probability"));
    EXPECT_TRUE(any_contains(e.errors(), "missing entry"));
  }
}

TEST(Game, MissingPayoffWithoutDefault) {
  RawGame raw = singleton_raw(1.0);
  raw.payoffs.clear();
  EXPECT_THROW(validate_game(raw), ValidationError);
  raw.default_payoff = 2.5;
  EXPECT_DOUBLE_EQ(validate_game(raw).payoff(0, 0, 0), 2.5);
}

TEST(Game, DuplicateEntriesRejected) {
  RawGame raw = singleton_raw(1.0);
  raw.payoffs.push_back(raw.payoffs.front());
  EXPECT_THROW(validate_game(raw), ValidationError);
  raw = singleton_raw(1.0);
  raw.uncertainty.push_back(raw.uncertainty.front());
  EXPECT_THROW(validate_game(raw), ValidationError);
}

TEST(Game, StructuralErrors) {
  RawGame raw = singleton_raw(1.0);
  raw.player_actions = {{}};
  EXPECT_THROW(validate_game(raw), ValidationError);
  raw = singleton_raw(1.0);
  raw.states = {"a", "a"};
  EXPECT_THROW(validate_game(raw), ValidationError);
  raw = singleton_raw(1.0);
  raw.uncertainty[0].rows = {{1.0, 0.0}};
  EXPECT_THROW(validate_game(raw), ValidationError);
  raw = singleton_raw(1.0);
  raw.payoffs[0].a = {3};
  EXPECT_THROW(validate_game(raw), ValidationError);
}

TEST(Game, TinyNegativesClampedAndDriftRenormalized) {
  RawGame raw = two_state_raw();
  raw.uncertainty[0].rows = {{-1e-16, 1.0 + 1e-16}};
  raw.uncertainty[1].rows = {{0.5 + 4e-13, 0.5}};
  const TeamMarkovGame g = validate_game(raw);
  EXPECT_EQ(g.uncertainty(0, 0).row(0)(0), 0.0);
  EXPECT_NEAR(g.uncertainty(0, 1).row(0).sum(), 1.0, 1e-15);
}

TEST(Game, RmaxComputedOrChecked) {
  RawGame raw = singleton_raw(-3.0);
  EXPECT_DOUBLE_EQ(validate_game(raw).r_max(), 3.0);
  EXPECT_DOUBLE_EQ(validate_game(raw).min_payoff(), -3.0);
  raw.r_max = 10.0;
  EXPECT_DOUBLE_EQ(validate_game(raw).r_max(), 10.0);
  raw.r_max = 1.0;
  EXPECT_THROW(validate_game(raw), ValidationError);
}

TEST(Game, PerPlayerPayoffsAreAveraged) {
  RawGame raw = singleton_raw(0.0);
  raw.payoffs[0].r = {1.0};
  raw.n_players = 1;
  EXPECT_DOUBLE_EQ(validate_game(raw).payoff(0, 0, 0), 1.0);

  RawGame two;
  two.n_players = 2;
  two.states = {"s"};
  two.player_actions = {{"p"}, {"q"}};
  two.payoffs = {{0, {0, 0}, 0, {1.0, 4.0}}};
  two.uncertainty = {{0, {0, 0}, {{1.0}}}};
  EXPECT_DOUBLE_EQ(validate_game(two).payoff(0, 0, 0), 2.5);
}

TEST(Game, JointActionEncodingRoundTrips) {
  RawGame raw;
  raw.n_players = 3;
  raw.states = {"s"};
  raw.player_actions = {{"C", "D"}, {"L", "M", "R"}, {"u", "v"}};
  raw.default_payoff = 0.0;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 3; ++j) {
      for (int k = 0; k < 2; ++k) raw.uncertainty.push_back({0, {i, j, k}, {{1.0}}});
    }
  }
  const TeamMarkovGame g = validate_game(raw);
  ASSERT_EQ(g.num_joint_actions(), 12);
  for (int a = 0; a < 12; ++a) {
    const auto parts = g.decode_joint_action(a);
    EXPECT_EQ(g.encode_joint_action(parts), a);
  }
  // Player 0 is the most significant digit.
  EXPECT_EQ(g.decode_joint_action(6), (std::vector<int>{1, 0, 0}));
  EXPECT_EQ(g.joint_action_label(7), "DLv");
}

TEST(Game, RssdRowSetsCollapseWithoutCooperators) {
  const TeamMarkovGame g = rssd::build_rssd({});
  for (int s = 0; s < g.num_states(); ++s) {
    for (int a = 0; a < g.num_joint_actions(); ++a) {
      EXPECT_EQ(g.uncertainty(s, a).size(), 3);
      const int expected_distinct = a == 7 ? 1 : 3;  // DDD has no cooperators
      EXPECT_EQ(g.uncertainty(s, a).distinct_count(), expected_distinct) << s << " " << a;
    }
  }
}

TEST(Game, ToRawRoundTrips) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const TeamMarkovGame g = testing_support::random_game(seed);
    const TeamMarkovGame h = validate_game(to_raw(g));
    ASSERT_EQ(h.num_states(), g.num_states());
    for (int s = 0; s < g.num_states(); ++s) {
      EXPECT_EQ(h.payoff(s), g.payoff(s));
      for (int a = 0; a < g.num_joint_actions(); ++a) {
        EXPECT_EQ(h.uncertainty(s, a).candidates(), g.uncertainty(s, a).candidates());
      }
    }
  }
}
