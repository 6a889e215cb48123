#include <cmath>
#include <random>

#include "doctest.h"
#include "fzs/error.hpp"
#include "fzs/rule_dsl.hpp"
#include "fzs/switcher.hpp"

using fzs::CounterMode;
using fzs::SwitcherConfig;

namespace {

const std::vector<std::string> kRoster{"small", "medium", "large"};

struct Run {
  std::vector<std::size_t> used;
  std::vector<bool> switched;
};

Run feed(const std::vector<std::size_t>& proposals, SwitcherConfig cfg = {}) {
  auto s = fzs::make_switcher(kRoster, cfg);
  Run run;
  for (const auto p : proposals) {
    auto r = fzs::advance(s, p, 0.0);
    run.used.push_back(r.decision.model_used.index);
    run.switched.push_back(r.decision.switched);
    s = std::move(r.state);
  }
  return run;
}

}  // namespace

TEST_CASE("model selection by maximal output membership") {
  const auto score = fzs::default_score_variable();
  CHECK(fzs::select_model(10, score, kRoster).label == "small");
  CHECK(fzs::select_model(50, score, kRoster).label == "medium");
  CHECK(fzs::select_model(90, score, kRoster).label == "large");
  // S(40) = 0.25, M(40) = 0.5.
  CHECK(fzs::select_model(40, score, kRoster).index == 1);
  // M(65) = 0.25, L(65) = 0.5.
  CHECK(fzs::select_model(65, score, kRoster).index == 2);
  CHECK_THROWS_AS(fzs::select_model(50, score, {"a", "b"}), fzs::ValidationError);
}

TEST_CASE("ties go to the smaller model") {
  using fzs::MembershipFunction;
  const fzs::LinguisticVariable out("Y", {0, 10, ""},
                                    {{"a", MembershipFunction::trapezoid(0, 0, 4, 6)},
                                     {"b", MembershipFunction::trapezoid(4, 6, 10, 10)}});
  CHECK(fzs::select_model(5, out, {"x", "y"}).index == 0);
  CHECK(fzs::select_model(5.01, out, {"x", "y"}).index == 1);
}

TEST_CASE("five consecutive proposals commit a switch with K = 5") {
  // Start on small (0), propose large (2) every frame.
  const auto run = feed({2, 2, 2, 2, 2, 2, 2});
  CHECK(run.switched == std::vector<bool>{false, false, false, false, true, false, false});
  // The chosen model runs from the following frame.
  CHECK(run.used == std::vector<std::size_t>{0, 0, 0, 0, 0, 2, 2});
}

TEST_CASE("an interruption resets the streak") {
  // Proposal sequence L,L,L,M,L from small: never five of a kind.
  const auto run = feed({2, 2, 2, 1, 2});
  CHECK(std::none_of(run.switched.begin(), run.switched.end(), [](bool b) { return b; }));
  // Returning to the current model also resets.
  const auto back = feed({2, 2, 2, 2, 0, 2, 2, 2, 2});
  CHECK(std::none_of(back.switched.begin(), back.switched.end(), [](bool b) { return b; }));
}

TEST_CASE("any_difference counts every disagreement and adopts the latest proposal") {
  SwitcherConfig cfg;
  cfg.counter_mode = CounterMode::any_difference;
  const auto run = feed({2, 2, 2, 1, 1}, cfg);
  CHECK(run.switched.back());
  auto s = fzs::make_switcher(kRoster, cfg);
  for (const auto p : {2, 2, 2, 1, 1}) s = fzs::advance(s, p, 0.0).state;
  CHECK(s.prev_model == 1);
}

TEST_CASE("K = 1 follows the controller with one frame of lag") {
  SwitcherConfig cfg;
  cfg.threshold_k = 1;
  const auto run = feed({1, 2, 2, 0}, cfg);
  CHECK(run.switched == std::vector<bool>{true, true, false, true});
  CHECK(run.used == std::vector<std::size_t>{0, 1, 2, 2});
}

TEST_CASE("switcher construction is validated") {
  CHECK_THROWS_AS(fzs::make_switcher({}, {}), fzs::ValidationError);
  SwitcherConfig zero;
  zero.threshold_k = 0;
  CHECK_THROWS_AS(fzs::make_switcher(kRoster, zero), fzs::ValidationError);
  SwitcherConfig outside;
  outside.initial_model = 3;
  CHECK_THROWS_AS(fzs::make_switcher(kRoster, outside), fzs::ValidationError);
  CHECK(fzs::parse_counter_mode("any_difference") == CounterMode::any_difference);
  CHECK_THROWS_AS(fzs::parse_counter_mode("sometimes"), fzs::ValidationError);
}

TEST_CASE("reset clears history and keeps configuration") {
  SwitcherConfig cfg;
  cfg.threshold_k = 3;
  cfg.initial_model = 1;
  auto s = fzs::make_switcher(kRoster, cfg);
  for (int i = 0; i < 5; ++i) s = fzs::advance(s, 2, 0.0).state;
  s = fzs::advance(s, 0, 0.0).state;
  REQUIRE(s.streak == 1);
  const auto r = fzs::reset(s);
  CHECK(r.prev_model == 1);
  CHECK(r.streak == 0);
  CHECK_FALSE(r.candidate.has_value());
  CHECK(r.frame == 0);
  CHECK(r.config.threshold_k == 3);
  CHECK(r.roster == kRoster);
}

TEST_CASE("step holds the model and leaves the state alone when no rule fires") {
  const auto& base = fzs::builtin_rulebase();
  const fzs::RuleBase one(base.inputs(), base.output(), {fzs::Rule{{2, 2, 2}, 0}});
  auto s = fzs::make_switcher(kRoster, {});
  s = fzs::advance(s, 2, 0.0).state;
  const auto r = fzs::step(s, fzs::Telemetry{10, 30, 10}, one);
  CHECK(r.decision.inference_failed);
  CHECK(std::isnan(r.decision.score));
  CHECK_FALSE(r.decision.switched);
  CHECK(r.decision.model_used.index == 0);
  CHECK(r.state.prev_model == s.prev_model);
  CHECK(r.state.streak == s.streak);
  CHECK(r.state.candidate == s.candidate);
  CHECK(r.state.frame == s.frame + 1);
}

TEST_CASE("step with the builtin rules switches to large after K low-load frames") {
  const auto& rb = fzs::builtin_rulebase();
  auto s = fzs::make_switcher(kRoster, {});
  std::size_t switches = 0;
  for (int i = 0; i < 5; ++i) {
    auto r = fzs::step(s, fzs::Telemetry{10, 30, 150}, rb);
    CHECK(r.decision.candidate_model.label == "large");
    switches += r.decision.switched;
    s = std::move(r.state);
  }
  CHECK(switches == 1);
  CHECK(s.model(s.prev_model).label == "large");
}

TEST_CASE("switch properties over random proposal streams") {
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<std::size_t> pick(0, 2), kdist(1, 8);
  for (int trial = 0; trial < 300; ++trial) {
    SwitcherConfig cfg;
    cfg.threshold_k = kdist(rng);
    std::vector<std::size_t> proposals(400);
    // Sticky proposals so streaks of length K actually occur.
    std::size_t cur = pick(rng);
    for (auto& p : proposals) {
      if (pick(rng) == 0) cur = pick(rng);
      p = cur;
    }
    const auto run = feed(proposals, cfg);
    const std::size_t k = cfg.threshold_k;
    std::size_t count = 0;
    std::size_t last_switch = 0;
    bool any = false;
    for (std::size_t t = 0; t < proposals.size(); ++t) {
      if (!run.switched[t]) continue;
      ++count;
      // The last K proposals agree and differ from the model in use.
      REQUIRE(t + 1 >= k);
      for (std::size_t j = t + 1 - k; j <= t; ++j) {
        CHECK(proposals[j] == proposals[t]);
        CHECK(run.used[j] != proposals[t]);
      }
      if (t + 1 < proposals.size()) CHECK(run.used[t + 1] == proposals[t]);
      if (any) CHECK(t - last_switch >= k);
      last_switch = t;
      any = true;
    }
    CHECK(count <= proposals.size() / k);
  }
}
