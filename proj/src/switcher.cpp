#include "fzs/switcher.hpp"

#include <cmath>
#include <limits>

#include "fzs/error.hpp"

namespace fzs {

ModelId select_model(double score, const LinguisticVariable& output,
                     const std::vector<std::string>& roster) {
  if (roster.size() != output.term_count()) {
    throw ValidationError("roster has " + std::to_string(roster.size()) + " models but " +
                          output.name() + " has " + std::to_string(output.term_count()) +
                          " terms");
  }
  const double y = output.universe().clamp(score);
  std::size_t best = 0;
  double best_mu = -1.0;
  for (std::size_t t = 0; t < output.term_count(); ++t) {
    const double mu = output.terms()[t].mf(y);
    if (mu > best_mu) {  // strict: ties keep the smaller index
      best = t;
      best_mu = mu;
    }
  }
  return {best, roster[best]};
}

std::string to_string(CounterMode m) {
  return m == CounterMode::same_candidate ? "same_candidate" : "any_difference";
}

CounterMode parse_counter_mode(const std::string& s) {
  if (s == "same_candidate") return CounterMode::same_candidate;
  if (s == "any_difference") return CounterMode::any_difference;
  throw ValidationError("unknown counter mode '" + s + "'");
}

SwitcherState make_switcher(std::vector<std::string> roster, SwitcherConfig config) {
  if (roster.empty()) throw ValidationError("model roster is empty");
  if (config.threshold_k == 0) throw ValidationError("threshold_k must be positive");
  if (config.initial_model >= roster.size()) {
    throw ValidationError("initial model index outside the roster");
  }
  SwitcherState s;
  s.roster = std::move(roster);
  s.config = config;
  s.prev_model = config.initial_model;
  return s;
}

SwitcherState reset(const SwitcherState& s) { return make_switcher(s.roster, s.config); }

StepResult advance(const SwitcherState& s, std::size_t proposal, double score) {
  StepResult r{s, {}};
  auto& n = r.state;
  auto& d = r.decision;
  d.frame_index = s.frame;
  d.model_used = s.model(s.prev_model);
  d.candidate_model = s.model(proposal);
  d.score = score;
  ++n.frame;

  if (proposal == n.prev_model) {
    n.streak = 0;
    n.candidate.reset();
    return r;
  }
  if (n.config.counter_mode == CounterMode::same_candidate && n.candidate != proposal) {
    n.streak = 0;
  }
  n.candidate = proposal;
  ++n.streak;
  if (n.streak >= n.config.threshold_k) {
    n.prev_model = proposal;
    n.streak = 0;
    n.candidate.reset();
    d.switched = true;
  }
  return r;
}

StepResult step(const SwitcherState& s, const Telemetry& t, const RuleBase& rb) {
  double score = 0.0;
  try {
    score = infer(rb, t, s.config.samples).score;
  } catch (const NoRuleFiredError&) {
    StepResult r{s, {}};
    r.decision.frame_index = s.frame;
    r.decision.model_used = s.model(s.prev_model);
    r.decision.candidate_model = r.decision.model_used;
    r.decision.score = std::numeric_limits<double>::quiet_NaN();
    r.decision.inference_failed = true;
    ++r.state.frame;
    return r;
  }
  return advance(s, select_model(score, rb.output(), s.roster).index, score);
}

}  // namespace fzs
