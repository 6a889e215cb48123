#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "fzs/engine.hpp"

namespace fzs {

/// Position in a capacity-ordered model roster (0 = smallest).
struct ModelId {
  std::size_t index = 0;
  std::string label;

  friend bool operator==(const ModelId& a, const ModelId& b) { return a.index == b.index; }
};

/// Output term with maximal membership at `score`, mapped positionally onto
/// the roster. Ties go to the smaller model. `roster` must have one entry per
/// output term.
ModelId select_model(double score, const LinguisticVariable& output,
                     const std::vector<std::string>& roster);

enum class CounterMode {
  /// The streak counts consecutive frames proposing the same new model.
  same_candidate,
  /// The streak counts any frame whose proposal differs from the current
  /// model; a switch adopts the latest proposal.
  any_difference,
};

std::string to_string(CounterMode m);
CounterMode parse_counter_mode(const std::string& s);

struct SwitcherConfig {
  std::size_t threshold_k = 5;
  CounterMode counter_mode = CounterMode::same_candidate;
  std::size_t initial_model = 0;
  std::size_t samples = kDefaultSamples;
};

/// Per-stream switching state.
struct SwitcherState {
  std::vector<std::string> roster;
  SwitcherConfig config;
  std::size_t prev_model = 0;
  std::optional<std::size_t> candidate;
  std::size_t streak = 0;
  std::size_t frame = 0;

  ModelId model(std::size_t index) const { return {index, roster.at(index)}; }
};

/// Initial state over `roster`. Throws ValidationError on an empty roster,
/// K == 0, or an initial model outside the roster.
SwitcherState make_switcher(std::vector<std::string> roster, SwitcherConfig config = {});

/// History cleared; roster and configuration kept.
SwitcherState reset(const SwitcherState& s);

struct Decision {
  std::size_t frame_index = 0;
  /// Model running this frame (the state's model on entry).
  ModelId model_used;
  /// Model proposed by the controller for this frame.
  ModelId candidate_model;
  /// NaN when no rule fired.
  double score = 0.0;
  /// A switch was committed; the new model runs from the next frame.
  bool switched = false;
  bool inference_failed = false;
};

struct StepResult {
  SwitcherState state;
  Decision decision;
};

/// One frame of adaptive selection: infer, select, update the streak, and
/// commit a switch once the streak reaches K. When no rule fires the current
/// model is held and the state is left untouched.
StepResult step(const SwitcherState& s, const Telemetry& t, const RuleBase& rb);

/// Streak update alone, for a proposal computed elsewhere.
StepResult advance(const SwitcherState& s, std::size_t proposal, double score);

}  // namespace fzs
