#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "fzs/membership.hpp"

namespace fzs {

enum class TNorm { min, product };

std::string to_string(TNorm t);

/// IF x_1 is A_1[antecedents[0]] AND ... THEN y is B[consequent].
struct Rule {
  std::vector<std::size_t> antecedents;
  std::size_t consequent = 0;

  friend bool operator==(const Rule&, const Rule&) = default;
};

/// Input variables, output variable, and the rules connecting them.
///
/// Construction checks arity and term indices. Conflicting rules (same
/// antecedents, different consequents) are representable so that
/// check_completeness() can report them; see find_conflicts().
class RuleBase {
 public:
  RuleBase(std::vector<LinguisticVariable> inputs, LinguisticVariable output,
           std::vector<Rule> rules, TNorm tnorm = TNorm::min);

  const std::vector<LinguisticVariable>& inputs() const noexcept { return inputs_; }
  const LinguisticVariable& output() const noexcept { return output_; }
  const std::vector<Rule>& rules() const noexcept { return rules_; }
  TNorm tnorm() const noexcept { return tnorm_; }

  /// Consequent of the first rule matching `antecedents`, or output().term_count().
  std::size_t lookup(std::span<const std::size_t> antecedents) const noexcept;

  /// "IF GU is H AND GT is H AND NT is H THEN Score is S"
  std::string describe(const Rule& r) const;

  friend bool operator==(const RuleBase&, const RuleBase&) = default;

 private:
  std::vector<LinguisticVariable> inputs_;
  LinguisticVariable output_;
  std::vector<Rule> rules_;
  TNorm tnorm_;
};

/// Pairs of rule indices (i < j) sharing antecedents with differing consequents.
std::vector<std::pair<std::size_t, std::size_t>> find_conflicts(const RuleBase& rb);

/// Uniform sample positions lo, lo + h, ..., hi.
struct SampleGrid {
  double lo = 0.0;
  double hi = 1.0;
  std::size_t count = 1001;

  double step() const noexcept { return (hi - lo) / static_cast<double>(count - 1); }
  double at(std::size_t i) const noexcept {
    // Pin the last sample to hi exactly.
    return i + 1 == count ? hi : lo + step() * static_cast<double>(i);
  }

  static SampleGrid over(const Universe& u, std::size_t count = 1001) {
    return {u.lo, u.hi, count};
  }
};

inline constexpr std::size_t kDefaultSamples = 1001;

using SampledCurve = std::vector<double>;

/// Output fuzzy set after max-aggregation of every clipped consequent.
struct AggregatedOutput {
  /// Null when built from raw curves.
  const LinguisticVariable* output = nullptr;
  SampleGrid grid;
  std::vector<double> membership;
  /// Per-rule firing strengths (diagnostics; empty for raw curves).
  std::vector<double> rule_strengths;
  /// Per-output-term clip level: the largest firing strength among rules with
  /// that consequent. Empty for raw curves.
  std::vector<double> term_levels;
};

/// Firing strength of `rule`: the t-norm over its antecedent degrees.
/// Throws ValidationError on arity mismatch.
double firing_strength(const Rule& rule, std::span<const MembershipVector> inputs,
                       TNorm tnorm = TNorm::min);

/// min(alpha, mu(y)) at every grid sample.
SampledCurve implicate(double alpha, const MembershipFunction& consequent, const SampleGrid& grid);

/// Pointwise max across `clipped`. Every curve must match the grid size.
AggregatedOutput aggregate(std::span<const SampledCurve> clipped, const SampleGrid& grid);

/// Literal per-rule route: implicate each rule's consequent at its strength,
/// then max-aggregate. Kept as the reference for aggregate_terms().
AggregatedOutput aggregate_rules(const RuleBase& rb, std::span<const double> strengths,
                                 const SampleGrid& grid);

/// Clip levels per output term from per-rule strengths (max over rules
/// sharing a consequent).
std::vector<double> term_levels(const RuleBase& rb, std::span<const double> strengths);

/// Grouped route: one clipped curve per output term. Produces exactly the
/// samples of aggregate_rules() because max/min commute over rules that share
/// a consequent.
AggregatedOutput aggregate_terms(const LinguisticVariable& output, std::vector<double> levels,
                                 const SampleGrid& grid);

/// Centroid of the aggregated set.
///
/// Integrates cell by cell over the sample grid. When the aggregate carries
/// its output variable and term levels, each cell is split at the analytic
/// kinks of the clipped consequents so the result is exact for
/// piecewise-linear shapes; otherwise the sampled curve is taken as linear
/// between samples. Throws NoRuleFiredError on an identically zero aggregate.
double defuzzify_centroid(const AggregatedOutput& agg);

struct Telemetry {
  double gu = 0.0;  ///< utilization, percent
  double gt = 0.0;  ///< temperature, degrees Celsius
  double nt = 0.0;  ///< target count
};

struct InferenceResult {
  double score = 0.0;
  std::vector<double> rule_strengths;
  std::size_t fired_count = 0;
  /// Per input: whether the crisp value was clamped to the universe.
  std::vector<bool> clamped;
};

/// Crisp inputs in the order of rb.inputs().
std::vector<double> input_values(const RuleBase& rb, const Telemetry& t);

/// fuzzify -> firing_strength -> implicate -> aggregate -> defuzzify_centroid.
/// Pure; throws NoRuleFiredError when no rule fires.
InferenceResult infer(const RuleBase& rb, const Telemetry& t,
                      std::size_t samples = kDefaultSamples);
InferenceResult infer(const RuleBase& rb, std::span<const double> inputs,
                      std::size_t samples = kDefaultSamples);

/// Same pipeline through aggregate_rules(); bit-identical to infer().
InferenceResult infer_reference(const RuleBase& rb, std::span<const double> inputs,
                                std::size_t samples = kDefaultSamples);

}  // namespace fzs
