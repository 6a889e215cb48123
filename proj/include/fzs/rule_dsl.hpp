#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "fzs/engine.hpp"

namespace fzs {

// Rule documents (.frb):
//
//   # comment
//   tnorm min
//   var GU range 0 100 unit % {
//     term L trap 0 0 30 50
//     term M tri 30 50 70
//     term H trap 50 70 100 100
//   }
//   rule: IF GU is H AND GT is H AND NT is H THEN Score is S
//
// The variable named after THEN is the output; every other declared variable
// is an input, in declaration order. Labels are case-sensitive and scoped per
// variable.

struct ParseOptions {
  /// Keep conflicting rules instead of rejecting the document (for reporting).
  bool allow_conflicts = false;
};

/// Throws SyntaxError (with line/column) or ValidationError.
RuleBase parse_rules(std::string_view text, ParseOptions options = {});

/// Canonical, byte-stable text. parse_rules(serialize_rules(rb)) == rb.
std::string serialize_rules(const RuleBase& rb);

struct CompletenessReport {
  struct Conflict {
    std::size_t first_rule;   ///< 0-based rule index
    std::size_t second_rule;  ///< 0-based rule index
  };

  std::size_t covered = 0;
  std::size_t total = 0;
  std::vector<Conflict> conflicts;
  /// Antecedent combinations (term index per input) with no rule.
  std::vector<std::vector<std::size_t>> gaps;
};

CompletenessReport check_completeness(const RuleBase& rb);

/// "GU is L AND GT is H AND NT is M"
std::string describe_antecedents(const RuleBase& rb, const std::vector<std::size_t>& antecedents);

/// Default three-term partitions used by the built-in rule base.
LinguisticVariable default_utilization_variable();
LinguisticVariable default_temperature_variable();
LinguisticVariable default_targets_variable();
LinguisticVariable default_score_variable();

/// The 27-rule utilization/temperature/targets table over the default variables.
const RuleBase& builtin_rulebase();

/// Document text of builtin_rulebase().
std::string_view builtin_rules_text();

}  // namespace fzs
