#include "fzs/engine.hpp"

#include <algorithm>
#include <cmath>

#include "fzs/error.hpp"

namespace fzs {

std::string to_string(TNorm t) { return t == TNorm::min ? "min" : "product"; }

RuleBase::RuleBase(std::vector<LinguisticVariable> inputs, LinguisticVariable output,
                   std::vector<Rule> rules, TNorm tnorm)
    : inputs_(std::move(inputs)), output_(std::move(output)), rules_(std::move(rules)), tnorm_(tnorm) {
  if (inputs_.empty()) throw ValidationError("rule base needs at least one input variable");
  for (std::size_t i = 0; i < inputs_.size(); ++i) {
    if (inputs_[i].name() == output_.name()) {
      throw ValidationError("variable " + output_.name() + " is both input and output");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (inputs_[i].name() == inputs_[j].name()) {
        throw ValidationError("duplicate variable " + inputs_[i].name());
      }
    }
  }
  for (std::size_t r = 0; r < rules_.size(); ++r) {
    const auto& rule = rules_[r];
    if (rule.antecedents.size() != inputs_.size()) {
      throw ValidationError("rule " + std::to_string(r + 1) + ": expected " +
                            std::to_string(inputs_.size()) + " antecedents, got " +
                            std::to_string(rule.antecedents.size()));
    }
    for (std::size_t i = 0; i < inputs_.size(); ++i) {
      if (rule.antecedents[i] >= inputs_[i].term_count()) {
        throw ValidationError("rule " + std::to_string(r + 1) + ": term index out of range for " +
                              inputs_[i].name());
      }
    }
    if (rule.consequent >= output_.term_count()) {
      throw ValidationError("rule " + std::to_string(r + 1) + ": term index out of range for " +
                            output_.name());
    }
  }
}

std::size_t RuleBase::lookup(std::span<const std::size_t> antecedents) const noexcept {
  for (const auto& r : rules_) {
    if (std::equal(r.antecedents.begin(), r.antecedents.end(), antecedents.begin(),
                   antecedents.end())) {
      return r.consequent;
    }
  }
  return output_.term_count();
}

std::string RuleBase::describe(const Rule& r) const {
  std::string s = "IF ";
  for (std::size_t i = 0; i < inputs_.size(); ++i) {
    if (i) s += " AND ";
    s += inputs_[i].name() + " is " + inputs_[i].terms()[r.antecedents[i]].label;
  }
  s += " THEN " + output_.name() + " is " + output_.terms()[r.consequent].label;
  return s;
}

std::vector<std::pair<std::size_t, std::size_t>> find_conflicts(const RuleBase& rb) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  const auto& rules = rb.rules();
  for (std::size_t j = 0; j < rules.size(); ++j) {
    for (std::size_t i = 0; i < j; ++i) {
      if (rules[i].antecedents == rules[j].antecedents &&
          rules[i].consequent != rules[j].consequent) {
        out.emplace_back(i, j);
      }
    }
  }
  return out;
}

double firing_strength(const Rule& rule, std::span<const MembershipVector> inputs, TNorm tnorm) {
  if (rule.antecedents.size() != inputs.size()) {
    throw ValidationError("firing_strength: rule has " + std::to_string(rule.antecedents.size()) +
                          " antecedents but " + std::to_string(inputs.size()) +
                          " membership vectors were given");
  }
  double alpha = 1.0;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const auto& deg = inputs[i].degrees;
    if (rule.antecedents[i] >= deg.size()) {
      throw ValidationError("firing_strength: antecedent term index out of range");
    }
    const double d = deg[rule.antecedents[i]];
    alpha = tnorm == TNorm::min ? std::min(alpha, d) : alpha * d;
  }
  return alpha;
}

SampledCurve implicate(double alpha, const MembershipFunction& consequent, const SampleGrid& grid) {
  SampledCurve out(grid.count);
  for (std::size_t i = 0; i < grid.count; ++i) out[i] = std::min(alpha, consequent(grid.at(i)));
  return out;
}

AggregatedOutput aggregate(std::span<const SampledCurve> clipped, const SampleGrid& grid) {
  AggregatedOutput agg;
  agg.grid = grid;
  agg.membership.assign(grid.count, 0.0);
  for (const auto& curve : clipped) {
    if (curve.size() != grid.count) {
      throw ValidationError("aggregate: curve has " + std::to_string(curve.size()) +
                            " samples, grid has " + std::to_string(grid.count));
    }
    for (std::size_t i = 0; i < grid.count; ++i) {
      agg.membership[i] = std::max(agg.membership[i], curve[i]);
    }
  }
  return agg;
}

std::vector<double> term_levels(const RuleBase& rb, std::span<const double> strengths) {
  std::vector<double> levels(rb.output().term_count(), 0.0);
  for (std::size_t r = 0; r < rb.rules().size(); ++r) {
    auto& l = levels[rb.rules()[r].consequent];
    l = std::max(l, strengths[r]);
  }
  return levels;
}

AggregatedOutput aggregate_rules(const RuleBase& rb, std::span<const double> strengths,
                                 const SampleGrid& grid) {
  if (strengths.size() != rb.rules().size()) {
    throw ValidationError("aggregate_rules: one strength per rule required");
  }
  std::vector<SampledCurve> clipped;
  clipped.reserve(strengths.size());
  for (std::size_t r = 0; r < strengths.size(); ++r) {
    clipped.push_back(implicate(strengths[r], rb.output().terms()[rb.rules()[r].consequent].mf, grid));
  }
  auto agg = aggregate(clipped, grid);
  agg.output = &rb.output();
  agg.rule_strengths.assign(strengths.begin(), strengths.end());
  agg.term_levels = term_levels(rb, strengths);
  return agg;
}

AggregatedOutput aggregate_terms(const LinguisticVariable& output, std::vector<double> levels,
                                 const SampleGrid& grid) {
  if (levels.size() != output.term_count()) {
    throw ValidationError("aggregate_terms: one level per output term required");
  }
  AggregatedOutput agg;
  agg.output = &output;
  agg.grid = grid;
  agg.membership.assign(grid.count, 0.0);
  for (std::size_t t = 0; t < levels.size(); ++t) {
    const double level = levels[t];
    if (level <= 0.0) continue;
    const auto& mf = output.terms()[t].mf;
    for (std::size_t i = 0; i < grid.count; ++i) {
      agg.membership[i] = std::max(agg.membership[i], std::min(level, mf(grid.at(i))));
    }
  }
  agg.term_levels = std::move(levels);
  return agg;
}

namespace {

struct Line {
  double slope, intercept;  // mu = slope * y + intercept
};

// Sloped pieces of a shape (rising a..b, falling c..d).
std::vector<Line> sloped_pieces(const MembershipFunction& mf) {
  const auto [a, b, c, d] = mf.corners();
  std::vector<Line> out;
  if (a < b) out.push_back({1.0 / (b - a), -a / (b - a)});
  if (c < d) out.push_back({-1.0 / (d - c), d / (d - c)});
  return out;
}

// Abscissae where the clipped-and-maxed aggregate can change slope.
std::vector<double> kink_points(const LinguisticVariable& output, std::span<const double> levels) {
  std::vector<double> pts;
  std::vector<std::size_t> active;
  for (std::size_t t = 0; t < levels.size(); ++t) {
    if (levels[t] > 0.0) active.push_back(t);
  }
  for (const auto t : active) {
    const auto& mf = output.terms()[t].mf;
    for (const double p : mf.corners()) pts.push_back(p);
    const auto pieces = sloped_pieces(mf);
    for (const auto& piece : pieces) {
      for (const auto s : active) pts.push_back((levels[s] - piece.intercept) / piece.slope);
      for (const auto u : active) {
        if (u <= t) continue;
        for (const auto& other : sloped_pieces(output.terms()[u].mf)) {
          if (other.slope != piece.slope) {
            pts.push_back((other.intercept - piece.intercept) / (piece.slope - other.slope));
          }
        }
      }
    }
  }
  const auto& u = output.universe();
  std::erase_if(pts, [&](double p) { return !(p > u.lo && p < u.hi); });
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

double aggregate_at(const LinguisticVariable& output, std::span<const double> levels, double y) {
  double m = 0.0;
  for (std::size_t t = 0; t < levels.size(); ++t) {
    if (levels[t] > 0.0) m = std::max(m, std::min(levels[t], output.terms()[t].mf(y)));
  }
  return m;
}

struct Moments {
  double area = 0.0;
  double first = 0.0;

  // Exact for mu linear on [y0, y1].
  void add(double y0, double f0, double y1, double f1) {
    const double dy = y1 - y0;
    area += 0.5 * dy * (f0 + f1);
    first += dy * (y0 * (2.0 * f0 + f1) + y1 * (f0 + 2.0 * f1)) / 6.0;
  }
};

}  // namespace

double defuzzify_centroid(const AggregatedOutput& agg) {
  const auto& grid = agg.grid;
  if (grid.count < 2 || agg.membership.size() != grid.count) {
    throw ValidationError("defuzzify_centroid: aggregate needs at least two samples");
  }
  const bool exact = agg.output != nullptr && agg.term_levels.size() == agg.output->term_count();
  std::vector<double> kinks;
  if (exact) kinks = kink_points(*agg.output, agg.term_levels);

  Moments m;
  auto k = kinks.begin();
  for (std::size_t i = 0; i + 1 < grid.count; ++i) {
    double y0 = grid.at(i);
    double f0 = agg.membership[i];
    const double y1 = grid.at(i + 1);
    while (k != kinks.end() && *k <= y0) ++k;
    for (; k != kinks.end() && *k < y1; ++k) {
      const double fk = aggregate_at(*agg.output, agg.term_levels, *k);
      m.add(y0, f0, *k, fk);
      y0 = *k;
      f0 = fk;
    }
    m.add(y0, f0, y1, agg.membership[i + 1]);
  }
  if (!(m.area > 0.0)) throw NoRuleFiredError();
  return std::clamp(m.first / m.area, grid.lo, grid.hi);
}

std::vector<double> input_values(const RuleBase& rb, const Telemetry& t) {
  if (rb.inputs().size() != 3) {
    throw ValidationError("telemetry drives exactly three inputs (utilization, temperature, "
                          "targets); rule base declares " +
                          std::to_string(rb.inputs().size()));
  }
  return {t.gu, t.gt, t.nt};
}

namespace {

std::vector<MembershipVector> fuzzify_all(const RuleBase& rb, std::span<const double> inputs,
                                          InferenceResult& res) {
  if (inputs.size() != rb.inputs().size()) {
    throw ValidationError("infer: expected " + std::to_string(rb.inputs().size()) +
                          " inputs, got " + std::to_string(inputs.size()));
  }
  std::vector<MembershipVector> mv;
  mv.reserve(inputs.size());
  res.clamped.reserve(inputs.size());
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    mv.push_back(fuzzify(rb.inputs()[i], inputs[i]));
    res.clamped.push_back(mv.back().clamped);
  }
  return mv;
}

void fire_all(const RuleBase& rb, std::span<const MembershipVector> mv, InferenceResult& res) {
  res.rule_strengths.reserve(rb.rules().size());
  for (const auto& rule : rb.rules()) {
    const double a = firing_strength(rule, mv, rb.tnorm());
    res.rule_strengths.push_back(a);
    if (a > 0.0) ++res.fired_count;
  }
}

}  // namespace

InferenceResult infer(const RuleBase& rb, std::span<const double> inputs, std::size_t samples) {
  InferenceResult res;
  const auto mv = fuzzify_all(rb, inputs, res);
  fire_all(rb, mv, res);
  if (res.fired_count == 0) throw NoRuleFiredError();
  const auto agg = aggregate_terms(rb.output(), term_levels(rb, res.rule_strengths),
                                   SampleGrid::over(rb.output().universe(), samples));
  res.score = defuzzify_centroid(agg);
  return res;
}

InferenceResult infer(const RuleBase& rb, const Telemetry& t, std::size_t samples) {
  const auto in = input_values(rb, t);
  return infer(rb, in, samples);
}

InferenceResult infer_reference(const RuleBase& rb, std::span<const double> inputs,
                                std::size_t samples) {
  InferenceResult res;
  const auto mv = fuzzify_all(rb, inputs, res);
  fire_all(rb, mv, res);
  const auto agg =
      aggregate_rules(rb, res.rule_strengths, SampleGrid::over(rb.output().universe(), samples));
  res.score = defuzzify_centroid(agg);
  return res;
}

}  // namespace fzs
