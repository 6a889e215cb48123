#include "fzs/device_sim.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <set>

#include "fzs/error.hpp"

namespace fzs {

PiecewiseLinear::PiecewiseLinear(std::vector<std::pair<double, double>> knots)
    : knots_(std::move(knots)) {
  if (knots_.empty()) throw ValidationError("piecewise-linear curve needs at least one knot");
  for (std::size_t i = 0; i < knots_.size(); ++i) {
    if (!std::isfinite(knots_[i].first) || !std::isfinite(knots_[i].second)) {
      throw ValidationError("piecewise-linear knot is not finite");
    }
    if (i && !(knots_[i].first > knots_[i - 1].first)) {
      throw ValidationError("piecewise-linear knots must have strictly increasing x");
    }
  }
}

double PiecewiseLinear::operator()(double x) const noexcept {
  if (x <= knots_.front().first) return knots_.front().second;
  if (x >= knots_.back().first) return knots_.back().second;
  const auto hi = std::upper_bound(knots_.begin(), knots_.end(), x,
                                   [](double v, const auto& k) { return v < k.first; });
  const auto lo = hi - 1;
  const double t = (x - lo->first) / (hi->first - lo->first);
  return lo->second + t * (hi->second - lo->second);
}

void validate(const Scenario& sc) {
  if (sc.models.empty()) throw ValidationError("scenario: model roster is empty");
  if (sc.trace.empty()) throw ValidationError("scenario: trace is empty");
  std::set<std::string> labels;
  for (const auto& m : sc.models) {
    if (!labels.insert(m.label).second) {
      throw ValidationError("scenario: duplicate model label " + m.label);
    }
    if (!(m.base_load >= 0.0)) throw ValidationError("scenario: model " + m.label + " base_load < 0");
    if (!std::isfinite(m.per_target_load)) {
      throw ValidationError("scenario: model " + m.label + " per_target_load is not finite");
    }
    for (const auto& [x, r] : m.recall.knots()) {
      if (r < 0.0 || r > 1.0) {
        throw ValidationError("scenario: model " + m.label + " recall outside [0,1]");
      }
    }
  }
  // Both curves are linear between the union of their knots, so checking
  // every knot of either curve suffices.
  for (std::size_t i = 1; i < sc.models.size(); ++i) {
    const auto& small = sc.models[i - 1];
    const auto& large = sc.models[i];
    std::vector<double> xs;
    for (const auto& k : small.recall.knots()) xs.push_back(k.first);
    for (const auto& k : large.recall.knots()) xs.push_back(k.first);
    for (const double x : xs) {
      if (large.recall(x) < small.recall(x)) {
        throw ValidationError("scenario: recall dominance violated: model " + large.label +
                              " recalls less than " + small.label + " at nt=" +
                              std::to_string(x));
      }
    }
  }
  const auto& tm = sc.thermal;
  if (!(tm.alpha > 0.0 && tm.alpha <= 1.0)) {
    throw ValidationError("scenario: thermal alpha must lie in (0,1]");
  }
  if (!(tm.noise_sigma_c >= 0.0)) throw ValidationError("scenario: thermal noise_sigma_c < 0");
  if (!std::isfinite(tm.ambient_c) || !std::isfinite(tm.heat_gain_c_per_gu)) {
    throw ValidationError("scenario: thermal constants must be finite");
  }
  if (!(sc.gu_noise_sigma >= 0.0)) throw ValidationError("scenario: gu_noise_sigma < 0");
  for (std::size_t f = 0; f < sc.trace.size(); ++f) {
    if (sc.trace[f] < 0) {
      throw ValidationError("scenario: negative target count at frame " + std::to_string(f));
    }
  }
  if (sc.controller.threshold_k == 0) throw ValidationError("scenario: threshold_k must be positive");
  if (sc.controller.initial_model >= sc.models.size()) {
    throw ValidationError("scenario: initial_model outside the roster");
  }
  if (sc.stochastic() && !sc.rng_seed) {
    throw ValidationError("scenario: noise is enabled but no rng_seed is set");
  }
}

std::string to_string(Arm a) {
  switch (a) {
    case Arm::adaptive: return "adaptive";
    case Arm::small: return "small";
    case Arm::medium: return "medium";
    case Arm::large: return "large";
  }
  return "adaptive";
}

Arm parse_arm(const std::string& s) {
  for (const Arm a : kAllArms) {
    if (to_string(a) == s) return a;
  }
  throw ValidationError("unknown arm '" + s + "' (expected adaptive, small, medium, large)");
}

std::size_t pinned_model(Arm a, std::size_t roster_size) {
  switch (a) {
    case Arm::small: return 0;
    case Arm::medium: return roster_size / 2;
    case Arm::large: return roster_size - 1;
    case Arm::adaptive: break;
  }
  throw ValidationError("adaptive arm pins no model");
}

int observe_targets(const ModelProfile& profile, int nt_true, Rng* rng) {
  if (nt_true <= 0) return 0;
  const double p = std::clamp(profile.recall(nt_true), 0.0, 1.0);
  if (rng) return std::binomial_distribution<int>(nt_true, p)(*rng);
  // Absorb representation error such as 0.7 * 30 = 20.999999999999996.
  const int n = static_cast<int>(std::floor(nt_true * p + 1e-9));
  return std::min(n, nt_true);
}

double update_utilization(const ModelProfile& profile, int nt_observed, double noise_sigma, Rng* rng) {
  double gu = profile.base_load + profile.per_target_load * nt_observed;
  if (rng && noise_sigma > 0.0) gu += std::normal_distribution<double>(0.0, noise_sigma)(*rng);
  return std::clamp(gu, 0.0, 100.0);
}

double update_temperature(const ThermalModel& tm, double prev_c, double gu, Rng* rng) {
  const double target = tm.ambient_c + tm.heat_gain_c_per_gu * gu;
  double t = prev_c + tm.alpha * (target - prev_c);
  if (rng && tm.noise_sigma_c > 0.0) {
    t += std::normal_distribution<double>(0.0, tm.noise_sigma_c)(*rng);
  }
  return t;
}

RunLog simulate(const Scenario& sc, const RuleBase& rb, Arm arm) {
  validate(sc);
  const std::size_t n_models = sc.models.size();
  const bool adaptive = arm == Arm::adaptive && n_models > 1;
  const std::size_t pinned = arm == Arm::adaptive ? sc.controller.initial_model
                                                  : pinned_model(arm, n_models);

  std::vector<std::string> roster;
  for (const auto& m : sc.models) roster.push_back(m.label);
  if (adaptive && roster.size() != rb.output().term_count()) {
    throw ValidationError("scenario roster has " + std::to_string(roster.size()) +
                          " models but the rule output has " +
                          std::to_string(rb.output().term_count()) + " terms");
  }
  auto state = make_switcher(roster, sc.controller);

  Rng rng(sc.rng_seed.value_or(0));
  Rng* noise = sc.stochastic() ? &rng : nullptr;
  Rng* detect = sc.stochastic_detection ? &rng : nullptr;

  RunLog log;
  log.scenario = sc.name;
  log.arm = to_string(arm);
  log.seed = sc.rng_seed;
  log.records.reserve(sc.trace.size());

  double temp = sc.initial_temp_c.value_or(sc.thermal.ambient_c);
  for (std::size_t f = 0; f < sc.trace.size(); ++f) {
    const std::size_t current = adaptive ? state.prev_model : pinned;
    const auto& profile = sc.models[current];

    RunRecord rec;
    rec.frame = f;
    rec.model = profile.label;
    rec.nt_true = sc.trace[f];
    rec.nt_obs = observe_targets(profile, rec.nt_true, detect);
    rec.gu = update_utilization(profile, rec.nt_obs, sc.gu_noise_sigma, noise);
    temp = update_temperature(sc.thermal, temp, rec.gu, noise);
    rec.gt = temp;

    const Telemetry t{rec.gu, rec.gt,
                      static_cast<double>(sc.target_source == TargetSource::observed ? rec.nt_obs
                                                                                      : rec.nt_true)};
    if (adaptive) {
      auto r = step(state, t, rb);
      state = std::move(r.state);
      rec.score = r.decision.score;
      rec.switched = r.decision.switched;
    } else {
      try {
        rec.score = infer(rb, t, sc.controller.samples).score;
      } catch (const NoRuleFiredError&) {
        rec.score = std::numeric_limits<double>::quiet_NaN();
      }
    }
    log.records.push_back(std::move(rec));
  }
  return log;
}

std::vector<RunLog> simulate_arms(const Scenario& sc, const RuleBase& rb, std::span<const Arm> arms) {
  validate(sc);
  std::vector<RunLog> out(arms.size());
  const auto n = static_cast<std::ptrdiff_t>(arms.size());
  std::exception_ptr err;
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      out[i] = simulate(sc, rb, arms[i]);
    } catch (...) {
#pragma omp critical(fzs_simulate_arms)
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
  return out;
}

std::vector<RunLog> simulate_arms_serial(const Scenario& sc, const RuleBase& rb,
                                         std::span<const Arm> arms) {
  std::vector<RunLog> out;
  out.reserve(arms.size());
  for (const Arm a : arms) out.push_back(simulate(sc, rb, a));
  return out;
}

}  // namespace fzs
