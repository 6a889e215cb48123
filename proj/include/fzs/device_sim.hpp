#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fzs/engine.hpp"
#include "fzs/switcher.hpp"

namespace fzs {

/// Piecewise-linear y(x) through sorted knots, held constant past either end.
class PiecewiseLinear {
 public:
  PiecewiseLinear() = default;
  /// Throws ValidationError unless knots are nonempty with strictly increasing x.
  explicit PiecewiseLinear(std::vector<std::pair<double, double>> knots);

  double operator()(double x) const noexcept;
  const std::vector<std::pair<double, double>>& knots() const noexcept { return knots_; }

 private:
  std::vector<std::pair<double, double>> knots_{{0.0, 1.0}};
};

/// Parametric stand-in for one inference model.
struct ModelProfile {
  std::string label;
  double base_load = 0.0;        ///< utilization percent while active
  double per_target_load = 0.0;  ///< utilization percent per observed target
  PiecewiseLinear recall;        ///< true target count -> detection recall
  double latency_ms = 0.0;       ///< reporting only
};

/// First-order lag toward ambient + gain * utilization.
struct ThermalModel {
  double ambient_c = 35.0;
  double heat_gain_c_per_gu = 0.5;
  double alpha = 0.01;  ///< per-frame smoothing, in (0, 1]
  double noise_sigma_c = 0.0;
};

/// Which target count feeds the controller.
enum class TargetSource { observed, truth };

struct Scenario {
  std::string name;
  std::vector<ModelProfile> models;  ///< capacity-ordered, smallest first
  ThermalModel thermal;
  std::vector<int> trace;            ///< true target count per frame
  SwitcherConfig controller;
  TargetSource target_source = TargetSource::observed;
  std::optional<std::uint64_t> rng_seed;
  double gu_noise_sigma = 0.0;
  /// Draw detections from a binomial instead of flooring the expectation.
  bool stochastic_detection = false;
  std::optional<double> initial_temp_c;
  /// Rule document; empty means the built-in table.
  std::string rules_path;

  bool stochastic() const noexcept {
    return stochastic_detection || gu_noise_sigma > 0.0 || thermal.noise_sigma_c > 0.0;
  }
};

/// Throws ValidationError naming the first violated invariant.
void validate(const Scenario& sc);

/// Single-model arms pin one roster entry and bypass the switcher.
enum class Arm { adaptive, small, medium, large };

std::string to_string(Arm a);
Arm parse_arm(const std::string& s);
inline constexpr Arm kAllArms[] = {Arm::adaptive, Arm::small, Arm::medium, Arm::large};

/// Roster index pinned by a single-model arm: first, middle, or last.
std::size_t pinned_model(Arm a, std::size_t roster_size);

struct RunRecord {
  std::size_t frame = 0;
  std::string model;
  double gu = 0.0;
  double gt = 0.0;
  int nt_true = 0;
  int nt_obs = 0;
  double score = 0.0;
  bool switched = false;

  friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

struct RunLog {
  std::string scenario;
  std::string arm;
  std::optional<std::uint64_t> seed;
  std::vector<RunRecord> records;
};

using Rng = std::mt19937_64;

/// Detected targets: floor(nt_true * recall(nt_true)), or a binomial draw
/// when `rng` is given. Never exceeds nt_true.
int observe_targets(const ModelProfile& profile, int nt_true, Rng* rng = nullptr);

/// clamp(base + per_target * nt_observed + noise, 0, 100).
double update_utilization(const ModelProfile& profile, int nt_observed, double noise_sigma = 0.0,
                          Rng* rng = nullptr);

/// prev + alpha * (ambient + gain * gu - prev) + noise.
double update_temperature(const ThermalModel& tm, double prev_c, double gu, Rng* rng = nullptr);

/// Closed-loop run of one arm. A model chosen at frame t runs from frame t+1.
/// Deterministic given the scenario (including its seed).
RunLog simulate(const Scenario& sc, const RuleBase& rb, Arm arm = Arm::adaptive);

/// Independent arms over shared immutable inputs, run in parallel (OpenMP).
std::vector<RunLog> simulate_arms(const Scenario& sc, const RuleBase& rb, std::span<const Arm> arms);

/// Serial reference for simulate_arms().
std::vector<RunLog> simulate_arms_serial(const Scenario& sc, const RuleBase& rb,
                                         std::span<const Arm> arms);

}  // namespace fzs
