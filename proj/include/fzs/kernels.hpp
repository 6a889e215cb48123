#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fzs/engine.hpp"

namespace fzs {

/// Crisp score per telemetry sample; NaN where no rule fired.
///
/// Each sample runs the scalar infer() path, so results are bit-identical to
/// infer_batch_serial() regardless of thread count.
std::vector<double> infer_batch(const RuleBase& rb, std::span<const Telemetry> samples,
                                std::size_t grid_samples = kDefaultSamples);

/// Serial reference for infer_batch().
std::vector<double> infer_batch_serial(const RuleBase& rb, std::span<const Telemetry> samples,
                                       std::size_t grid_samples = kDefaultSamples);

/// Control surface over a regular (gu, gt) grid at fixed target count,
/// row-major with gu varying fastest. Each axis needs at least two points.
struct SurfaceSpec {
  std::size_t gu_points = 101;
  std::size_t gt_points = 81;
  double nt = 0.0;
};

std::vector<Telemetry> surface_samples(const RuleBase& rb, const SurfaceSpec& spec);

int max_threads() noexcept;

}  // namespace fzs
