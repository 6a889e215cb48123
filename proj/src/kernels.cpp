#include "fzs/kernels.hpp"

#include <exception>
#include <limits>

#include "fzs/error.hpp"

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace fzs {

namespace {

double score_or_nan(const RuleBase& rb, const Telemetry& t, std::size_t grid_samples) {
  try {
    return infer(rb, t, grid_samples).score;
  } catch (const NoRuleFiredError&) {
    return std::numeric_limits<double>::quiet_NaN();
  }
}

}  // namespace

std::vector<double> infer_batch(const RuleBase& rb, std::span<const Telemetry> samples,
                                std::size_t grid_samples) {
  (void)input_values(rb, Telemetry{});  // arity check before entering the parallel region
  std::vector<double> out(samples.size());
  const auto n = static_cast<std::ptrdiff_t>(samples.size());
  std::exception_ptr err;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      out[i] = score_or_nan(rb, samples[i], grid_samples);
    } catch (...) {
#pragma omp critical(fzs_infer_batch)
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
  return out;
}

std::vector<double> infer_batch_serial(const RuleBase& rb, std::span<const Telemetry> samples,
                                       std::size_t grid_samples) {
  (void)input_values(rb, Telemetry{});
  std::vector<double> out(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    out[i] = score_or_nan(rb, samples[i], grid_samples);
  }
  return out;
}

std::vector<Telemetry> surface_samples(const RuleBase& rb, const SurfaceSpec& spec) {
  if (spec.gu_points < 2 || spec.gt_points < 2) {
    throw ValidationError("surface: each axis needs at least two points");
  }
  (void)input_values(rb, Telemetry{});
  const auto& gu = rb.inputs()[0].universe();
  const auto& gt = rb.inputs()[1].universe();
  std::vector<Telemetry> out;
  out.reserve(spec.gu_points * spec.gt_points);
  for (std::size_t j = 0; j < spec.gt_points; ++j) {
    const double y = gt.lo + gt.span() * static_cast<double>(j) / (spec.gt_points - 1);
    for (std::size_t i = 0; i < spec.gu_points; ++i) {
      const double x = gu.lo + gu.span() * static_cast<double>(i) / (spec.gu_points - 1);
      out.push_back({x, y, spec.nt});
    }
  }
  return out;
}

int max_threads() noexcept {
#if defined(_OPENMP)
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace fzs
