#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "fzs/device_sim.hpp"

namespace fzs {

/// Detected targets per unit of utilization: sum(nt_obs) / sum(gu), with
/// "total GU" read as the per-frame sum of utilization percentages. Throws
/// ValidationError on an empty log or zero total utilization.
double avtg(const RunLog& log);

struct HistogramBin {
  std::size_t begin = 0;  ///< first frame
  std::size_t end = 0;    ///< one past the last frame
  std::size_t count = 0;

  /// "0–500"
  std::string label() const;
};

/// Switches per consecutive frame range of `bin_width`; the last bin may be short.
std::vector<HistogramBin> switch_histogram(const RunLog& log, std::size_t bin_width = 500);

struct RunSummary {
  std::size_t frames = 0;
  double avtg = 0.0;
  long long total_nt_observed = 0;
  long long total_nt_true = 0;
  double total_gu = 0.0;
  std::size_t switch_count = 0;
  std::vector<HistogramBin> switch_histogram;
  double peak_temp_c = 0.0;
  double mean_temp_c = 0.0;
  /// Frames per model label, in order of first use.
  std::vector<std::pair<std::string, std::size_t>> model_frames;
};

RunSummary summarize(const RunLog& log, std::size_t bin_width = 500);

/// RunSummary fields plus per-frame temperature and model-in-use series.
nlohmann::json report_json(const RunLog& log, const RunSummary& summary);
nlohmann::json summary_json(const RunSummary& summary);

/// Fixed-width table for --pretty output.
std::string render_summary(const RunSummary& summary);

}  // namespace fzs
