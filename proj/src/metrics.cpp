#include "fzs/metrics.hpp"

#include <algorithm>
#include <cstdio>

#include "fzs/error.hpp"

namespace fzs {

double avtg(const RunLog& log) {
  if (log.records.empty()) throw ValidationError("empty log");
  double nt = 0.0, gu = 0.0;
  for (const auto& r : log.records) {
    nt += r.nt_obs;
    gu += r.gu;
  }
  if (!(gu > 0.0)) throw ValidationError("undefined AVTG: total utilization is zero");
  return nt / gu;
}

std::string HistogramBin::label() const {
  return std::to_string(begin) + "–" + std::to_string(end);
}

std::vector<HistogramBin> switch_histogram(const RunLog& log, std::size_t bin_width) {
  if (bin_width == 0) throw ValidationError("bin width must be at least 1");
  const std::size_t n = log.records.size();
  std::vector<HistogramBin> bins;
  for (std::size_t b = 0; b < n; b += bin_width) bins.push_back({b, std::min(n, b + bin_width), 0});
  for (std::size_t f = 0; f < n; ++f) {
    if (log.records[f].switched) ++bins[f / bin_width].count;
  }
  return bins;
}

RunSummary summarize(const RunLog& log, std::size_t bin_width) {
  RunSummary s;
  s.avtg = avtg(log);
  s.frames = log.records.size();
  s.switch_histogram = switch_histogram(log, bin_width);
  s.peak_temp_c = log.records.front().gt;
  double temp_sum = 0.0;
  for (const auto& r : log.records) {
    s.total_nt_observed += r.nt_obs;
    s.total_nt_true += r.nt_true;
    s.total_gu += r.gu;
    if (r.switched) ++s.switch_count;
    s.peak_temp_c = std::max(s.peak_temp_c, r.gt);
    temp_sum += r.gt;
    auto it = std::find_if(s.model_frames.begin(), s.model_frames.end(),
                           [&](const auto& p) { return p.first == r.model; });
    if (it == s.model_frames.end()) {
      s.model_frames.emplace_back(r.model, 1);
    } else {
      ++it->second;
    }
  }
  s.mean_temp_c = temp_sum / static_cast<double>(s.frames);
  return s;
}

nlohmann::json summary_json(const RunSummary& s) {
  nlohmann::json j;
  j["frames"] = s.frames;
  j["avtg"] = s.avtg;
  j["total_nt_observed"] = s.total_nt_observed;
  j["total_nt_true"] = s.total_nt_true;
  j["total_gu"] = s.total_gu;
  j["switch_count"] = s.switch_count;
  auto& hist = j["switch_histogram"] = nlohmann::json::array();
  for (const auto& b : s.switch_histogram) {
    hist.push_back({{"range", b.label()}, {"begin", b.begin}, {"end", b.end}, {"count", b.count}});
  }
  j["peak_temp_c"] = s.peak_temp_c;
  j["mean_temp_c"] = s.mean_temp_c;
  auto& models = j["model_frames"] = nlohmann::json::object();
  for (const auto& [label, n] : s.model_frames) models[label] = n;
  return j;
}

nlohmann::json report_json(const RunLog& log, const RunSummary& summary) {
  nlohmann::json j;
  if (!log.scenario.empty()) j["scenario"] = log.scenario;
  if (!log.arm.empty()) j["arm"] = log.arm;
  if (log.seed) j["seed"] = *log.seed;
  j["summary"] = summary_json(summary);
  auto temp = nlohmann::json::array();
  auto model = nlohmann::json::array();
  for (const auto& r : log.records) {
    temp.push_back(r.gt);
    model.push_back(r.model);
  }
  j["series"] = {{"temperature_c", std::move(temp)}, {"model", std::move(model)}};
  return j;
}

std::string render_summary(const RunSummary& s) {
  std::string out;
  char buf[160];
  auto line = [&](const char* fmt, auto... args) {
    std::snprintf(buf, sizeof buf, fmt, args...);
    out += buf;
  };
  line("%-22s %zu\n", "frames", s.frames);
  line("%-22s %.6f\n", "AVTG", s.avtg);
  line("%-22s %lld\n", "total NT (observed)", s.total_nt_observed);
  line("%-22s %.3f\n", "total GU", s.total_gu);
  line("%-22s %zu\n", "switches", s.switch_count);
  line("%-22s %.3f\n", "peak temperature (C)", s.peak_temp_c);
  line("%-22s %.3f\n", "mean temperature (C)", s.mean_temp_c);
  out += "\nFrames range     Switch numbers\n";
  for (const auto& b : s.switch_histogram) {
    line("%-16s %zu\n", (std::to_string(b.begin) + "-" + std::to_string(b.end)).c_str(), b.count);
  }
  out += "\nModel            Frames\n";
  for (const auto& [label, n] : s.model_frames) line("%-16s %zu\n", label.c_str(), n);
  return out;
}

}  // namespace fzs
