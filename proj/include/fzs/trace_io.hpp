#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fzs/device_sim.hpp"
#include "fzs/rule_dsl.hpp"

namespace fzs {

/// One piece of an inline trace: for local frame j in [0, length),
/// nt = max(0, round(base_nt + slope * j + amplitude * sin(2 pi j / period))).
/// period == 0 disables the oscillation.
struct TraceSegment {
  std::size_t length = 0;
  double base_nt = 0.0;
  double slope = 0.0;
  double amplitude = 0.0;
  double period = 0.0;
};

std::vector<int> generate_trace(std::span<const TraceSegment> segments);

/// Header `frame,nt_true`; frames 0, 1, 2, ... without gaps or repeats.
std::vector<int> parse_trace_csv(std::string_view text, const std::string& origin = "trace");
std::vector<int> load_trace_csv(const std::filesystem::path& path);

/// YAML scenario. Relative `trace.csv` and `controller.rules` paths resolve
/// against `base_dir`. The result is validated.
Scenario parse_scenario(std::string_view text, const std::filesystem::path& base_dir = {});
Scenario load_scenario(const std::filesystem::path& path);

RuleBase load_rules(const std::filesystem::path& path, ParseOptions options = {});

/// Rules named by the scenario, or the built-in table.
RuleBase scenario_rules(const Scenario& sc);

/// Header `frame,model,gu,gt,nt_true,nt_obs,score,switched`; reals with six
/// decimals, switched as 0/1.
std::string format_runlog_csv(const RunLog& log);
void write_runlog_csv(const RunLog& log, const std::filesystem::path& path);

RunLog parse_runlog_csv(std::string_view text, const std::string& origin = "runlog");
RunLog read_runlog_csv(const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace fzs
