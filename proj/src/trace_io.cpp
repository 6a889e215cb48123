#include "fzs/trace_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "fzs/error.hpp"

namespace fzs {

namespace fs = std::filesystem;

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("read failed: " + path.string());
  return ss.str();
}

void write_text_file(const fs::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.flush();
  if (!out) throw IoError("write failed: " + path.string());
}

std::vector<int> generate_trace(std::span<const TraceSegment> segments) {
  std::vector<int> out;
  for (const auto& s : segments) {
    for (std::size_t j = 0; j < s.length; ++j) {
      double v = s.base_nt + s.slope * static_cast<double>(j);
      if (s.period > 0.0) {
        v += s.amplitude * std::sin(2.0 * std::numbers::pi * static_cast<double>(j) / s.period);
      }
      out.push_back(static_cast<int>(std::max(0L, std::lround(v))));
    }
  }
  return out;
}

namespace {

struct CsvLine {
  std::size_t number;
  std::vector<std::string_view> fields;
};

std::vector<CsvLine> split_csv(std::string_view text) {
  std::vector<CsvLine> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    CsvLine l{line_no, {}};
    std::size_t start = 0;
    while (true) {
      const auto comma = line.find(',', start);
      l.fields.push_back(line.substr(start, comma == std::string_view::npos ? comma : comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    out.push_back(std::move(l));
  }
  return out;
}

[[noreturn]] void csv_fail(const std::string& origin, std::size_t line, const std::string& msg) {
  throw ValidationError(origin + ": line " + std::to_string(line) + ": " + msg);
}

long long to_integer(std::string_view s, const std::string& origin, std::size_t line,
                     const char* what) {
  long long v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) {
    csv_fail(origin, line, std::string("non-integer ") + what + " '" + std::string(s) + "'");
  }
  return v;
}

double to_real(std::string_view s, const std::string& origin, std::size_t line, const char* what) {
  double v = 0.0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) {
    csv_fail(origin, line, std::string("invalid ") + what + " '" + std::string(s) + "'");
  }
  return v;
}

void check_header(const std::vector<CsvLine>& lines, std::string_view expected,
                  const std::string& origin) {
  if (lines.empty()) throw ValidationError(origin + ": missing header '" + std::string(expected) + "'");
  std::string got;
  for (std::size_t i = 0; i < lines[0].fields.size(); ++i) {
    if (i) got += ',';
    got += lines[0].fields[i];
  }
  if (got != expected) {
    csv_fail(origin, lines[0].number,
             "expected header '" + std::string(expected) + "', found '" + got + "'");
  }
}

void check_frame(long long frame, std::size_t expected, const std::string& origin,
                 std::size_t line) {
  if (frame < static_cast<long long>(expected)) {
    csv_fail(origin, line, "duplicate or out-of-order frame " + std::to_string(frame));
  }
  if (frame > static_cast<long long>(expected)) {
    csv_fail(origin, line,
             "gap in frame indices: expected " + std::to_string(expected) + ", found " +
                 std::to_string(frame));
  }
}

}  // namespace

std::vector<int> parse_trace_csv(std::string_view text, const std::string& origin) {
  const auto lines = split_csv(text);
  check_header(lines, "frame,nt_true", origin);
  std::vector<int> out;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto& l = lines[i];
    if (l.fields.size() != 2) csv_fail(origin, l.number, "expected 2 fields");
    check_frame(to_integer(l.fields[0], origin, l.number, "frame"), out.size(), origin, l.number);
    const auto nt = to_integer(l.fields[1], origin, l.number, "count");
    if (nt < 0) csv_fail(origin, l.number, "negative count " + std::to_string(nt));
    if (nt > std::numeric_limits<int>::max()) csv_fail(origin, l.number, "count out of range");
    out.push_back(static_cast<int>(nt));
  }
  if (out.empty()) throw ValidationError(origin + ": trace has no frames");
  return out;
}

std::vector<int> load_trace_csv(const fs::path& path) {
  return parse_trace_csv(read_text_file(path), path.string());
}

namespace {

std::string where(const YAML::Node& n) {
  const auto m = n.Mark();
  if (m.is_null()) return "";
  return " (line " + std::to_string(m.line + 1) + ", column " + std::to_string(m.column + 1) + ")";
}

template <typename T>
T req(const YAML::Node& parent, const char* key, const std::string& ctx) {
  const auto n = parent[key];
  if (!n) throw ValidationError("scenario: " + ctx + " is missing '" + key + "'" + where(parent));
  try {
    return n.as<T>();
  } catch (const YAML::Exception&) {
    throw ValidationError("scenario: " + ctx + "." + key + " has the wrong type" + where(n));
  }
}

template <typename T>
T opt(const YAML::Node& parent, const char* key, T fallback, const std::string& ctx) {
  if (!parent || !parent[key]) return fallback;
  return req<T>(parent, key, ctx);
}

ModelProfile parse_model(const YAML::Node& n, std::size_t i) {
  const std::string ctx = "models[" + std::to_string(i) + "]";
  ModelProfile m;
  m.label = req<std::string>(n, "label", ctx);
  m.base_load = req<double>(n, "base_load", ctx);
  m.per_target_load = req<double>(n, "per_target_load", ctx);
  m.latency_ms = opt<double>(n, "latency_ms", 0.0, ctx);
  const auto rc = n["recall"];
  if (!rc || !rc.IsSequence()) {
    throw ValidationError("scenario: " + ctx + ".recall must be a list of [nt, recall] pairs" + where(n));
  }
  std::vector<std::pair<double, double>> knots;
  for (const auto& k : rc) {
    if (!k.IsSequence() || k.size() != 2) {
      throw ValidationError("scenario: " + ctx + ".recall entries must be [nt, recall]" + where(k));
    }
    try {
      knots.emplace_back(k[0].as<double>(), k[1].as<double>());
    } catch (const YAML::Exception&) {
      throw ValidationError("scenario: " + ctx + ".recall entry is not numeric" + where(k));
    }
  }
  try {
    m.recall = PiecewiseLinear(std::move(knots));
  } catch (const ValidationError& e) {
    throw ValidationError("scenario: " + ctx + ".recall: " + e.what() + where(rc));
  }
  return m;
}

fs::path resolve(const fs::path& base, const std::string& p) {
  fs::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

}  // namespace

Scenario parse_scenario(std::string_view text, const fs::path& base_dir) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::ParserException& e) {
    throw ValidationError("scenario: parse error at line " + std::to_string(e.mark.line + 1) +
                          ", column " + std::to_string(e.mark.column + 1) + ": " + e.msg);
  }
  if (!root.IsMap()) throw ValidationError("scenario: document must be a mapping");

  Scenario sc;
  sc.name = opt<std::string>(root, "name", "scenario", "root");

  const auto models = root["models"];
  if (!models || !models.IsSequence()) throw ValidationError("scenario: 'models' must be a list");
  for (std::size_t i = 0; i < models.size(); ++i) sc.models.push_back(parse_model(models[i], i));

  if (const auto th = root["thermal"]) {
    sc.thermal.ambient_c = req<double>(th, "ambient_c", "thermal");
    sc.thermal.heat_gain_c_per_gu = req<double>(th, "heat_gain_c_per_gu", "thermal");
    sc.thermal.alpha = req<double>(th, "alpha", "thermal");
    sc.thermal.noise_sigma_c = opt<double>(th, "noise_sigma_c", 0.0, "thermal");
    if (th["initial_c"]) sc.initial_temp_c = req<double>(th, "initial_c", "thermal");
  } else {
    throw ValidationError("scenario: missing 'thermal' table");
  }

  const auto ctl = root["controller"];
  sc.controller.threshold_k = opt<std::size_t>(ctl, "threshold_k", 5, "controller");
  sc.controller.counter_mode = parse_counter_mode(
      opt<std::string>(ctl, "counter_mode", "same_candidate", "controller"));
  sc.controller.initial_model = opt<std::size_t>(ctl, "initial_model", 0, "controller");
  sc.controller.samples = opt<std::size_t>(ctl, "samples", kDefaultSamples, "controller");
  if (sc.controller.samples < 2) throw ValidationError("scenario: controller.samples must be >= 2");
  const auto src = opt<std::string>(ctl, "target_source", "observed", "controller");
  if (src == "observed") {
    sc.target_source = TargetSource::observed;
  } else if (src == "truth") {
    sc.target_source = TargetSource::truth;
  } else {
    throw ValidationError("scenario: controller.target_source must be 'observed' or 'truth'");
  }
  if (ctl && ctl["rules"]) {
    sc.rules_path = resolve(base_dir, req<std::string>(ctl, "rules", "controller")).string();
  }

  const auto dev = root["device"];
  if (dev && dev["rng_seed"]) sc.rng_seed = req<std::uint64_t>(dev, "rng_seed", "device");
  sc.gu_noise_sigma = opt<double>(dev, "gu_noise_sigma", 0.0, "device");
  sc.stochastic_detection = opt<bool>(dev, "stochastic_detection", false, "device");

  const auto tr = root["trace"];
  if (!tr || !tr.IsMap()) throw ValidationError("scenario: missing 'trace' table");
  if (tr["csv"] && tr["segments"]) {
    throw ValidationError("scenario: trace takes either 'csv' or 'segments', not both");
  }
  if (tr["csv"]) {
    sc.trace = load_trace_csv(resolve(base_dir, req<std::string>(tr, "csv", "trace")));
  } else if (const auto segs = tr["segments"]; segs && segs.IsSequence()) {
    std::vector<TraceSegment> parsed;
    for (std::size_t i = 0; i < segs.size(); ++i) {
      const std::string ctx = "trace.segments[" + std::to_string(i) + "]";
      TraceSegment s;
      const auto len = req<long long>(segs[i], "length", ctx);
      if (len < 0) throw ValidationError("scenario: " + ctx + ".length is negative");
      s.length = static_cast<std::size_t>(len);
      s.base_nt = req<double>(segs[i], "base_nt", ctx);
      s.slope = opt<double>(segs[i], "slope", 0.0, ctx);
      s.amplitude = opt<double>(segs[i], "amplitude", 0.0, ctx);
      s.period = opt<double>(segs[i], "period", 0.0, ctx);
      if (s.period < 0.0) throw ValidationError("scenario: " + ctx + ".period is negative");
      parsed.push_back(s);
    }
    sc.trace = generate_trace(parsed);
  } else {
    throw ValidationError("scenario: trace needs 'csv' or a 'segments' list");
  }

  validate(sc);
  return sc;
}

Scenario load_scenario(const fs::path& path) {
  return parse_scenario(read_text_file(path), path.parent_path());
}

RuleBase load_rules(const fs::path& path, ParseOptions options) {
  const auto text = read_text_file(path);
  try {
    return parse_rules(text, options);
  } catch (const SyntaxError& e) {
    throw SyntaxError(path.string() + ": " + e.what(), e.line(), e.column());
  }
}

RuleBase scenario_rules(const Scenario& sc) {
  if (sc.rules_path.empty()) return builtin_rulebase();
  return load_rules(sc.rules_path);
}

namespace {

void append_fixed(std::string& out, double v) {
  if (std::isnan(v)) {
    out += "nan";
    return;
  }
  char buf[64];
  const int n = std::snprintf(buf, sizeof buf, "%.6f", v);
  // Keep "-0.000000" out of the logs.
  if (std::string_view(buf, n) == "-0.000000") {
    out += "0.000000";
  } else {
    out.append(buf, n);
  }
}

}  // namespace

std::string format_runlog_csv(const RunLog& log) {
  std::string out = "frame,model,gu,gt,nt_true,nt_obs,score,switched\n";
  for (const auto& r : log.records) {
    out += std::to_string(r.frame);
    out += ',';
    out += r.model;
    out += ',';
    append_fixed(out, r.gu);
    out += ',';
    append_fixed(out, r.gt);
    out += ',';
    out += std::to_string(r.nt_true);
    out += ',';
    out += std::to_string(r.nt_obs);
    out += ',';
    append_fixed(out, r.score);
    out += r.switched ? ",1\n" : ",0\n";
  }
  return out;
}

void write_runlog_csv(const RunLog& log, const fs::path& path) {
  write_text_file(path, format_runlog_csv(log));
}

RunLog parse_runlog_csv(std::string_view text, const std::string& origin) {
  const auto lines = split_csv(text);
  check_header(lines, "frame,model,gu,gt,nt_true,nt_obs,score,switched", origin);
  RunLog log;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto& l = lines[i];
    if (l.fields.size() != 8) csv_fail(origin, l.number, "expected 8 fields");
    RunRecord r;
    const auto frame = to_integer(l.fields[0], origin, l.number, "frame");
    check_frame(frame, log.records.size(), origin, l.number);
    r.frame = static_cast<std::size_t>(frame);
    r.model = std::string(l.fields[1]);
    if (r.model.empty()) csv_fail(origin, l.number, "empty model label");
    r.gu = to_real(l.fields[2], origin, l.number, "gu");
    r.gt = to_real(l.fields[3], origin, l.number, "gt");
    const auto nt_true = to_integer(l.fields[4], origin, l.number, "nt_true");
    const auto nt_obs = to_integer(l.fields[5], origin, l.number, "nt_obs");
    if (nt_true < 0 || nt_obs < 0) csv_fail(origin, l.number, "negative count");
    if (nt_obs > nt_true) csv_fail(origin, l.number, "nt_obs exceeds nt_true");
    if (nt_true > std::numeric_limits<int>::max()) csv_fail(origin, l.number, "count out of range");
    r.nt_true = static_cast<int>(nt_true);
    r.nt_obs = static_cast<int>(nt_obs);
    if (!(r.gu >= 0.0 && r.gu <= 100.0)) csv_fail(origin, l.number, "gu outside [0,100]");
    r.score = to_real(l.fields[6], origin, l.number, "score");
    const auto sw = l.fields[7];
    if (sw != "0" && sw != "1") csv_fail(origin, l.number, "switched must be 0 or 1");
    r.switched = sw == "1";
    log.records.push_back(std::move(r));
  }
  return log;
}

RunLog read_runlog_csv(const fs::path& path) {
  return parse_runlog_csv(read_text_file(path), path.string());
}

}  // namespace fzs
