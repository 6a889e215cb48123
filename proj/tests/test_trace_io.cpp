#include <cmath>
#include <filesystem>

#include "doctest.h"
#include "fzs/error.hpp"
#include "fzs/rule_dsl.hpp"
#include "fzs/trace_io.hpp"

namespace fs = std::filesystem;

namespace {

const std::string kSource = FZS_SOURCE_DIR;

const char* kMinimal = R"(name: tiny
thermal: {ambient_c: 30, heat_gain_c_per_gu: 0.2, alpha: 0.1}
models:
  - {label: a, base_load: 40, per_target_load: 0.1, recall: [[0, 0.9]]}
  - {label: b, base_load: 45, per_target_load: 0.1, recall: [[0, 0.95]]}
  - {label: c, base_load: 50, per_target_load: 0.1, recall: [[0, 0.99]]}
trace:
  segments:
    - {length: 5, base_nt: 3}
)";

}  // namespace

TEST_CASE("trace segments") {
  const std::vector<fzs::TraceSegment> segs{{3, 5, 0, 0, 0}, {4, 10, -4, 0, 0}};
  CHECK(fzs::generate_trace(segs) == std::vector<int>{5, 5, 5, 10, 6, 2, 0});
  const std::vector<fzs::TraceSegment> wave{{4, 10, 0, 2, 4}};
  CHECK(fzs::generate_trace(wave) == std::vector<int>{10, 12, 10, 8});
}

TEST_CASE("trace CSV parsing") {
  CHECK(fzs::parse_trace_csv("frame,nt_true\n0,3\n1,0\r\n2,17\n") == std::vector<int>{3, 0, 17});
  CHECK_THROWS_WITH_AS(fzs::parse_trace_csv("frame,nt_true\n0,3\n0,4\n"),
                       doctest::Contains("duplicate or out-of-order frame"), fzs::ValidationError);
  CHECK_THROWS_WITH_AS(fzs::parse_trace_csv("frame,nt_true\n0,3\n2,4\n"),
                       doctest::Contains("gap in frame indices"), fzs::ValidationError);
  CHECK_THROWS_WITH_AS(fzs::parse_trace_csv("frame,nt_true\n0,3.5\n"),
                       doctest::Contains("non-integer count"), fzs::ValidationError);
  CHECK_THROWS_WITH_AS(fzs::parse_trace_csv("frame,nt_true\n0,-1\n"),
                       doctest::Contains("negative count"), fzs::ValidationError);
  CHECK_THROWS_WITH_AS(fzs::parse_trace_csv("frame,nt_true\n"), doctest::Contains("trace has no frames"),
                       fzs::ValidationError);
  CHECK_THROWS_WITH_AS(fzs::parse_trace_csv("frame,count\n0,1\n"), doctest::Contains("expected header"),
                       fzs::ValidationError);
  CHECK_THROWS_WITH_AS(fzs::parse_trace_csv("frame,nt_true\n0,1\n1,x\n", "t.csv"),
                       doctest::Contains("t.csv: line 3"), fzs::ValidationError);
}

TEST_CASE("shipped scenario loads") {
  const auto sc = fzs::load_scenario(kSource + "/scenarios/default_2000.scenario");
  CHECK(sc.trace.size() == 2000);
  REQUIRE(sc.models.size() == 3);
  CHECK(sc.models[0].label == "small");
  CHECK(sc.models[2].label == "large");
  CHECK(sc.controller.threshold_k == 5);
  CHECK(sc.controller.counter_mode == fzs::CounterMode::same_candidate);
  CHECK_FALSE(sc.stochastic());
  CHECK(fzs::scenario_rules(sc) == fzs::builtin_rulebase());

  const auto noisy = fzs::load_scenario(kSource + "/scenarios/default_2000_noisy.scenario");
  CHECK(noisy.stochastic());
  CHECK(noisy.rng_seed.has_value());
  CHECK(noisy.trace == sc.trace);
}

TEST_CASE("scenario defaults and errors") {
  const auto sc = fzs::parse_scenario(kMinimal);
  CHECK(sc.name == "tiny");
  CHECK(sc.trace == std::vector<int>{3, 3, 3, 3, 3});
  CHECK(sc.controller.threshold_k == 5);
  CHECK(sc.target_source == fzs::TargetSource::observed);
  CHECK(sc.thermal.noise_sigma_c == 0.0);

  std::string broken = kMinimal;
  broken.replace(broken.find("alpha: 0.1"), 10, "alpha: 2.0");
  CHECK_THROWS_WITH_AS(fzs::parse_scenario(broken), doctest::Contains("alpha"), fzs::ValidationError);

  std::string typo = kMinimal;
  typo.replace(typo.find("base_load: 45"), 13, "base_load: xx");
  CHECK_THROWS_WITH_AS(fzs::parse_scenario(typo), doctest::Contains("line 5"), fzs::ValidationError);

  CHECK_THROWS_WITH_AS(fzs::parse_scenario("name: [unclosed\n"), doctest::Contains("parse error at line"),
                       fzs::ValidationError);

  std::string noisy = kMinimal;
  noisy += "device: {gu_noise_sigma: 1.0}\n";
  CHECK_THROWS_WITH_AS(fzs::parse_scenario(noisy), doctest::Contains("rng_seed"), fzs::ValidationError);

  std::string csv = kMinimal;
  csv.replace(csv.find("  segments:"), std::string::npos, "  csv: does-not-exist.csv\n");
  CHECK_THROWS_WITH_AS(fzs::parse_scenario(csv, "/nonexistent"), doctest::Contains("cannot open"),
                       fzs::IoError);
}

TEST_CASE("run log CSV round trip") {
  fzs::RunLog log;
  log.records = {{0, "small", 48.25, 33.123456, 10, 9, 82.0238, false},
                 {1, "small", 0.0, -0.0000001, 0, 0, std::nan(""), true},
                 {2, "large", 100.0, 60.5, 200, 176, 17.9762, false}};
  const auto text = fzs::format_runlog_csv(log);
  CHECK(text.rfind("frame,model,gu,gt,nt_true,nt_obs,score,switched\n", 0) == 0);
  CHECK(text.find("0,small,48.250000,33.123456,10,9,82.023800,0\n") != std::string::npos);
  CHECK(text.find("1,small,0.000000,0.000000,0,0,nan,1\n") != std::string::npos);

  const auto back = fzs::parse_runlog_csv(text);
  REQUIRE(back.records.size() == 3);
  CHECK(back.records[0] == log.records[0]);
  CHECK(std::isnan(back.records[1].score));
  CHECK(back.records[1].switched);
  CHECK(fzs::format_runlog_csv(back) == text);
}

TEST_CASE("run log CSV errors") {
  const std::string header = "frame,model,gu,gt,nt_true,nt_obs,score,switched\n";
  CHECK(fzs::parse_runlog_csv(header).records.empty());
  CHECK_THROWS_WITH_AS(fzs::parse_runlog_csv(header + "0,s,50,40,3,4,50,0\n"),
                       doctest::Contains("nt_obs exceeds nt_true"), fzs::ValidationError);
  CHECK_THROWS_WITH_AS(fzs::parse_runlog_csv(header + "0,s,150,40,3,2,50,0\n"),
                       doctest::Contains("gu outside"), fzs::ValidationError);
  CHECK_THROWS_WITH_AS(fzs::parse_runlog_csv(header + "0,s,50,40,3,2,50,yes\n"),
                       doctest::Contains("switched must be 0 or 1"), fzs::ValidationError);
  CHECK_THROWS_WITH_AS(fzs::parse_runlog_csv(header + "1,s,50,40,3,2,50,0\n"),
                       doctest::Contains("gap in frame indices"), fzs::ValidationError);
  CHECK_THROWS_AS(fzs::read_runlog_csv("/nonexistent/log.csv"), fzs::IoError);
}

TEST_CASE("file round trip") {
  const auto dir = fs::temp_directory_path() / "fzs_trace_io_test";
  fs::create_directories(dir);
  fzs::write_text_file(dir / "trace.csv", "frame,nt_true\n0,4\n1,5\n");
  CHECK(fzs::load_trace_csv(dir / "trace.csv") == std::vector<int>{4, 5});

  std::string sc = kMinimal;
  sc.replace(sc.find("  segments:"), std::string::npos, "  csv: trace.csv\n");
  fzs::write_text_file(dir / "s.scenario", sc);
  CHECK(fzs::load_scenario(dir / "s.scenario").trace == std::vector<int>{4, 5});

  fzs::write_text_file(dir / "bad.frb", "var X range 0 1 {\n  term a tri 0 0.5 0.4\n}\n");
  CHECK_THROWS_WITH_AS(fzs::load_rules(dir / "bad.frb"), doctest::Contains("bad.frb"), fzs::SyntaxError);
  fs::remove_all(dir);
}
