// fzswitch: evaluate the fuzzy controller, run closed-loop simulations, and
// summarize run logs.
//
// Exit codes: 0 success, 1 usage, 2 validation, 3 runtime.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "fzs/device_sim.hpp"
#include "fzs/engine.hpp"
#include "fzs/error.hpp"
#include "fzs/metrics.hpp"
#include "fzs/rule_dsl.hpp"
#include "fzs/switcher.hpp"
#include "fzs/trace_io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

enum Exit : int { kOk = 0, kUsage = 1, kValidation = 2, kRuntime = 3 };

std::vector<std::string> roster_for(const fzs::LinguisticVariable& output) {
  if (output.term_count() == 3) return {"small", "medium", "large"};
  std::vector<std::string> r;
  for (const auto& t : output.terms()) r.push_back(t.label);
  return r;
}

void print(const json& j) { std::cout << j.dump(2) << "\n"; }

struct EvalArgs {
  double gu = 0, gt = 0, nt = 0;
  std::string rules;
  bool pretty = false;
};

int cmd_eval(const EvalArgs& a) {
  const fzs::RuleBase rb = a.rules.empty() ? fzs::builtin_rulebase() : fzs::load_rules(a.rules);
  const fzs::Telemetry t{a.gu, a.gt, a.nt};
  const auto res = fzs::infer(rb, t);
  const auto roster = roster_for(rb.output());
  const auto model = fzs::select_model(res.score, rb.output(), roster);

  json j;
  j["inputs"] = {{"gu", a.gu}, {"gt", a.gt}, {"nt", a.nt}};
  j["score"] = res.score;
  j["model"] = model.label;
  j["model_index"] = model.index;
  j["output_term"] = rb.output().terms()[model.index].label;
  auto& fired = j["fired_rules"] = json::array();
  for (std::size_t r = 0; r < rb.rules().size(); ++r) {
    if (res.rule_strengths[r] > 0.0) {
      fired.push_back({{"rule", r + 1},
                       {"text", rb.describe(rb.rules()[r])},
                       {"strength", res.rule_strengths[r]}});
    }
  }
  auto& clamps = j["clamped"] = json::array();
  for (std::size_t i = 0; i < res.clamped.size(); ++i) {
    if (res.clamped[i]) {
      const auto& v = rb.inputs()[i];
      clamps.push_back({{"variable", v.name()},
                        {"value", fzs::input_values(rb, t)[i]},
                        {"range", {v.universe().lo, v.universe().hi}}});
      std::cerr << "warning: " << v.name() << " outside [" << v.universe().lo << ", "
                << v.universe().hi << "], clamped\n";
    }
  }
  if (!a.pretty) {
    print(j);
    return kOk;
  }
  std::printf("score  %.4f\nmodel  %s (%s)\n", res.score, model.label.c_str(),
              rb.output().terms()[model.index].label.c_str());
  for (const auto& f : fired) {
    std::printf("  %.4f  %s\n", f["strength"].get<double>(), f["text"].get<std::string>().c_str());
  }
  return kOk;
}

struct SimulateArgs {
  std::string scenario;
  std::string out;
  std::string summary;
  std::optional<std::uint64_t> seed;
  std::string arm = "adaptive";
  bool all_arms = false;
  std::size_t bins = 500;
  bool pretty = false;
};

fs::path sibling(const fs::path& p, const std::string& infix, const std::string& ext) {
  return p.parent_path() / (p.stem().string() + infix + ext);
}

int cmd_simulate(const SimulateArgs& a) {
  auto sc = fzs::load_scenario(a.scenario);
  if (a.seed) {
    sc.rng_seed = a.seed;
    fzs::validate(sc);
  }
  const auto rb = fzs::scenario_rules(sc);

  std::vector<fzs::Arm> arms;
  if (a.all_arms) {
    arms.assign(std::begin(fzs::kAllArms), std::end(fzs::kAllArms));
  } else {
    arms.push_back(fzs::parse_arm(a.arm));
  }
  const auto logs = fzs::simulate_arms(sc, rb, arms);

  json doc = json::array();
  for (std::size_t i = 0; i < logs.size(); ++i) {
    const auto& log = logs[i];
    const fs::path out = a.all_arms ? sibling(a.out, "." + log.arm, fs::path(a.out).extension().string())
                                    : fs::path(a.out);
    const fs::path summary_path =
        (!a.all_arms && !a.summary.empty()) ? fs::path(a.summary) : sibling(out, ".summary", ".json");
    fzs::write_runlog_csv(log, out);
    const auto summary = fzs::summarize(log, a.bins);
    auto sj = fzs::report_json(log, summary);
    sj.erase("series");
    fzs::write_text_file(summary_path, sj.dump(2) + "\n");

    if (a.pretty) {
      std::printf("== arm %s (%s)\n%s\n", log.arm.c_str(), out.string().c_str(),
                  fzs::render_summary(summary).c_str());
    }
    doc.push_back({{"arm", log.arm},
                   {"log", out.string()},
                   {"summary", summary_path.string()},
                   {"switch_count", summary.switch_count},
                   {"avtg", summary.avtg}});
  }
  if (!a.pretty) print(a.all_arms ? doc : doc.front());
  return kOk;
}

struct ReportArgs {
  std::string in;
  std::size_t bins = 500;
  bool pretty = false;
};

int cmd_report(const ReportArgs& a) {
  const auto log = fzs::read_runlog_csv(a.in);
  if (log.records.empty()) throw fzs::ValidationError("empty log");
  const auto summary = fzs::summarize(log, a.bins);
  if (a.pretty) {
    std::cout << fzs::render_summary(summary);
  } else {
    print(fzs::report_json(log, summary));
  }
  return kOk;
}

struct CheckArgs {
  std::string rules;
  bool pretty = false;
};

int cmd_check_rules(const CheckArgs& a) {
  const auto rb = fzs::load_rules(a.rules, {.allow_conflicts = true});
  const auto rep = fzs::check_completeness(rb);
  for (const auto& g : rep.gaps) {
    std::cerr << "warning: no rule for " << fzs::describe_antecedents(rb, g) << "\n";
  }
  for (const auto& c : rep.conflicts) {
    std::cerr << "error: rules " << c.first_rule + 1 << " and " << c.second_rule + 1
              << " conflict: " << rb.describe(rb.rules()[c.first_rule]) << " / "
              << rb.describe(rb.rules()[c.second_rule]) << "\n";
  }
  if (a.pretty) {
    std::printf("%zu/%zu covered, %zu conflicts\n", rep.covered, rep.total, rep.conflicts.size());
  } else {
    json j;
    j["covered"] = rep.covered;
    j["total"] = rep.total;
    j["rules"] = rb.rules().size();
    auto& gaps = j["gaps"] = json::array();
    for (const auto& g : rep.gaps) gaps.push_back(fzs::describe_antecedents(rb, g));
    auto& conflicts = j["conflicts"] = json::array();
    for (const auto& c : rep.conflicts) conflicts.push_back({c.first_rule + 1, c.second_rule + 1});
    j["summary"] = std::to_string(rep.covered) + "/" + std::to_string(rep.total) + " covered, " +
                   std::to_string(rep.conflicts.size()) + " conflicts";
    print(j);
  }
  return rep.conflicts.empty() ? kOk : kValidation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fuzzy-control model switching: controller, simulator, reports"};
  app.require_subcommand(1);

  EvalArgs eval;
  auto* e = app.add_subcommand("eval", "Evaluate the controller for one telemetry sample");
  e->add_option("--gu", eval.gu, "Utilization, percent")->required();
  e->add_option("--gt", eval.gt, "Temperature, degrees C")->required();
  e->add_option("--nt", eval.nt, "Target count")->required();
  e->add_option("--rules", eval.rules, "Rule document (.frb); default is the built-in table");
  e->add_flag("--pretty", eval.pretty, "Human-readable output");

  SimulateArgs sim;
  auto* s = app.add_subcommand("simulate", "Run a scenario and write its run log");
  s->add_option("--scenario", sim.scenario, "Scenario file")->required();
  s->add_option("--out", sim.out, "Run log CSV path")->required();
  s->add_option("--summary", sim.summary, "Summary JSON path (default <out>.summary.json)");
  s->add_option("--seed", sim.seed, "Override the scenario RNG seed");
  s->add_option("--arm", sim.arm, "adaptive, small, medium or large")
      ->check(CLI::IsMember({"adaptive", "small", "medium", "large"}));
  s->add_flag("--all-arms", sim.all_arms, "Run all four arms in parallel; logs go to <out>.<arm>.csv");
  s->add_option("--bins", sim.bins, "Switch histogram bin width")->check(CLI::PositiveNumber);
  s->add_flag("--pretty", sim.pretty, "Human-readable output");

  ReportArgs rep;
  auto* r = app.add_subcommand("report", "Summarize a run log");
  r->add_option("--in", rep.in, "Run log CSV")->required();
  r->add_option("--bins", rep.bins, "Switch histogram bin width")->check(CLI::PositiveNumber);
  r->add_flag("--pretty", rep.pretty, "Human-readable output");

  CheckArgs chk;
  auto* c = app.add_subcommand("check-rules", "Check a rule document for gaps and conflicts");
  c->add_option("--rules", chk.rules, "Rule document (.frb)")->required();
  c->add_flag("--pretty", chk.pretty, "Human-readable output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*e) return cmd_eval(eval);
    if (*s) return cmd_simulate(sim);
    if (*r) return cmd_report(rep);
    if (*c) return cmd_check_rules(chk);
  } catch (const fzs::ValidationError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kValidation;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kRuntime;
  }
  return kUsage;
}
