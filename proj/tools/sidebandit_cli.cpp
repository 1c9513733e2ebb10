// Command-line front end: run experiments, run verification suites, and
// compute independence numbers of graph files.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

#include "sidebandit/experiment.hpp"
#include "sidebandit/graph.hpp"
#include "sidebandit/verify.hpp"

namespace {

using namespace sidebandit;

int run_command(const std::string& config_path, int jobs, const std::string& out_dir) {
  ExperimentConfig config = load_config(config_path);
  const ExperimentResult result = run_experiment(config, jobs);

  const std::string dir = !out_dir.empty() ? out_dir : config.output;
  if (!dir.empty()) {
    std::filesystem::create_directories(dir);
    const auto base = std::filesystem::path(dir) / config.name;
    emit_csv(result, base.string() + ".csv");
    emit_summary(result, base.string() + ".summary.json");
    std::cout << "wrote " << base.string() << ".csv and .summary.json\n";
  }

  const auto& last = result.regret.back();
  std::cout << config.name << ": " << to_string(config.policy) << ", d=" << config.d
            << ", T=" << config.horizon << ", reps=" << config.replications << '\n'
            << "  mean regret at T: " << last.mean << " (se " << last.std_error << ")\n";
  if (config.policy == PolicyKind::kFplIx) {
    std::cout << "  mean resampling oracle calls per round: " << result.mean_oracle_calls
              << '\n';
  }
  for (const auto& bound : result.bounds) {
    std::cout << "  bound " << bound.name << ": " << bound.final_value << '\n';
  }
  for (const auto& a : result.assertions) {
    std::cout << "  [" << (a.passed ? "PASS" : "FAIL") << "] " << a.name << ": " << a.detail
              << '\n';
  }
  std::cout << "  runtime " << result.runtime_seconds << " s\n";
  return result.all_passed() ? 0 : 1;
}

int verify_command(const std::string& suite, int cases, std::uint64_t seed) {
  std::vector<SuiteResult> results;
  const bool all = suite == "all";
  auto cases_or = [&](int fallback) { return cases > 0 ? cases : fallback; };
  if (all || suite == "lemma1") results.push_back(verify_lemma1(cases_or(500), seed));
  if (all || suite == "lemma2") results.push_back(verify_lemma2(cases_or(500), seed));
  if (all || suite == "lemma4") results.push_back(verify_lemma4(cases_or(300), seed));
  if (all || suite == "optimism") results.push_back(verify_optimism(cases_or(50), seed));
  if (all || suite == "resampling") results.push_back(verify_resampling(seed));

  bool ok = true;
  for (const auto& r : results) {
    std::cout << "[" << (r.passed() ? "PASS" : "FAIL") << "] " << r.name << ": " << r.cases
              << " cases, " << r.failures << " failures, worst margin " << r.worst_margin
              << ", " << r.seconds << " s\n";
    for (const auto& detail : r.failure_details) std::cout << "    " << detail << '\n';
    ok = ok && r.passed();
  }
  return ok ? 0 : 1;
}

int alpha_command(const std::string& path, bool exact) {
  const ObservabilityGraph graph = read_graph_file(path);
  std::cout << "d " << graph.size() << '\n'
            << "alpha_greedy " << independence_number_greedy(graph) << '\n';
  if (exact) std::cout << "alpha_exact " << independence_number_exact(graph) << '\n';
  std::cout << "dominating_set";
  for (NodeId j : greedy_dominating_set(graph)) std::cout << ' ' << j;
  std::cout << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adversarial bandits with graph side observations"};
  app.require_subcommand(1);

  std::string config_path;
  int jobs = 1;
  std::string out_dir;
  auto* run = app.add_subcommand("run", "Run an experiment from a JSON config");
  run->add_option("--config", config_path, "Experiment config file")->required()->check(CLI::ExistingFile);
  run->add_option("--jobs", jobs, "Replications run in parallel")->check(CLI::PositiveNumber);
  run->add_option("--out", out_dir, "Output directory (overrides config `output`)");

  std::string suite = "all";
  int cases = 0;
  std::uint64_t seed = 1;
  auto* verify = app.add_subcommand("verify", "Run randomized bound verification suites");
  verify->add_option("--suite", suite, "Suite to run")
      ->check(CLI::IsMember({"lemma1", "lemma2", "lemma4", "optimism", "resampling", "all"}));
  verify->add_option("--cases", cases, "Number of random instances (suite default if omitted)");
  verify->add_option("--seed", seed, "Seed");

  std::string graph_path;
  bool exact = false;
  auto* alpha = app.add_subcommand("alpha", "Independence number of a graph file");
  alpha->add_option("--graph", graph_path, "Graph file")->required()->check(CLI::ExistingFile);
  alpha->add_flag("--exact", exact, "Also compute the exact value (d <= 30)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return run_command(config_path, jobs, out_dir);
    if (*verify) return verify_command(suite, cases, seed);
    if (*alpha) return alpha_command(graph_path, exact);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
