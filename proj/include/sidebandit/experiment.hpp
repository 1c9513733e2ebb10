#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sidebandit/bounds.hpp"
#include "sidebandit/config.hpp"
#include "sidebandit/decision_set.hpp"
#include "sidebandit/policy.hpp"

namespace sidebandit {

// One CSV row: the state of one replication at one checkpoint round.
struct CheckpointRow {
  int rep = 0;
  int round = 0;
  std::string policy;
  double cum_loss = 0.0;
  double cum_regret = 0.0;
  double rate = 0.0;
  std::optional<double> q_t;
  std::optional<int> alpha_t;
  int alpha_tilde_t = 0;
  std::uint64_t oracle_calls = 0;

  friend bool operator==(const CheckpointRow&, const CheckpointRow&) = default;
};

struct ReplicationResult {
  int rep = 0;
  std::vector<CheckpointRow> checkpoints;
  double final_regret = 0.0;
  double sum_q = 0.0;
  std::vector<int> alphas;  // exact where available, else greedy
  bool alphas_exact = true;
  std::vector<int> alpha_tildes;
  std::vector<double> etas;
  std::vector<double> gammas;
  std::vector<std::uint64_t> oracle_calls;  // per round
  int lemma2_checked = 0;
  int lemma2_violations = 0;
  int lemma2_advisory_violations = 0;  // against greedy alpha, not asserted
  double worst_lemma2_ratio = 0.0;     // max Q_t / bound
};

struct RegretSummary {
  int round = 0;
  double mean = 0.0;
  double std_error = 0.0;
};

struct Assertion {
  std::string name;
  bool passed = true;
  std::string detail;
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<ReplicationResult> replications;
  std::vector<RegretSummary> regret;  // per checkpoint, across replications
  std::vector<BoundReport> bounds;
  std::vector<Assertion> assertions;
  double runtime_seconds = 0.0;
  double mean_oracle_calls = 0.0;

  bool all_passed() const;
  // Summary at the checkpoint `round`; throws if it is not a checkpoint.
  const RegretSummary& regret_at(int round) const;
};

// 1, 2, 5, 10, 20, 50, ... below T, then T.
std::vector<int> checkpoint_rounds(int horizon);

std::unique_ptr<Policy> make_policy(const ExperimentConfig& config,
                                    const DecisionSet& set);

// Runs one replication on its own streams derived from (base_seed, rep).
ReplicationResult run_replication(const ExperimentConfig& config, int rep);

// Replications may run on `jobs` threads; results are keyed by replication
// index so the output does not depend on scheduling.
ExperimentResult run_experiment(const ExperimentConfig& config, int jobs = 1);

inline constexpr const char* kCsvHeader =
    "rep,round,policy,cum_loss,cum_regret,rate,q_t,alpha_t,alpha_tilde_t,oracle_calls";

void write_csv(std::ostream& out, const ExperimentResult& result);
void emit_csv(const ExperimentResult& result, const std::string& path);
std::vector<CheckpointRow> parse_csv(std::istream& in);

nlohmann::json summary_json(const ExperimentResult& result);
void emit_summary(const ExperimentResult& result, const std::string& path);

// Mean and standard error of the mean (0 for a single value).
std::pair<double, double> mean_and_se(const std::vector<double>& values);

}  // namespace sidebandit
