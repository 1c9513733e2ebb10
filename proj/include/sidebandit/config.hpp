#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "sidebandit/environment.hpp"
#include "sidebandit/graph.hpp"

namespace sidebandit {

enum class PolicyKind {
  kExp3Ix,
  kExp3,
  kExp3Dom,
  kFplIx,
  kHedgeFullInfo,
  kFplFullInfo,
};

std::string to_string(PolicyKind kind);
PolicyKind parse_policy_kind(const std::string& name);

struct ExperimentConfig {
  std::string name = "experiment";
  PolicyKind policy = PolicyKind::kExp3Ix;
  std::string decision_set = "simplex";
  LossKind losses = loss_kind::IidUniform{};
  GraphKind graph = graph_kind::Empty{};
  bool per_round_graph = false;
  int d = 2;
  int horizon = 1;
  int replications = 1;
  std::uint64_t base_seed = 0;
  std::string output;  // directory for CSV/summary, empty = none
  bool bound_checks = true;
  int exact_alpha_limit = kDefaultExactAlphaLimit;
  std::optional<double> exp3_explore;
  std::optional<double> exp3dom_gamma;
};

// Throws UsageError with a message naming the offending field.
void validate(const ExperimentConfig& config);

// See configs/README.md for the schema. Relative file paths inside the config
// are resolved against `base_dir`.
ExperimentConfig parse_config(const nlohmann::json& json,
                              const std::string& base_dir = "");
ExperimentConfig load_config(const std::string& path);

nlohmann::json to_json(const ExperimentConfig& config);

}  // namespace sidebandit
