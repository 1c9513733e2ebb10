#include "sidebandit/config.hpp"

#include <filesystem>
#include <fstream>

#include "sidebandit/decision_set.hpp"

namespace sidebandit {

namespace {

using nlohmann::json;

template <class T>
T field(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) {
    throw UsageError(where + ": missing required field '" + key + "'");
  }
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw UsageError(where + "." + key + ": " + e.what());
  }
}

template <class T>
T field_or(const json& obj, const char* key, T fallback, const std::string& where) {
  return obj.contains(key) ? field<T>(obj, key, where) : fallback;
}

std::string resolve(const std::string& path, const std::string& base_dir) {
  if (base_dir.empty() || std::filesystem::path(path).is_absolute()) return path;
  return (std::filesystem::path(base_dir) / path).string();
}

LossKind parse_losses(const json& obj, int d, const std::string& base_dir) {
  const std::string where = "losses";
  const auto kind = field<std::string>(obj, "kind", where);
  if (kind == "iid_bernoulli") {
    if (obj.contains("means")) {
      return loss_kind::IidBernoulli{field<std::vector<double>>(obj, "means", where)};
    }
    // Shorthand: `best` components at base - gap, the rest at base.
    const double base = field_or<double>(obj, "base", 0.5, where);
    const double gap = field<double>(obj, "gap", where);
    const int best = field_or<int>(obj, "best", 1, where);
    if (best < 1 || best > d) throw UsageError("losses.best must lie in [1, d]");
    std::vector<double> means(d, base);
    for (int i = 0; i < best; ++i) means[i] = base - gap;
    return loss_kind::IidBernoulli{means};
  }
  if (kind == "iid_uniform") return loss_kind::IidUniform{};
  if (kind == "switching") {
    return loss_kind::Switching{field<int>(obj, "period", where),
                                field<double>(obj, "gap", where)};
  }
  if (kind == "from_file") {
    return loss_kind::FromFile{resolve(field<std::string>(obj, "path", where), base_dir)};
  }
  throw UsageError("losses.kind '" + kind +
                   "' unknown (iid_bernoulli, iid_uniform, switching, from_file)");
}

GraphKind parse_graph(const json& obj, const std::string& base_dir) {
  const std::string where = "graph";
  const auto kind = field<std::string>(obj, "kind", where);
  if (kind == "empty") return graph_kind::Empty{};
  if (kind == "complete") return graph_kind::Complete{};
  if (kind == "erdos_renyi") return graph_kind::ErdosRenyi{field<double>(obj, "r", where)};
  if (kind == "clique_partition") {
    return graph_kind::CliquePartition{field<int>(obj, "c", where)};
  }
  if (kind == "star") return graph_kind::Star{field_or<int>(obj, "center", 0, where)};
  if (kind == "from_file") {
    return graph_kind::FromFile{resolve(field<std::string>(obj, "path", where), base_dir)};
  }
  throw UsageError("graph.kind '" + kind +
                   "' unknown (empty, complete, erdos_renyi, clique_partition, star, from_file)");
}

}  // namespace

std::string to_string(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::kExp3Ix:
      return "exp3ix";
    case PolicyKind::kExp3:
      return "exp3";
    case PolicyKind::kExp3Dom:
      return "exp3dom";
    case PolicyKind::kFplIx:
      return "fplix";
    case PolicyKind::kHedgeFullInfo:
      return "hedge_full_info";
    case PolicyKind::kFplFullInfo:
      return "fpl_full_info";
  }
  return "unknown";
}

PolicyKind parse_policy_kind(const std::string& name) {
  for (PolicyKind kind : {PolicyKind::kExp3Ix, PolicyKind::kExp3, PolicyKind::kExp3Dom,
                          PolicyKind::kFplIx, PolicyKind::kHedgeFullInfo,
                          PolicyKind::kFplFullInfo}) {
    if (to_string(kind) == name) return kind;
  }
  throw UsageError("unknown policy '" + name +
                   "' (exp3ix, exp3, exp3dom, fplix, hedge_full_info, fpl_full_info)");
}

void validate(const ExperimentConfig& config) {
  if (config.d < 2) throw UsageError("d must be at least 2");
  if (config.horizon < 1) throw UsageError("T must be at least 1");
  if (config.replications < 1) throw UsageError("replications must be at least 1");
  if (config.exact_alpha_limit < 0 || config.exact_alpha_limit > 64) {
    throw UsageError("exact_alpha_limit must lie in [0, 64]");
  }
  const auto set = make_decision_set(config.decision_set, config.d);
  const bool simplex_only = config.policy == PolicyKind::kExp3Ix ||
                            config.policy == PolicyKind::kExp3 ||
                            config.policy == PolicyKind::kExp3Dom ||
                            config.policy == PolicyKind::kHedgeFullInfo;
  if (simplex_only && set->name() != "simplex") {
    throw UsageError("policy " + to_string(config.policy) +
                     " requires decision_set \"simplex\" (got \"" +
                     config.decision_set + "\")");
  }
  if (config.exp3dom_gamma && !(*config.exp3dom_gamma >= 0.0 && *config.exp3dom_gamma < 1.0)) {
    throw UsageError("exp3dom gamma must lie in [0, 1)");
  }
  if (config.exp3_explore && !(*config.exp3_explore >= 0.0 && *config.exp3_explore <= 1.0)) {
    throw UsageError("exp3 explore must lie in [0, 1]");
  }
}

ExperimentConfig parse_config(const json& obj, const std::string& base_dir) {
  if (!obj.is_object()) throw UsageError("config must be a JSON object");
  const std::string where = "config";
  ExperimentConfig config;
  config.name = field_or<std::string>(obj, "name", config.name, where);
  config.policy = parse_policy_kind(field<std::string>(obj, "policy", where));
  config.decision_set = field_or<std::string>(obj, "decision_set", "simplex", where);
  config.d = field<int>(obj, "d", where);
  config.horizon = field<int>(obj, "T", where);
  config.replications = field_or<int>(obj, "replications", 1, where);
  config.base_seed = field_or<std::uint64_t>(obj, "base_seed", 0, where);
  config.output = field_or<std::string>(obj, "output", "", where);
  config.bound_checks = field_or<bool>(obj, "bound_checks", true, where);
  config.exact_alpha_limit =
      field_or<int>(obj, "exact_alpha_limit", kDefaultExactAlphaLimit, where);
  config.losses = parse_losses(field<json>(obj, "losses", where), config.d, base_dir);
  const json graph = field_or<json>(obj, "graph", json{{"kind", "empty"}}, where);
  config.graph = parse_graph(graph, base_dir);
  config.per_round_graph = field_or<bool>(graph, "per_round", false, "graph");
  if (obj.contains("policy_params")) {
    const json& params = obj.at("policy_params");
    if (params.contains("explore")) config.exp3_explore = field<double>(params, "explore", "policy_params");
    if (params.contains("gamma")) config.exp3dom_gamma = field<double>(params, "gamma", "policy_params");
  }
  validate(config);
  return config;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path);
  json obj;
  try {
    obj = json::parse(in);
  } catch (const json::parse_error& e) {
    throw UsageError(path + ": " + e.what());
  }
  return parse_config(obj, std::filesystem::path(path).parent_path().string());
}

nlohmann::json to_json(const ExperimentConfig& config) {
  json obj{{"name", config.name},
           {"policy", to_string(config.policy)},
           {"decision_set", config.decision_set},
           {"d", config.d},
           {"T", config.horizon},
           {"replications", config.replications},
           {"base_seed", config.base_seed},
           {"bound_checks", config.bound_checks},
           {"exact_alpha_limit", config.exact_alpha_limit}};
  std::visit(
      [&](const auto& k) {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, loss_kind::IidBernoulli>) {
          obj["losses"] = {{"kind", "iid_bernoulli"}, {"means", k.means}};
        } else if constexpr (std::is_same_v<K, loss_kind::IidUniform>) {
          obj["losses"] = {{"kind", "iid_uniform"}};
        } else if constexpr (std::is_same_v<K, loss_kind::Switching>) {
          obj["losses"] = {{"kind", "switching"}, {"period", k.period}, {"gap", k.gap}};
        } else {
          obj["losses"] = {{"kind", "from_file"}, {"path", k.path}};
        }
      },
      config.losses);
  json graph;
  std::visit(
      [&](const auto& k) {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, graph_kind::Empty>) {
          graph = {{"kind", "empty"}};
        } else if constexpr (std::is_same_v<K, graph_kind::Complete>) {
          graph = {{"kind", "complete"}};
        } else if constexpr (std::is_same_v<K, graph_kind::ErdosRenyi>) {
          graph = {{"kind", "erdos_renyi"}, {"r", k.r}};
        } else if constexpr (std::is_same_v<K, graph_kind::CliquePartition>) {
          graph = {{"kind", "clique_partition"}, {"c", k.cliques}};
        } else if constexpr (std::is_same_v<K, graph_kind::Star>) {
          graph = {{"kind", "star"}, {"center", k.center}};
        } else {
          graph = {{"kind", "from_file"}, {"path", k.path}};
        }
      },
      config.graph);
  graph["per_round"] = config.per_round_graph;
  obj["graph"] = graph;
  if (config.exp3_explore || config.exp3dom_gamma) {
    json params = json::object();
    if (config.exp3_explore) params["explore"] = *config.exp3_explore;
    if (config.exp3dom_gamma) params["gamma"] = *config.exp3dom_gamma;
    obj["policy_params"] = params;
  }
  if (!config.output.empty()) obj["output"] = config.output;
  return obj;
}

}  // namespace sidebandit
