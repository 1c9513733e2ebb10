#include "sidebandit/environment.hpp"

#include <fstream>
#include <istream>
#include <sstream>

#include "sidebandit/fplix.hpp"

namespace sidebandit {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void fill_bernoulli_row(std::span<double> row, std::span<const double> means,
                        Rng& rng) {
  for (std::size_t i = 0; i < row.size(); ++i) {
    row[i] = rng.bernoulli(means[i]) ? 1.0 : 0.0;
  }
}

LossMatrix load_losses(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open loss file " + path);
  return read_losses_csv(in);
}

}  // namespace

LossMatrix gen_losses(const LossKind& kind, int d, int horizon, Rng& rng) {
  if (d < 1 || horizon < 0) throw UsageError("bad loss matrix shape");
  LossMatrix losses(horizon, d);
  std::visit(
      Overloaded{
          [&](const loss_kind::IidBernoulli& k) {
            if (static_cast<int>(k.means.size()) != d) {
              throw UsageError("iid_bernoulli needs one mean per component");
            }
            for (double mu : k.means) {
              if (!(mu >= 0.0 && mu <= 1.0)) {
                throw UsageError("Bernoulli mean " + std::to_string(mu) +
                                 " outside [0, 1]");
              }
            }
            for (int t = 0; t < horizon; ++t) {
              fill_bernoulli_row(losses.row(t), k.means, rng);
            }
          },
          [&](const loss_kind::IidUniform&) {
            for (int t = 0; t < horizon; ++t) {
              for (double& v : losses.row(t)) v = rng.uniform();
            }
          },
          [&](const loss_kind::Switching& k) {
            if (k.period < 1) throw UsageError("switching period must be positive");
            if (!(k.gap >= 0.0 && k.gap <= 0.5)) {
              throw UsageError("switching gap must lie in [0, 0.5]");
            }
            std::vector<double> means(d, 0.5);
            for (int t = 0; t < horizon; ++t) {
              const int best = (t / k.period) % d;
              std::fill(means.begin(), means.end(), 0.5);
              means[best] = 0.5 - k.gap;
              fill_bernoulli_row(losses.row(t), means, rng);
            }
          },
          [&](const loss_kind::FromFile& k) {
            LossMatrix loaded = load_losses(k.path);
            if (loaded.dimension() != d || loaded.horizon() < horizon) {
              throw UsageError("loss file " + k.path + " has shape " +
                               std::to_string(loaded.horizon()) + "x" +
                               std::to_string(loaded.dimension()) +
                               ", need at least " + std::to_string(horizon) +
                               "x" + std::to_string(d));
            }
            for (int t = 0; t < horizon; ++t) {
              std::copy(loaded.row(t).begin(), loaded.row(t).end(),
                        losses.row(t).begin());
            }
          },
      },
      kind);
  return losses;
}

LossMatrix read_losses_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<double> row;
    std::stringstream fields(line);
    std::string field;
    while (std::getline(fields, field, ',')) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(field, &used);
      } catch (const std::exception&) {
        throw UsageError("bad loss value '" + field + "'");
      }
      if (!(v >= 0.0 && v <= 1.0)) {
        throw UsageError("loss value " + field + " outside [0, 1]");
      }
      row.push_back(v);
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw UsageError("ragged loss file: row " + std::to_string(rows.size() + 1));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty() || rows.front().empty()) throw UsageError("empty loss file");
  LossMatrix losses(static_cast<int>(rows.size()), static_cast<int>(rows.front().size()));
  for (std::size_t t = 0; t < rows.size(); ++t) {
    std::copy(rows[t].begin(), rows[t].end(), losses.row(static_cast<int>(t)).begin());
  }
  return losses;
}

ObservabilityGraph gen_graph(const GraphKind& kind, int d, Rng& rng) {
  if (d < 1) throw UsageError("graph needs d >= 1");
  std::vector<std::pair<NodeId, NodeId>> edges;
  std::optional<ObservabilityGraph> loaded;
  std::visit(
      Overloaded{
          [&](const graph_kind::Empty&) {},
          [&](const graph_kind::Complete&) {
            for (NodeId j = 0; j < d; ++j) {
              for (NodeId i = 0; i < d; ++i) edges.emplace_back(j, i);
            }
          },
          [&](const graph_kind::ErdosRenyi& k) {
            if (!(k.r >= 0.0 && k.r <= 1.0)) {
              throw UsageError("erdos_renyi probability must lie in [0, 1]");
            }
            for (NodeId j = 0; j < d; ++j) {
              for (NodeId i = 0; i < d; ++i) {
                if (i != j && rng.bernoulli(k.r)) edges.emplace_back(j, i);
              }
            }
          },
          [&](const graph_kind::CliquePartition& k) {
            if (k.cliques < 1 || k.cliques > d) {
              throw UsageError("clique_partition needs 1 <= c <= d");
            }
            // Contiguous blocks: node v belongs to clique v * c / d.
            for (NodeId j = 0; j < d; ++j) {
              for (NodeId i = 0; i < d; ++i) {
                if (j * k.cliques / d == i * k.cliques / d) edges.emplace_back(j, i);
              }
            }
          },
          [&](const graph_kind::Star& k) {
            if (k.center < 0 || k.center >= d) throw UsageError("star center out of range");
            for (NodeId i = 0; i < d; ++i) edges.emplace_back(k.center, i);
          },
          [&](const graph_kind::FromFile& k) {
            loaded = read_graph_file(k.path);
            if (loaded->size() != d) {
              throw UsageError("graph file " + k.path + " has d = " +
                               std::to_string(loaded->size()) + ", expected " +
                               std::to_string(d));
            }
          },
      },
      kind);
  if (loaded) return *loaded;
  return ObservabilityGraph(d, edges);
}

EnvironmentTrace make_trace(const LossKind& losses, const GraphKind& graph,
                            bool per_round, int d, int horizon, Rng& loss_rng,
                            Rng& graph_rng) {
  EnvironmentTrace trace{gen_losses(losses, d, horizon, loss_rng), {}};
  const int count = per_round ? horizon : 1;
  trace.graphs.reserve(std::max(count, 1));
  for (int t = 0; t < std::max(count, 1); ++t) {
    trace.graphs.push_back(gen_graph(graph, d, graph_rng));
  }
  return trace;
}

std::vector<RoundLog> run_protocol(Policy& policy, const EnvironmentTrace& trace,
                                   Rng& rng, const ProtocolOptions& options) {
  const int d = trace.dimension();
  if (policy.dimension() != d) {
    throw UsageError("policy dimension " + std::to_string(policy.dimension()) +
                     " does not match trace dimension " + std::to_string(d));
  }
  const GraphAccess access = policy.graph_access();
  std::vector<RoundLog> logs;
  logs.reserve(trace.horizon());

  // Per-graph statistics are cached while the graph stays the same.
  const ObservabilityGraph* cached_graph = nullptr;
  std::optional<int> alpha;
  int alpha_greedy = 0;

  for (int t = 0; t < trace.horizon(); ++t) {
    const ObservabilityGraph& graph = trace.graph_at(t);
    const auto losses = trace.losses.row(t);

    const ActionVector action = policy.act(
        access == GraphAccess::kBeforeAction ? &graph : nullptr, rng);
    if (static_cast<int>(action.size()) != d) {
      throw ProtocolViolation("policy returned an action of wrong dimension");
    }

    std::vector<std::uint8_t> observed =
        access == GraphAccess::kFullInformation
            ? std::vector<std::uint8_t>(d, 1)
            : observation_indicators(graph, action);
    const RevealedLosses feedback(losses, observed);
    policy.update(graph, feedback, rng);

    if (options.audit_reads) {
      const auto reads = feedback.reads();
      for (int i = 0; i < d; ++i) {
        if (reads[i] && !observed[i]) {
          throw ProtocolViolation("policy read unrevealed component " + std::to_string(i));
        }
      }
    }

    if (&graph != cached_graph) {
      cached_graph = &graph;
      alpha.reset();
      if (d <= options.exact_alpha_limit) {
        alpha = independence_number_exact(graph, options.exact_alpha_limit);
      }
      alpha_greedy = independence_number_greedy(graph);
    }

    const PolicyDiagnostics diag = policy.diagnostics();
    RoundLog log;
    log.round = t + 1;
    log.action = support(action);
    log.loss = dot(action, losses);
    log.rate = diag.rate;
    log.gamma = diag.gamma;
    log.q_t = diag.q_t;
    log.alpha = alpha;
    log.alpha_tilde = diag.alpha_tilde.value_or(alpha_greedy);
    log.oracle_calls = diag.oracle_calls;
    for (int i = 0; i < d; ++i) {
      if (observed[i]) log.observed.push_back(i);
    }
    log.graph_access = access;
    logs.push_back(std::move(log));
  }
  return logs;
}

}  // namespace sidebandit
