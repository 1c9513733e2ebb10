#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "sidebandit/decision_set.hpp"
#include "sidebandit/graph.hpp"
#include "sidebandit/policy.hpp"
#include "sidebandit/rng.hpp"

namespace sidebandit {

namespace loss_kind {
struct IidBernoulli {
  std::vector<double> means;
};
struct IidUniform {};
// Bernoulli losses with mean 0.5 everywhere except one component at
// 0.5 - gap; that component advances by one every `period` rounds.
struct Switching {
  int period = 1;
  double gap = 0.0;
};
struct FromFile {
  std::string path;
};
}  // namespace loss_kind

using LossKind = std::variant<loss_kind::IidBernoulli, loss_kind::IidUniform,
                              loss_kind::Switching, loss_kind::FromFile>;

namespace graph_kind {
struct Empty {};
struct Complete {};
struct ErdosRenyi {
  double r = 0.0;
};
struct CliquePartition {
  int cliques = 1;
};
struct Star {
  int center = 0;
};
struct FromFile {
  std::string path;
};
}  // namespace graph_kind

using GraphKind =
    std::variant<graph_kind::Empty, graph_kind::Complete, graph_kind::ErdosRenyi,
                 graph_kind::CliquePartition, graph_kind::Star,
                 graph_kind::FromFile>;

// Row-major T x d matrix of losses in [0, 1].
class LossMatrix {
 public:
  LossMatrix(int horizon, int d) : horizon_(horizon), d_(d), values_(std::size_t(horizon) * d) {}
  int horizon() const { return horizon_; }
  int dimension() const { return d_; }
  std::span<double> row(int t) { return {values_.data() + std::size_t(t) * d_, std::size_t(d_)}; }
  std::span<const double> row(int t) const {
    return {values_.data() + std::size_t(t) * d_, std::size_t(d_)};
  }
  friend bool operator==(const LossMatrix&, const LossMatrix&) = default;

 private:
  int horizon_;
  int d_;
  std::vector<double> values_;
};

LossMatrix gen_losses(const LossKind& kind, int d, int horizon, Rng& rng);

// CSV: T rows of d comma-separated values in [0, 1].
LossMatrix read_losses_csv(std::istream& in);

ObservabilityGraph gen_graph(const GraphKind& kind, int d, Rng& rng);

// Oblivious adversary: everything is materialized before the first action.
struct EnvironmentTrace {
  LossMatrix losses;
  std::vector<ObservabilityGraph> graphs;  // one (fixed) or T (per round)

  int horizon() const { return losses.horizon(); }
  int dimension() const { return losses.dimension(); }
  const ObservabilityGraph& graph_at(int t) const {
    return graphs.size() == 1 ? graphs.front() : graphs[t];
  }
};

EnvironmentTrace make_trace(const LossKind& losses, const GraphKind& graph,
                            bool per_round, int d, int horizon, Rng& loss_rng,
                            Rng& graph_rng);

struct ProtocolOptions {
  // Exact alpha is logged per round when d <= this limit.
  int exact_alpha_limit = kDefaultExactAlphaLimit;
  // Record which loss entries the policy read and throw if it read a
  // component that was never revealed.
  bool audit_reads = true;
};

// Plays `policy` against the trace. Per round the policy acts knowing only
// past feedback, then receives G_t and the losses of the out-neighborhood of
// its action's support. Exp3-DOM style policies get G_t before acting.
std::vector<RoundLog> run_protocol(Policy& policy, const EnvironmentTrace& trace,
                                   Rng& rng, const ProtocolOptions& options = {});

}  // namespace sidebandit
