#pragma once

#include <span>
#include <vector>

#include "sidebandit/graph.hpp"
#include "sidebandit/policy.hpp"
#include "sidebandit/rng.hpp"

namespace sidebandit {

// Exponential weights p_i proportional to exp(-eta * L_i), max-shifted.
std::vector<double> exp3_weights(std::span<const double> cumulative, double eta);

// Inverse-CDF draw from p with a single uniform, cumulative sums in index
// order.
int sample_index(std::span<const double> p, Rng& rng);

struct RoundObservation {
  std::vector<std::uint8_t> observed;  // O_t
  std::vector<double> losses;          // valid where observed
  int chosen = 0;                      // I_t
};

RoundObservation observe(const RevealedLosses& feedback, int chosen);

// Implicit-exploration estimate: O_i * l_i / (o_i + gamma).
std::vector<double> ix_estimate(const RoundObservation& obs,
                                std::span<const double> o, double gamma);

// Q = sum_i p_i / (o_i + gamma).
double q_value(std::span<const double> p, std::span<const double> o,
               double gamma);

// Importance-weighted estimate of vanilla Exp3: loss / p_chosen on the
// chosen arm, zero elsewhere.
std::vector<double> exp3_estimate(int chosen, double loss,
                                  std::span<const double> sampling);

// eta_t = gamma_t = sqrt(log d / (d + sum of past Q)).
double exp3ix_rate(int d, double sum_q);

struct Exp3IxState {
  std::vector<double> cumulative_estimates;
  double sum_q = 0.0;
  int round = 1;
};

// Exp3-IX with the adaptive rate above. Never needs the graph before acting.
class Exp3IxPolicy final : public Policy {
 public:
  explicit Exp3IxPolicy(int d);

  std::string name() const override { return "exp3ix"; }
  int dimension() const override { return d_; }
  ActionVector act(const ObservabilityGraph* graph, Rng& rng) override;
  void update(const ObservabilityGraph& graph, const RevealedLosses& feedback,
              Rng& rng) override;
  PolicyDiagnostics diagnostics() const override { return diag_; }
  std::span<const double> last_estimate() const override { return estimate_; }

  const Exp3IxState& state() const { return state_; }
  std::span<const double> last_distribution() const { return p_; }
  std::span<const double> last_observation_probabilities() const { return o_; }

 private:
  int d_;
  Exp3IxState state_;
  double rate_ = 0.0;
  int chosen_ = -1;
  std::vector<double> p_;
  std::vector<double> o_;
  std::vector<double> estimate_;
  PolicyDiagnostics diag_;
};

// Vanilla Exp3: importance weighting on the played arm only, ignores side
// observations, fixed eta = sqrt(log d / (d T)), optional uniform mixing.
class Exp3Policy final : public Policy {
 public:
  Exp3Policy(int d, int horizon, double explore = 0.0);

  std::string name() const override { return "exp3"; }
  int dimension() const override { return d_; }
  ActionVector act(const ObservabilityGraph* graph, Rng& rng) override;
  void update(const ObservabilityGraph& graph, const RevealedLosses& feedback,
              Rng& rng) override;
  PolicyDiagnostics diagnostics() const override { return diag_; }
  std::span<const double> last_estimate() const override { return estimate_; }

  std::span<const double> last_distribution() const { return sampling_; }

 private:
  int d_;
  double eta_;
  double explore_;
  std::vector<double> cumulative_;
  std::vector<double> sampling_;
  std::vector<double> estimate_;
  int chosen_ = -1;
  PolicyDiagnostics diag_;
};

// Simplified Exp3-DOM: single gamma, no doubling, no bucketing. Mixes the
// exponential weights with the uniform distribution on a greedy dominating
// set of G_t, which it must see before acting.
class Exp3DomPolicy final : public Policy {
 public:
  Exp3DomPolicy(int d, double gamma);

  std::string name() const override { return "exp3dom"; }
  int dimension() const override { return d_; }
  GraphAccess graph_access() const override { return GraphAccess::kBeforeAction; }
  ActionVector act(const ObservabilityGraph* graph, Rng& rng) override;
  void update(const ObservabilityGraph& graph, const RevealedLosses& feedback,
              Rng& rng) override;
  PolicyDiagnostics diagnostics() const override { return diag_; }
  std::span<const double> last_estimate() const override { return estimate_; }

  std::span<const double> last_distribution() const { return sampling_; }
  std::span<const double> last_observation_probabilities() const { return o_; }
  std::span<const NodeId> last_dominating_set() const { return dominating_; }

 private:
  int d_;
  double gamma_;
  std::vector<double> cumulative_;
  std::vector<double> sampling_;
  std::vector<double> o_;
  std::vector<double> estimate_;
  std::vector<NodeId> dominating_;
  int chosen_ = -1;
  PolicyDiagnostics diag_;
};

// Full-information Hedge, eta = sqrt(8 log d / T). Comparison baseline only.
class HedgePolicy final : public Policy {
 public:
  HedgePolicy(int d, int horizon);

  std::string name() const override { return "hedge_full_info"; }
  int dimension() const override { return d_; }
  GraphAccess graph_access() const override { return GraphAccess::kFullInformation; }
  ActionVector act(const ObservabilityGraph* graph, Rng& rng) override;
  void update(const ObservabilityGraph& graph, const RevealedLosses& feedback,
              Rng& rng) override;
  PolicyDiagnostics diagnostics() const override { return diag_; }
  std::span<const double> last_estimate() const override { return estimate_; }

 private:
  int d_;
  double eta_;
  std::vector<double> cumulative_;
  std::vector<double> estimate_;
  PolicyDiagnostics diag_;
};

}  // namespace sidebandit
