#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "sidebandit/decision_set.hpp"
#include "sidebandit/graph.hpp"
#include "sidebandit/policy.hpp"
#include "sidebandit/rng.hpp"

namespace sidebandit {

// V = argmin_{v in S} v . (eta * L - Z) for a given perturbation Z.
ActionVector perturb_and_lead(std::span<const double> cumulative, double eta,
                              const DecisionSet& set,
                              std::span<const double> perturbation);

// Same, with fresh Z_i ~ Exp(1) drawn from rng in index order.
ActionVector perturb_and_lead(std::span<const double> cumulative, double eta,
                              const DecisionSet& set, Rng& rng);

// O_i = 1 iff some j in the support of V has (j -> i) in G.
std::vector<std::uint8_t> observation_indicators(const ObservabilityGraph& graph,
                                                 const ActionVector& action);

struct ResampleOutcome {
  std::vector<std::uint64_t> counts;  // K_i, 0 where O_i = 0
  std::vector<std::uint64_t> caps;    // U_i, 0 where O_i = 0
  std::vector<std::uint8_t> capped;   // K_i was set by U_i
  std::vector<std::uint8_t> hard_capped;
  std::uint64_t oracle_calls = 0;
  bool hit_hard_cap() const;
};

// Produces one independent copy O'(k) of the observation indicators.
using CopySource = std::function<void(std::vector<std::uint8_t>& copy)>;

// K_i = min({k : O'_i(k) = 1} U {U_i}) with U_i ~ Geometric(gamma), for every
// i with O_i = 1. One copy serves every pending component; sampling stops when
// none is pending, or after hard_cap copies (K_i = hard_cap, flagged).
ResampleOutcome resample_counts(std::span<const std::uint8_t> observed,
                                double gamma, const CopySource& next_copy,
                                Rng& rng, std::uint64_t hard_cap);

// Copies are fresh perturbed leaders under the same cumulative estimates and
// eta, pushed through observation_indicators on G.
ResampleOutcome geometric_resample(const ObservabilityGraph& graph,
                                   std::span<const std::uint8_t> observed,
                                   double gamma, const DecisionSet& set,
                                   std::span<const double> cumulative,
                                   double eta, Rng& rng,
                                   std::uint64_t hard_cap);

// ceil((d / gamma) * ln(d * 1e6)).
std::uint64_t default_hard_cap(int d, double gamma);

// l_i = K_i * O_i * loss_i; reads only revealed entries.
std::vector<double> fplix_estimate(const ResampleOutcome& resample,
                                   const RevealedLosses& feedback);

// eta_t = gamma_t = min(1/2, sqrt((log d + 1) / (m (d + sum alpha~)))).
double fplix_rate(int d, int m, double sum_alpha_tilde);

struct FplIxState {
  std::vector<double> cumulative_estimates;
  double sum_alpha_tilde = 0.0;
  int round = 1;
};

class FplIxPolicy final : public Policy {
 public:
  FplIxPolicy(const DecisionSet& set);

  std::string name() const override { return "fplix"; }
  int dimension() const override { return set_.dimension(); }
  ActionVector act(const ObservabilityGraph* graph, Rng& rng) override;
  void update(const ObservabilityGraph& graph, const RevealedLosses& feedback,
              Rng& rng) override;
  PolicyDiagnostics diagnostics() const override { return diag_; }
  std::span<const double> last_estimate() const override { return estimate_; }

  const FplIxState& state() const { return state_; }
  const ResampleOutcome& last_resample() const { return resample_; }
  // Warned once: m d <= 4 lies outside the rate schedule's assumption.
  bool outside_rate_assumption() const { return outside_assumption_; }

 private:
  const DecisionSet& set_;
  FplIxState state_;
  double rate_ = 0.0;
  ActionVector action_;
  std::vector<double> estimate_;
  ResampleOutcome resample_;
  PolicyDiagnostics diag_;
  bool outside_assumption_ = false;
};

// Full-information FPL with exponential perturbations, eta fixed at
// sqrt((log d + 1) / (m T)). Comparison baseline only.
class FplFullInfoPolicy final : public Policy {
 public:
  FplFullInfoPolicy(const DecisionSet& set, int horizon);

  std::string name() const override { return "fpl_full_info"; }
  int dimension() const override { return set_.dimension(); }
  GraphAccess graph_access() const override { return GraphAccess::kFullInformation; }
  ActionVector act(const ObservabilityGraph* graph, Rng& rng) override;
  void update(const ObservabilityGraph& graph, const RevealedLosses& feedback,
              Rng& rng) override;
  PolicyDiagnostics diagnostics() const override { return diag_; }
  std::span<const double> last_estimate() const override { return estimate_; }

 private:
  const DecisionSet& set_;
  double eta_;
  std::vector<double> cumulative_;
  std::vector<double> estimate_;
  PolicyDiagnostics diag_;
};

}  // namespace sidebandit
