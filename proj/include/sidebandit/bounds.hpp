#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sidebandit/decision_set.hpp"
#include "sidebandit/environment.hpp"
#include "sidebandit/graph.hpp"
#include "sidebandit/policy.hpp"
#include "sidebandit/rng.hpp"

namespace sidebandit {

// Inputs a bound was evaluated on, kept next to the value for the report.
struct BoundInputs {
  int d = 0;
  int m = 1;
  int horizon = 0;
  std::vector<int> alpha;
  std::vector<int> alpha_tilde;
  std::vector<double> gamma;
  std::vector<double> q;
};

struct BoundReport {
  std::string name;
  std::vector<double> per_round_values;
  double final_value = 0.0;
  BoundInputs inputs;
  std::vector<std::string> notes;
};

// Deterministic cap on the Exp3-IX quantity Q_t:
//   2 a log(1 + (ceil(d^2/gamma) + d)/a) + 2.
double lemma2_bound(int alpha, int d, double gamma);

// Cap on Q~_t(c) in the combinatorial setting, c in (0, 1):
//   2 m a log(1 + (m ceil(d^2/c) + d)/a) + 2m.
double lemma4_bound(int alpha, int d, int m, double c);

// Closed-form Exp3-IX regret bound on realized alpha_1..alpha_T:
//   4 sqrt((d + 2 sum_t (H_t a_t + 1)) log d),
//   H_t = log(1 + (ceil(d^2 sqrt(t d / log d)) + d)/a_t).
double corollary1_bound(int d, std::span<const int> alphas);

// 4 sqrt((d + sum_t Q_t) log d) on one run's realized Q_t. The guarantee is
// on the expectation; per-run comparisons are diagnostic.
double theorem1_realized_bound(int d, double sum_q);

struct Theorem2Bound {
  double value = 0.0;
  double leader_term = 0.0;
  double stability_term = 0.0;
  double bias_term = 0.0;
  int boundary_touches = 0;  // rounds where gamma/(1-gamma) hit 1
};

// Fully explicit FPL-IX bound
//   m (log d + 1)/eta_T + 4m sum eta_t B(gamma_t/(1-gamma_t)) + sum gamma_t B(gamma_t)
// with B(c) = lemma4_bound(alpha_t, d, m, c). c = 1 is evaluated at 1 - 1e-9.
// With no rounds, eta_T is the schedule's first rate.
Theorem2Bound theorem2_explicit_bound(int m, int d, std::span<const double> etas,
                                      std::span<const double> gammas,
                                      std::span<const int> alphas);

// sqrt((d + C sum alpha_t)(log d + 1)) m^{3/2}, the FPL-IX rate shape without
// its unquantified log factor. Reported, never asserted.
double corollary2_shape(int d, int m, std::span<const int> alphas, double c_ratio);

struct QTildeEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::vector<double> q;  // marginals of V
  std::vector<double> o;  // marginals of O
};

// Monte Carlo estimate of Q~(c) = sum_i q_i / (o_i + c) for the FPL
// distribution at (cumulative, eta) on graph G. Diagnostics only.
QTildeEstimate qtilde_diagnostic(const DecisionSet& set,
                                 std::span<const double> cumulative, double eta,
                                 const ObservabilityGraph& graph, double c,
                                 Rng& rng, int samples);

// sum_t V_t . l_t - min_{v in S} v . (sum_t l_t) over the first `rounds`
// rounds (all of them by default).
double empirical_regret(std::span<const RoundLog> logs,
                        const EnvironmentTrace& trace, const DecisionSet& set,
                        std::optional<int> rounds = std::nullopt);

}  // namespace sidebandit
