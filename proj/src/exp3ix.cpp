#include "sidebandit/exp3ix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace sidebandit {

std::string to_string(GraphAccess access) {
  switch (access) {
    case GraphAccess::kAfterAction:
      return "after_action";
    case GraphAccess::kBeforeAction:
      return "before_action";
    case GraphAccess::kFullInformation:
      return "full_information";
  }
  return "unknown";
}

std::vector<double> exp3_weights(std::span<const double> cumulative,
                                 double eta) {
  if (cumulative.empty()) throw UsageError("empty cumulative loss vector");
  if (!(eta >= 0.0) || !std::isfinite(eta)) {
    throw UsageError("learning rate must be finite and nonnegative");
  }
  for (double v : cumulative) {
    if (!std::isfinite(v)) throw UsageError("non-finite cumulative loss estimate");
  }
  const double lowest = *std::min_element(cumulative.begin(), cumulative.end());
  std::vector<double> p(cumulative.size());
  double total = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    p[i] = std::exp(-eta * (cumulative[i] - lowest));
    total += p[i];
  }
  for (double& v : p) v /= total;
  return p;
}

int sample_index(std::span<const double> p, Rng& rng) {
  const double u = rng.uniform();
  double running = 0.0;
  int last_positive = -1;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= 0.0) continue;
    running += p[i];
    last_positive = static_cast<int>(i);
    if (u < running) return last_positive;
  }
  // Rounding left u above the final cumulative sum.
  if (last_positive < 0) throw UsageError("distribution has no positive mass");
  return last_positive;
}

RoundObservation observe(const RevealedLosses& feedback, int chosen) {
  RoundObservation obs;
  obs.chosen = chosen;
  obs.observed.assign(feedback.observed().begin(), feedback.observed().end());
  obs.losses.assign(feedback.size(), 0.0);
  for (int i = 0; i < feedback.size(); ++i) {
    if (obs.observed[i]) obs.losses[i] = feedback.at(i);
  }
  return obs;
}

std::vector<double> ix_estimate(const RoundObservation& obs,
                                std::span<const double> o, double gamma) {
  if (!(gamma > 0.0)) throw UsageError("IX parameter gamma must be positive");
  if (o.size() != obs.observed.size()) throw UsageError("o has wrong length");
  std::vector<double> estimate(o.size(), 0.0);
  for (std::size_t i = 0; i < o.size(); ++i) {
    if (obs.observed[i]) estimate[i] = obs.losses[i] / (o[i] + gamma);
  }
  return estimate;
}

double q_value(std::span<const double> p, std::span<const double> o,
               double gamma) {
  if (p.size() != o.size()) throw UsageError("p and o lengths differ");
  double q = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) q += p[i] / (o[i] + gamma);
  return q;
}

std::vector<double> exp3_estimate(int chosen, double loss,
                                  std::span<const double> sampling) {
  std::vector<double> estimate(sampling.size(), 0.0);
  estimate.at(chosen) = loss / sampling[chosen];
  return estimate;
}

double exp3ix_rate(int d, double sum_q) {
  if (d < 2) throw UsageError("Exp3-IX rate needs d >= 2");
  if (!(sum_q >= 0.0)) throw UsageError("sum of Q must be nonnegative");
  return std::sqrt(std::log(static_cast<double>(d)) / (d + sum_q));
}

// --- Exp3-IX ---------------------------------------------------------------

Exp3IxPolicy::Exp3IxPolicy(int d) : d_(d) {
  if (d < 2) throw UsageError("Exp3-IX needs d >= 2");
  state_.cumulative_estimates.assign(d, 0.0);
}

ActionVector Exp3IxPolicy::act(const ObservabilityGraph*, Rng& rng) {
  rate_ = exp3ix_rate(d_, state_.sum_q);
  p_ = exp3_weights(state_.cumulative_estimates, rate_);
  chosen_ = sample_index(p_, rng);
  ActionVector action(d_, 0);
  action[chosen_] = 1;
  return action;
}

void Exp3IxPolicy::update(const ObservabilityGraph& graph,
                          const RevealedLosses& feedback, Rng&) {
  if (graph.size() != d_) throw UsageError("graph dimension mismatch");
  const double gamma = rate_;
  o_ = observation_probabilities(graph, p_);
  const RoundObservation obs = observe(feedback, chosen_);
  estimate_ = ix_estimate(obs, o_, gamma);
  const double q = q_value(p_, o_, gamma);
  for (int i = 0; i < d_; ++i) state_.cumulative_estimates[i] += estimate_[i];
  state_.sum_q += q;
  ++state_.round;
  diag_ = PolicyDiagnostics{.rate = rate_, .gamma = gamma, .q_t = q};
}

// --- Exp3 --------------------------------------------------------------------

Exp3Policy::Exp3Policy(int d, int horizon, double explore)
    : d_(d), explore_(explore), cumulative_(d, 0.0), estimate_(d, 0.0) {
  if (d < 2) throw UsageError("Exp3 needs d >= 2");
  if (horizon < 1) throw UsageError("Exp3 needs the horizon T in its config");
  if (!(explore >= 0.0 && explore <= 1.0)) {
    throw UsageError("Exp3 exploration must lie in [0, 1]");
  }
  eta_ = std::sqrt(std::log(static_cast<double>(d)) / (static_cast<double>(d) * horizon));
}

ActionVector Exp3Policy::act(const ObservabilityGraph*, Rng& rng) {
  sampling_ = exp3_weights(cumulative_, eta_);
  for (double& v : sampling_) v = (1.0 - explore_) * v + explore_ / d_;
  chosen_ = sample_index(sampling_, rng);
  ActionVector action(d_, 0);
  action[chosen_] = 1;
  return action;
}

void Exp3Policy::update(const ObservabilityGraph&, const RevealedLosses& feedback,
                        Rng&) {
  estimate_ = exp3_estimate(chosen_, feedback.at(chosen_), sampling_);
  cumulative_[chosen_] += estimate_[chosen_];
  diag_ = PolicyDiagnostics{.rate = eta_, .gamma = explore_};
}

// --- Exp3-DOM ----------------------------------------------------------------

Exp3DomPolicy::Exp3DomPolicy(int d, double gamma)
    : d_(d), gamma_(gamma), cumulative_(d, 0.0) {
  if (d < 1) throw UsageError("Exp3-DOM needs d >= 1");
  if (!(gamma >= 0.0 && gamma < 1.0)) throw UsageError("Exp3-DOM gamma must lie in [0, 1)");
}

ActionVector Exp3DomPolicy::act(const ObservabilityGraph* graph, Rng& rng) {
  if (graph == nullptr) {
    throw ProtocolViolation("Exp3-DOM needs the observability graph before acting");
  }
  dominating_ = greedy_dominating_set(*graph);
  sampling_ = exp3_weights(cumulative_, gamma_);
  const double mix = gamma_ / static_cast<double>(dominating_.size());
  for (double& v : sampling_) v *= 1.0 - gamma_;
  for (NodeId j : dominating_) sampling_[j] += mix;
  chosen_ = sample_index(sampling_, rng);
  ActionVector action(d_, 0);
  action[chosen_] = 1;
  return action;
}

void Exp3DomPolicy::update(const ObservabilityGraph& graph,
                           const RevealedLosses& feedback, Rng&) {
  o_ = observation_probabilities(graph, sampling_);
  const RoundObservation obs = observe(feedback, chosen_);
  estimate_.assign(d_, 0.0);
  for (int i = 0; i < d_; ++i) {
    if (obs.observed[i]) estimate_[i] = obs.losses[i] / o_[i];
    cumulative_[i] += estimate_[i];
  }
  diag_ = PolicyDiagnostics{.rate = gamma_, .gamma = gamma_};
}

// --- Hedge -------------------------------------------------------------------

HedgePolicy::HedgePolicy(int d, int horizon) : d_(d), cumulative_(d, 0.0) {
  if (d < 2) throw UsageError("Hedge needs d >= 2");
  if (horizon < 1) throw UsageError("Hedge needs the horizon T");
  eta_ = std::sqrt(8.0 * std::log(static_cast<double>(d)) / horizon);
}

ActionVector HedgePolicy::act(const ObservabilityGraph*, Rng& rng) {
  const auto p = exp3_weights(cumulative_, eta_);
  ActionVector action(d_, 0);
  action[sample_index(p, rng)] = 1;
  return action;
}

void HedgePolicy::update(const ObservabilityGraph&, const RevealedLosses& feedback,
                         Rng&) {
  estimate_.assign(d_, 0.0);
  for (int i = 0; i < d_; ++i) {
    estimate_[i] = feedback.at(i);
    cumulative_[i] += estimate_[i];
  }
  diag_ = PolicyDiagnostics{.rate = eta_};
}

}  // namespace sidebandit
