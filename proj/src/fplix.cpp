#include "sidebandit/fplix.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

namespace sidebandit {

ActionVector perturb_and_lead(std::span<const double> cumulative, double eta,
                              const DecisionSet& set,
                              std::span<const double> perturbation) {
  if (!(eta >= 0.0)) throw UsageError("FPL learning rate must be nonnegative");
  if (cumulative.size() != perturbation.size()) {
    throw UsageError("perturbation has wrong length");
  }
  std::vector<double> score(cumulative.size());
  for (std::size_t i = 0; i < score.size(); ++i) {
    score[i] = eta * cumulative[i] - perturbation[i];
  }
  return set.minimize(score);
}

ActionVector perturb_and_lead(std::span<const double> cumulative, double eta,
                              const DecisionSet& set, Rng& rng) {
  std::vector<double> z(cumulative.size());
  for (double& v : z) v = rng.exponential();
  return perturb_and_lead(cumulative, eta, set, z);
}

std::vector<std::uint8_t> observation_indicators(const ObservabilityGraph& graph,
                                                 const ActionVector& action) {
  if (static_cast<int>(action.size()) != graph.size()) {
    throw UsageError("action and graph dimensions differ");
  }
  std::vector<std::uint8_t> observed(action.size(), 0);
  for (NodeId j = 0; j < graph.size(); ++j) {
    if (!action[j]) continue;
    for (NodeId i : graph.out_edges(j)) observed[i] = 1;
  }
  return observed;
}

bool ResampleOutcome::hit_hard_cap() const {
  return std::any_of(hard_capped.begin(), hard_capped.end(),
                     [](std::uint8_t f) { return f != 0; });
}

ResampleOutcome resample_counts(std::span<const std::uint8_t> observed,
                                double gamma, const CopySource& next_copy,
                                Rng& rng, std::uint64_t hard_cap) {
  if (!(gamma > 0.0 && gamma <= 1.0)) {
    throw UsageError("resampling parameter gamma must lie in (0, 1]");
  }
  if (hard_cap < 1) throw UsageError("hard cap must be positive");
  const std::size_t d = observed.size();
  ResampleOutcome out;
  out.counts.assign(d, 0);
  out.caps.assign(d, 0);
  out.capped.assign(d, 0);
  out.hard_capped.assign(d, 0);

  std::vector<std::size_t> pending;
  for (std::size_t i = 0; i < d; ++i) {
    if (!observed[i]) continue;
    out.caps[i] = rng.geometric(gamma);
    pending.push_back(i);
  }

  std::vector<std::uint8_t> copy(d, 0);
  for (std::uint64_t k = 1; !pending.empty(); ++k) {
    if (k > hard_cap) {
      // Every pending U_i is at least k, so min(U_i, hard_cap) = hard_cap.
      for (std::size_t i : pending) {
        out.counts[i] = hard_cap;
        out.hard_capped[i] = 1;
      }
      break;
    }
    // Components whose cap is reached resolve without a fresh copy.
    std::erase_if(pending, [&](std::size_t i) {
      if (out.caps[i] != k) return false;
      out.counts[i] = k;
      out.capped[i] = 1;
      return true;
    });
    if (pending.empty()) break;
    std::fill(copy.begin(), copy.end(), 0);
    next_copy(copy);
    ++out.oracle_calls;
    std::erase_if(pending, [&](std::size_t i) {
      if (!copy[i]) return false;
      out.counts[i] = k;
      return true;
    });
  }
  return out;
}

ResampleOutcome geometric_resample(const ObservabilityGraph& graph,
                                   std::span<const std::uint8_t> observed,
                                   double gamma, const DecisionSet& set,
                                   std::span<const double> cumulative,
                                   double eta, Rng& rng,
                                   std::uint64_t hard_cap) {
  const CopySource copies = [&](std::vector<std::uint8_t>& copy) {
    copy = observation_indicators(graph, perturb_and_lead(cumulative, eta, set, rng));
  };
  ResampleOutcome out = resample_counts(observed, gamma, copies, rng, hard_cap);
  if (out.hit_hard_cap()) {
    std::cerr << "warning: geometric resampling stopped at the hard cap of "
              << hard_cap << " copies\n";
  }
  return out;
}

std::uint64_t default_hard_cap(int d, double gamma) {
  const double cap = std::ceil(d / gamma * std::log(d * 1e6));
  return cap >= 1e18 ? static_cast<std::uint64_t>(1e18)
                     : static_cast<std::uint64_t>(std::max(cap, 1.0));
}

std::vector<double> fplix_estimate(const ResampleOutcome& resample,
                                   const RevealedLosses& feedback) {
  std::vector<double> estimate(feedback.size(), 0.0);
  for (int i = 0; i < feedback.size(); ++i) {
    if (feedback.is_observed(i)) {
      estimate[i] = static_cast<double>(resample.counts[i]) * feedback.at(i);
    }
  }
  return estimate;
}

double fplix_rate(int d, int m, double sum_alpha_tilde) {
  if (d < 2) throw UsageError("FPL-IX rate needs d >= 2");
  if (m < 1) throw UsageError("FPL-IX rate needs m >= 1");
  if (!(sum_alpha_tilde >= 0.0)) throw UsageError("sum of alpha~ must be nonnegative");
  const double raw = std::sqrt((std::log(static_cast<double>(d)) + 1.0) /
                               (m * (d + sum_alpha_tilde)));
  return std::min(0.5, raw);
}

// --- FPL-IX ------------------------------------------------------------------

FplIxPolicy::FplIxPolicy(const DecisionSet& set) : set_(set) {
  const int d = set.dimension();
  if (d < 2) throw UsageError("FPL-IX needs d >= 2");
  state_.cumulative_estimates.assign(d, 0.0);
  if (set.max_support() * d <= 4) {
    outside_assumption_ = true;
    std::cerr << "warning: m*d = " << set.max_support() * d
              << " <= 4; FPL-IX rate schedule used outside its assumption\n";
  }
}

ActionVector FplIxPolicy::act(const ObservabilityGraph*, Rng& rng) {
  rate_ = fplix_rate(set_.dimension(), set_.max_support(), state_.sum_alpha_tilde);
  action_ = perturb_and_lead(state_.cumulative_estimates, rate_, set_, rng);
  return action_;
}

void FplIxPolicy::update(const ObservabilityGraph& graph,
                         const RevealedLosses& feedback, Rng& rng) {
  const double gamma = rate_;
  const auto observed = observation_indicators(graph, action_);
  resample_ = geometric_resample(graph, observed, gamma, set_,
                                 state_.cumulative_estimates, rate_, rng,
                                 default_hard_cap(set_.dimension(), gamma));
  estimate_ = fplix_estimate(resample_, feedback);
  const int alpha_tilde = independence_number_greedy(graph);
  for (std::size_t i = 0; i < estimate_.size(); ++i) {
    state_.cumulative_estimates[i] += estimate_[i];
  }
  state_.sum_alpha_tilde += alpha_tilde;
  ++state_.round;
  diag_ = PolicyDiagnostics{
      .rate = rate_,
      .gamma = gamma,
      .alpha_tilde = alpha_tilde,
      .oracle_calls = resample_.oracle_calls,
      .hard_cap_hits = resample_.hit_hard_cap() ? 1u : 0u};
}

// --- full-information FPL ----------------------------------------------------

FplFullInfoPolicy::FplFullInfoPolicy(const DecisionSet& set, int horizon)
    : set_(set), cumulative_(set.dimension(), 0.0) {
  if (horizon < 1) throw UsageError("FPL needs the horizon T");
  eta_ = std::sqrt((std::log(static_cast<double>(set.dimension())) + 1.0) /
                   (static_cast<double>(set.max_support()) * horizon));
}

ActionVector FplFullInfoPolicy::act(const ObservabilityGraph*, Rng& rng) {
  return perturb_and_lead(cumulative_, eta_, set_, rng);
}

void FplFullInfoPolicy::update(const ObservabilityGraph&,
                               const RevealedLosses& feedback, Rng&) {
  estimate_.assign(cumulative_.size(), 0.0);
  for (int i = 0; i < feedback.size(); ++i) {
    estimate_[i] = feedback.at(i);
    cumulative_[i] += estimate_[i];
  }
  diag_ = PolicyDiagnostics{.rate = eta_, .oracle_calls = 1};
}

}  // namespace sidebandit
