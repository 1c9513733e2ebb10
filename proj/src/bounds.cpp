#include "sidebandit/bounds.hpp"

#include <cmath>

#include "sidebandit/fplix.hpp"

namespace sidebandit {

double lemma2_bound(int alpha, int d, double gamma) {
  if (alpha < 1) throw UsageError("alpha must be at least 1");
  if (!(gamma > 0.0)) throw UsageError("gamma must be positive");
  const double a = alpha;
  return 2.0 * a * std::log(1.0 + (ceil_d2_over(d, gamma) + d) / a) + 2.0;
}

double lemma4_bound(int alpha, int d, int m, double c) {
  if (alpha < 1) throw UsageError("alpha must be at least 1");
  if (m < 1) throw UsageError("m must be at least 1");
  if (!(c > 0.0 && c < 1.0)) {
    throw UsageError("combinatorial Q bound needs c in (0, 1), got " + std::to_string(c));
  }
  const double a = alpha;
  return 2.0 * m * a * std::log(1.0 + (m * ceil_d2_over(d, c) + d) / a) +
         2.0 * m;
}

double corollary1_bound(int d, std::span<const int> alphas) {
  if (d < 2) throw UsageError("Exp3-IX regret bound needs d >= 2");
  const double log_d = std::log(static_cast<double>(d));
  const double dd = d;
  double sum = 0.0;
  for (std::size_t k = 0; k < alphas.size(); ++k) {
    const double a = alphas[k];
    if (a < 1) throw UsageError("alpha must be at least 1");
    const double t = static_cast<double>(k + 1);
    const double h =
        std::log(1.0 + (std::ceil(dd * dd * std::sqrt(t * dd / log_d)) + dd) / a);
    sum += h * a + 1.0;
  }
  return 4.0 * std::sqrt((dd + 2.0 * sum) * log_d);
}

double theorem1_realized_bound(int d, double sum_q) {
  if (d < 2) throw UsageError("realized Exp3-IX bound needs d >= 2");
  return 4.0 * std::sqrt((d + sum_q) * std::log(static_cast<double>(d)));
}

Theorem2Bound theorem2_explicit_bound(int m, int d, std::span<const double> etas,
                                      std::span<const double> gammas,
                                      std::span<const int> alphas) {
  if (etas.size() != gammas.size() || etas.size() != alphas.size()) {
    throw UsageError("FPL-IX bound needs one eta, gamma and alpha per round");
  }
  constexpr double kBelowOne = 1.0 - 1e-9;
  Theorem2Bound bound;
  const double final_eta = etas.empty() ? fplix_rate(d, m, 0.0) : etas.back();
  bound.leader_term = m * (std::log(static_cast<double>(d)) + 1.0) / final_eta;
  for (std::size_t t = 0; t < etas.size(); ++t) {
    const double gamma = gammas[t];
    if (!(gamma > 0.0 && gamma <= 0.5)) {
      throw UsageError("FPL-IX bound needs 0 < gamma_t <= 1/2");
    }
    double c = gamma / (1.0 - gamma);
    if (c >= kBelowOne) {
      c = kBelowOne;
      ++bound.boundary_touches;
    }
    bound.stability_term += 4.0 * m * etas[t] * lemma4_bound(alphas[t], d, m, c);
    bound.bias_term += gamma * lemma4_bound(alphas[t], d, m, gamma);
  }
  bound.value = bound.leader_term + bound.stability_term + bound.bias_term;
  return bound;
}

double corollary2_shape(int d, int m, std::span<const int> alphas,
                        double c_ratio) {
  double sum = 0.0;
  for (int a : alphas) sum += a;
  return std::pow(m, 1.5) *
         std::sqrt((d + c_ratio * sum) * (std::log(static_cast<double>(d)) + 1.0));
}

QTildeEstimate qtilde_diagnostic(const DecisionSet& set,
                                 std::span<const double> cumulative, double eta,
                                 const ObservabilityGraph& graph, double c,
                                 Rng& rng, int samples) {
  constexpr int kBatches = 20;
  if (samples < kBatches) throw UsageError("qtilde_diagnostic needs more samples");
  if (!(c > 0.0)) throw UsageError("c must be positive");
  const int d = set.dimension();
  const int per_batch = samples / kBatches;

  QTildeEstimate est;
  est.q.assign(d, 0.0);
  est.o.assign(d, 0.0);
  std::vector<double> batch_values;
  for (int b = 0; b < kBatches; ++b) {
    std::vector<double> q(d, 0.0);
    std::vector<double> o(d, 0.0);
    for (int s = 0; s < per_batch; ++s) {
      const ActionVector v = perturb_and_lead(cumulative, eta, set, rng);
      const auto observed = observation_indicators(graph, v);
      for (int i = 0; i < d; ++i) {
        q[i] += v[i];
        o[i] += observed[i];
      }
    }
    double value = 0.0;
    for (int i = 0; i < d; ++i) {
      est.q[i] += q[i];
      est.o[i] += o[i];
      value += (q[i] / per_batch) / (o[i] / per_batch + c);
    }
    batch_values.push_back(value);
  }
  const double total = static_cast<double>(per_batch) * kBatches;
  for (int i = 0; i < d; ++i) {
    est.q[i] /= total;
    est.o[i] /= total;
    est.value += est.q[i] / (est.o[i] + c);
  }
  double mean = 0.0;
  for (double v : batch_values) mean += v;
  mean /= kBatches;
  double var = 0.0;
  for (double v : batch_values) var += (v - mean) * (v - mean);
  est.std_error = std::sqrt(var / (kBatches - 1) / kBatches);
  return est;
}

double empirical_regret(std::span<const RoundLog> logs,
                        const EnvironmentTrace& trace, const DecisionSet& set,
                        std::optional<int> rounds) {
  const int n = rounds.value_or(static_cast<int>(logs.size()));
  if (n > static_cast<int>(logs.size()) || n > trace.horizon()) {
    throw UsageError("regret requested beyond the logged rounds");
  }
  std::vector<double> totals(trace.dimension(), 0.0);
  double incurred = 0.0;
  for (int t = 0; t < n; ++t) {
    incurred += logs[t].loss;
    const auto row = trace.losses.row(t);
    for (int i = 0; i < trace.dimension(); ++i) totals[i] += row[i];
  }
  const ActionVector best = set.minimize(totals);
  return incurred - dot(best, totals);
}

}  // namespace sidebandit
