#include "sidebandit/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>

#include "sidebandit/bounds.hpp"
#include "sidebandit/environment.hpp"
#include "sidebandit/exp3ix.hpp"
#include "sidebandit/fplix.hpp"

namespace sidebandit {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string describe(const char* fmt, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), fmt, a, b);
  return buf;
}

// Random point of the probability simplex; `peak` > 1 concentrates the mass.
std::vector<double> random_distribution(int d, Rng& rng) {
  const double peak = 1.0 + 4.0 * rng.uniform();
  std::vector<double> p(d);
  double total = 0.0;
  for (double& v : p) {
    v = std::pow(rng.exponential(), peak);
    total += v;
  }
  for (double& v : p) v /= total;
  return p;
}

void record(SuiteResult& suite, bool ok, double margin, std::string detail) {
  ++suite.cases;
  suite.worst_margin = std::max(suite.worst_margin, margin);
  if (!ok) {
    ++suite.failures;
    if (suite.failure_details.size() < 10) {
      suite.failure_details.push_back(std::move(detail));
    }
  }
}

}  // namespace

ObservabilityGraph random_graph(int d, Rng& rng) {
  switch (rng.below(6)) {
    case 0:
      return gen_graph(graph_kind::Empty{}, d, rng);
    case 1:
      return gen_graph(graph_kind::Complete{}, d, rng);
    case 2:
      return gen_graph(graph_kind::CliquePartition{1 + static_cast<int>(rng.below(d))}, d, rng);
    case 3:
      return gen_graph(graph_kind::Star{static_cast<int>(rng.below(d))}, d, rng);
    default:
      return gen_graph(graph_kind::ErdosRenyi{rng.uniform()}, d, rng);
  }
}

SuiteResult verify_lemma1(int cases, std::uint64_t seed) {
  const auto start = Clock::now();
  SuiteResult suite{.name = "lemma1"};
  Rng rng = Rng::derive(seed, 1, StreamRole::kVerify);
  for (int k = 0; k < cases; ++k) {
    const int d = 1 + static_cast<int>(rng.below(12));
    const ObservabilityGraph graph = random_graph(d, rng);
    const int m = 1 + static_cast<int>(rng.below(3));
    const double c = 0.01 + 0.99 * rng.uniform();
    std::vector<double> p(d);
    double total = 0.0;
    for (double& v : p) {
      v = rng.bernoulli(0.3) ? 0.0 : rng.uniform();
      total += v;
    }
    if (total > m) {
      for (double& v : p) v *= m / total;
    }
    const Lemma1Sides sides = lemma1_sides(graph, p, m, c);
    record(suite, sides.alpha_is_exact && sides.holds(), sides.lhs / sides.rhs,
           describe("lhs %.6g > rhs %.6g", sides.lhs, sides.rhs));
  }
  suite.seconds = seconds_since(start);
  return suite;
}

SuiteResult verify_lemma2(int cases, std::uint64_t seed) {
  const auto start = Clock::now();
  SuiteResult suite{.name = "lemma2"};
  Rng rng = Rng::derive(seed, 2, StreamRole::kVerify);
  for (int k = 0; k < cases; ++k) {
    const int d = 2 + static_cast<int>(rng.below(11));
    const ObservabilityGraph graph = random_graph(d, rng);
    const auto p = random_distribution(d, rng);
    const double gamma = 0.01 + 0.99 * rng.uniform();
    const auto o = observation_probabilities(graph, p);
    const double q = q_value(p, o, gamma);
    const double bound = lemma2_bound(independence_number_exact(graph), d, gamma);
    record(suite, q <= bound, q / bound, describe("Q %.6g > bound %.6g", q, bound));
  }
  suite.seconds = seconds_since(start);
  return suite;
}

SuiteResult verify_lemma4(int cases, std::uint64_t seed, int samples) {
  const auto start = Clock::now();
  SuiteResult suite{.name = "lemma4"};
  Rng rng = Rng::derive(seed, 4, StreamRole::kVerify);
  for (int k = 0; k < cases; ++k) {
    const int d = 2 + static_cast<int>(rng.below(9));
    const int m = 1 + static_cast<int>(rng.below(std::min(3, d)));
    const auto set = m == 1 && rng.bernoulli(0.5)
                         ? make_decision_set("simplex", d)
                         : make_decision_set("msets(" + std::to_string(m) + ")", d);
    const ObservabilityGraph graph = random_graph(d, rng);
    std::vector<double> cumulative(d);
    for (double& v : cumulative) v = 5.0 * rng.uniform();
    const double eta = 2.0 * rng.uniform();
    const double c = 0.01 + 0.98 * rng.uniform();
    const QTildeEstimate est = qtilde_diagnostic(*set, cumulative, eta, graph, c, rng, samples);
    const double bound = lemma4_bound(independence_number_exact(graph), d,
                                      set->max_support(), c);
    record(suite, est.value <= bound + 4.0 * est.std_error, est.value / bound,
           describe("Q~ %.6g > bound %.6g", est.value, bound));
  }
  suite.seconds = seconds_since(start);
  return suite;
}

SuiteResult verify_optimism(int cases, std::uint64_t seed, int draws) {
  constexpr double kFloor = 1e-9;  // floating-point slack when SE is 0
  const auto start = Clock::now();
  SuiteResult suite{.name = "optimism"};
  Rng rng = Rng::derive(seed, 3, StreamRole::kVerify);
  for (int k = 0; k < cases; ++k) {
    const int d = 2 + static_cast<int>(rng.below(7));
    const ObservabilityGraph graph = random_graph(d, rng);
    const auto p = random_distribution(d, rng);
    const double gamma = 0.01 + 0.99 * rng.uniform();
    std::vector<double> losses(d);
    for (double& v : losses) v = rng.uniform();
    const auto o = observation_probabilities(graph, p);

    // The estimate is a function of I_t alone, so tabulate it per action
    // through the production path and resample only I_t.
    std::vector<std::vector<double>> by_action(d);
    std::vector<double> weighted(d, 0.0);
    for (int a = 0; a < d; ++a) {
      ActionVector action(d, 0);
      action[a] = 1;
      const RevealedLosses feedback(losses, observation_indicators(graph, action));
      by_action[a] = ix_estimate(observe(feedback, a), o, gamma);
      for (int i = 0; i < d; ++i) weighted[a] += p[i] * by_action[a][i];
    }
    std::vector<long long> counts(d, 0);
    for (int n = 0; n < draws; ++n) ++counts[sample_index(p, rng)];

    // Sample mean from the draws; the standard error is the exact one for N
    // draws from p, since a sample estimate is 0 when a rare action never
    // shows up.
    auto moments = [&](auto value_of) {
      double sum = 0.0;
      double mean_p = 0.0;
      double sq_p = 0.0;
      for (int a = 0; a < d; ++a) {
        const double v = value_of(a);
        sum += counts[a] * v;
        mean_p += p[a] * v;
        sq_p += p[a] * v * v;
      }
      const double var = std::max(0.0, sq_p - mean_p * mean_p);
      return std::pair{sum / draws, std::sqrt(var / draws)};
    };

    bool ok = true;
    double worst = 0.0;
    std::string detail;
    for (int i = 0; i < d; ++i) {
      const auto [mean, se] = moments([&](int a) { return by_action[a][i]; });
      const double expected = losses[i] * o[i] / (o[i] + gamma);
      const double tol = std::max(4.0 * se, kFloor);
      worst = std::max(worst, std::abs(mean - expected) / tol);
      if (std::abs(mean - expected) > tol || mean > losses[i] + tol) {
        ok = false;
        detail = describe("component mean %.8g vs closed form %.8g", mean, expected);
      }
    }
    double biased = 0.0;
    double pl = 0.0;
    for (int i = 0; i < d; ++i) {
      pl += p[i] * losses[i];
      biased += p[i] * losses[i] / (o[i] + gamma);
    }
    const double expected_total = pl - gamma * biased;
    const auto [mean_total, se_total] = moments([&](int a) { return weighted[a]; });
    const double tol_total = std::max(4.0 * se_total, kFloor);
    worst = std::max(worst, std::abs(mean_total - expected_total) / tol_total);
    if (std::abs(mean_total - expected_total) > tol_total) {
      ok = false;
      detail = describe("sum p l^ mean %.8g vs bias identity %.8g", mean_total, expected_total);
    }
    record(suite, ok, worst, detail);
  }
  suite.seconds = seconds_since(start);
  return suite;
}

SuiteResult verify_resampling(std::uint64_t seed, int trials) {
  const auto start = Clock::now();
  SuiteResult suite{.name = "resampling"};
  Rng rng = Rng::derive(seed, 5, StreamRole::kVerify);
  const std::vector<std::uint8_t> observed{1};
  for (int oi = 1; oi <= 9; ++oi) {
    const double o = oi / 10.0;
    for (double gamma : {0.1, 0.3, 0.5}) {
      const CopySource bernoulli = [&](std::vector<std::uint8_t>& copy) {
        copy[0] = rng.bernoulli(o) ? 1 : 0;
      };
      const std::uint64_t cap = default_hard_cap(1, gamma);
      double sum = 0.0;
      for (int n = 0; n < trials; ++n) {
        sum += static_cast<double>(resample_counts(observed, gamma, bernoulli, rng, cap).counts[0]);
      }
      const double mean = sum / trials;
      const double expected = 1.0 / (o + (1.0 - o) * gamma);
      const double rel = std::abs(mean - expected) / expected;
      record(suite, rel <= 0.02, rel / 0.02,
             describe("mean K %.6g vs %.6g", mean, expected));
    }
  }
  suite.seconds = seconds_since(start);
  return suite;
}

}  // namespace sidebandit
