#include <doctest.h>

#include <numeric>

#include "oracles.hpp"
#include "sidebandit/exp3ix.hpp"

using namespace sidebandit;

TEST_CASE("Q on the 5-cycle with uniform p") {
  const std::vector<double> p(5, 0.2);
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i < 5; ++i) e.emplace_back(i, (i + 1) % 5);
  const auto directed = observation_probabilities(ObservabilityGraph(5, e), p);
  for (double v : directed) CHECK(v == doctest::Approx(0.4));
  CHECK(q_value(p, directed, 0.2) == doctest::Approx(1.6666666666666665).epsilon(1e-14));

  const auto both = observation_probabilities(oracle::cycle(5), p);
  for (double v : both) CHECK(v == doctest::Approx(0.6));
  CHECK(q_value(p, both, 0.2) == doctest::Approx(1.25));
}

TEST_CASE("adaptive rate") {
  CHECK(exp3ix_rate(10, 0.0) == doctest::Approx(0.47985259121880813).epsilon(1e-15));
  CHECK(exp3ix_rate(10, 1.0) == doctest::Approx(0.45752149407969156).epsilon(1e-15));
  CHECK_THROWS_AS(exp3ix_rate(1, 0.0), UsageError);
  CHECK_THROWS_AS(exp3ix_rate(3, -1.0), UsageError);
}

TEST_CASE("weights are stable for large cumulative losses") {
  const std::vector<double> big{1e6, 1e6 + 1.0, 1e6 + 2.0};
  const auto p = exp3_weights(big, 1.0);
  const double z = 1.0 + std::exp(-1.0) + std::exp(-2.0);
  CHECK(p[0] == doctest::Approx(1.0 / z));
  CHECK(p[2] == doctest::Approx(std::exp(-2.0) / z));
  const std::vector<double> inf{0.0, INFINITY};
  CHECK_THROWS_AS(exp3_weights(inf, 1.0), UsageError);
  CHECK_THROWS_AS(exp3_weights(big, -1.0), UsageError);
}

TEST_CASE("eta = 0 samples uniformly") {
  const int d = 5;
  const int n = 200000;
  const std::vector<double> cumulative{3.0, 0.0, 9.0, 1.0, 4.0};
  const auto p = exp3_weights(cumulative, 0.0);
  Rng rng(11);
  std::vector<int> counts(d, 0);
  for (int k = 0; k < n; ++k) ++counts[sample_index(p, rng)];
  const double se = std::sqrt(0.2 * 0.8 / n);
  for (int c : counts) CHECK(std::abs(c / double(n) - 0.2) < 4.0 * se);
}

TEST_CASE("sample_index skips zero-mass entries") {
  const std::vector<double> p{0.0, 1.0, 0.0};
  Rng rng(1);
  for (int k = 0; k < 1000; ++k) CHECK(sample_index(p, rng) == 1);
  const std::vector<double> none{0.0, 0.0};
  CHECK_THROWS_AS(sample_index(none, rng), UsageError);
}

TEST_CASE("complete graph estimate is loss / (1 + gamma) exactly") {
  const int d = 6;
  const auto g = oracle::complete(d);
  Exp3IxPolicy policy(d);
  Rng rng(3);
  const std::vector<double> losses{0.1, 0.7, 0.3, 1.0, 0.0, 0.45};
  for (int t = 0; t < 20; ++t) {
    const ActionVector a = policy.act(nullptr, rng);
    CHECK(support(a).size() == 1);
    const RevealedLosses feedback(losses, std::vector<std::uint8_t>(d, 1));
    const double gamma = exp3ix_rate(d, policy.state().sum_q);
    policy.update(g, feedback, rng);
    for (int i = 0; i < d; ++i) CHECK(policy.last_estimate()[i] == losses[i] / (1.0 + gamma));
    CHECK(policy.diagnostics().q_t.value() == doctest::Approx(1.0 / (1.0 + gamma)));
  }
}

TEST_CASE("empty graph estimate touches only the played arm") {
  const int d = 4;
  const ObservabilityGraph g(d);
  Exp3IxPolicy policy(d);
  Rng rng(8);
  const std::vector<double> losses{0.2, 0.4, 0.6, 0.8};
  const ActionVector a = policy.act(nullptr, rng);
  const int j = support(a).front();
  const auto p = std::vector<double>(policy.last_distribution().begin(),
                                     policy.last_distribution().end());
  const double gamma = exp3ix_rate(d, 0.0);
  std::vector<std::uint8_t> obs(d, 0);
  obs[j] = 1;
  RevealedLosses feedback(losses, obs);
  policy.update(g, feedback, rng);
  for (int i = 0; i < d; ++i) {
    if (i == j) {
      CHECK(policy.last_estimate()[i] == doctest::Approx(losses[i] / (p[i] + gamma)));
    } else {
      CHECK(policy.last_estimate()[i] == 0.0);
    }
  }
  CHECK(feedback.reads()[j] == 1);
  CHECK(std::accumulate(feedback.reads().begin(), feedback.reads().end(), 0) == 1);
}

TEST_CASE("reading an unrevealed loss is a protocol violation") {
  const std::vector<double> losses{0.1, 0.2};
  const RevealedLosses feedback(losses, {1, 0});
  CHECK(feedback.at(0) == 0.1);
  CHECK_THROWS_AS(feedback.at(1), ProtocolViolation);
}

TEST_CASE("IX estimate is optimistic in expectation") {
  // E[l^_i] = l_i o_i / (o_i + gamma), computed exactly by enumerating I_t.
  Rng rng(21);
  for (int k = 0; k < 50; ++k) {
    const int d = 2 + static_cast<int>(rng.below(6));
    std::vector<std::pair<int, int>> e;
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b)
        if (a != b && rng.bernoulli(0.4)) e.emplace_back(a, b);
    const ObservabilityGraph g(d, e);
    std::vector<double> p(d), losses(d);
    double total = 0.0;
    for (double& v : p) total += (v = rng.uniform());
    for (double& v : p) v /= total;
    for (double& v : losses) v = rng.uniform();
    const double gamma = 0.05 + 0.9 * rng.uniform();
    const auto o = oracle::observe_probs(g, p);
    std::vector<double> expectation(d, 0.0);
    for (int j = 0; j < d; ++j) {
      std::vector<std::uint8_t> obs(d, 0);
      for (int i = 0; i < d; ++i) obs[i] = g.has_edge(j, i);
      const RevealedLosses feedback(losses, obs);
      const auto est = ix_estimate(observe(feedback, j), o, gamma);
      for (int i = 0; i < d; ++i) expectation[i] += p[j] * est[i];
    }
    for (int i = 0; i < d; ++i) {
      CHECK(expectation[i] == doctest::Approx(losses[i] * o[i] / (o[i] + gamma)));
      CHECK(expectation[i] <= losses[i] + 1e-12);
    }
  }
}

TEST_CASE("Exp3 estimate is unbiased") {
  const std::vector<double> p{0.5, 0.3, 0.2};
  const std::vector<double> losses{0.9, 0.4, 0.6};
  Rng rng(4);
  const int n = 200000;
  std::vector<double> sum(3, 0.0), sum_sq(3, 0.0);
  for (int k = 0; k < n; ++k) {
    const int j = sample_index(p, rng);
    const auto est = exp3_estimate(j, losses[j], p);
    for (int i = 0; i < 3; ++i) {
      sum[i] += est[i];
      sum_sq[i] += est[i] * est[i];
    }
  }
  for (int i = 0; i < 3; ++i) {
    const double mean = sum[i] / n;
    const double se = std::sqrt((sum_sq[i] / n - mean * mean) / n);
    CHECK(std::abs(mean - losses[i]) < 4.0 * se);
  }
}

TEST_CASE("Exp3 reads only the played arm") {
  const int d = 5;
  Exp3Policy policy(d, 100);
  Rng rng(2);
  const auto g = oracle::complete(d);
  const std::vector<double> losses(d, 0.5);
  const int j = support(policy.act(nullptr, rng)).front();
  const RevealedLosses feedback(losses, std::vector<std::uint8_t>(d, 1));
  policy.update(g, feedback, rng);
  for (int i = 0; i < d; ++i) CHECK(feedback.reads()[i] == (i == j));
  CHECK_THROWS_AS(Exp3Policy(d, 0), UsageError);
  CHECK_THROWS_AS(Exp3Policy(d, 10, 1.5), UsageError);
}

TEST_CASE("Exp3-DOM needs the graph before acting") {
  const int d = 6;
  Exp3DomPolicy policy(d, 0.3);
  CHECK(policy.graph_access() == GraphAccess::kBeforeAction);
  Rng rng(9);
  CHECK_THROWS_AS(policy.act(nullptr, rng), ProtocolViolation);

  std::vector<std::pair<int, int>> e;
  for (int base : {0, 3})
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) e.emplace_back(base + a, base + b);
  const ObservabilityGraph g(d, e);
  policy.act(&g, rng);
  const auto dom = policy.last_dominating_set();
  CHECK(std::vector<int>(dom.begin(), dom.end()) == std::vector<int>{0, 3});
  const auto p = policy.last_distribution();
  // Uniform weights at the start: (1 - gamma)/d everywhere plus gamma/2 on {0, 3}.
  CHECK(p[0] == doctest::Approx(0.7 / 6 + 0.15));
  CHECK(p[1] == doctest::Approx(0.7 / 6));
  CHECK(std::accumulate(p.begin(), p.end(), 0.0) == doctest::Approx(1.0));
}

TEST_CASE("Hedge reads every loss") {
  HedgePolicy policy(3, 10);
  CHECK(policy.graph_access() == GraphAccess::kFullInformation);
  Rng rng(1);
  policy.act(nullptr, rng);
  const std::vector<double> losses{0.1, 0.2, 0.3};
  const RevealedLosses feedback(losses, {1, 1, 1});
  policy.update(ObservabilityGraph(3), feedback, rng);
  CHECK(std::vector<double>(policy.last_estimate().begin(), policy.last_estimate().end()) ==
        losses);
}
