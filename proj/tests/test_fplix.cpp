#include <doctest.h>

#include "oracles.hpp"
#include "sidebandit/fplix.hpp"
#include "sidebandit/verify.hpp"

using namespace sidebandit;

namespace {

std::vector<double> random_scores(int d, Rng& rng) {
  std::vector<double> s(d);
  for (double& v : s) v = 10.0 * rng.uniform() - 5.0;
  return s;
}

}  // namespace

TEST_CASE("oracles match brute force") {
  Rng rng(33);
  for (int k = 0; k < 1000; ++k) {
    const int d = 1 + static_cast<int>(rng.below(12));
    const auto score = random_scores(d, rng);
    const auto simplex = simplex_oracle(score);
    const auto ref1 = oracle::mset_min(score, 1);
    REQUIRE(oracle::value_of(simplex, score) == oracle::value_of(ref1, score));
    CHECK(support(simplex).size() == 1);

    const int m = 1 + static_cast<int>(rng.below(d));
    const auto v = mset_oracle(score, m);
    const auto ref = oracle::mset_min(score, m);
    CHECK(support(v).size() == std::size_t(m));
    CHECK(oracle::value_of(v, score) == doctest::Approx(oracle::value_of(ref, score)));
  }
}

TEST_CASE("oracle ties break toward the lowest index") {
  const std::vector<double> flat(5, 1.0);
  CHECK(support(simplex_oracle(flat)) == std::vector<int>{0});
  CHECK(support(mset_oracle(flat, 3)) == std::vector<int>{0, 1, 2});
}

TEST_CASE("decision sets") {
  auto simplex = make_decision_set("simplex", 4);
  CHECK(simplex->max_support() == 1);
  CHECK(simplex->enumerate()->size() == 4);
  auto msets = make_decision_set("msets(3)", 6);
  CHECK(msets->max_support() == 3);
  CHECK(msets->name() == "msets(3)");
  const auto all = msets->enumerate();
  REQUIRE(all.has_value());
  CHECK(all->size() == 20);
  for (const auto& v : *all) CHECK(support(v).size() == 3);
  CHECK_THROWS_AS(make_decision_set("msets(7)", 6), UsageError);
  CHECK_THROWS_AS(make_decision_set("msets(0)", 6), UsageError);
  CHECK_THROWS_AS(make_decision_set("hypercube", 6), UsageError);
  const std::vector<double> wrong(5, 0.0);
  CHECK_THROWS_AS(msets->minimize(wrong), UsageError);
}

TEST_CASE("perturbed leader with injected noise") {
  auto set = make_decision_set("msets(2)", 4);
  const std::vector<double> cumulative{1.0, 2.0, 3.0, 4.0};
  const std::vector<double> z{0.0, 0.0, 5.0, 0.0};
  // eta L - Z = (0.5, 1, -3.5, 2): pick {0, 2}.
  CHECK(support(perturb_and_lead(cumulative, 0.5, *set, z)) == std::vector<int>{0, 2});
  Rng rng(1);
  for (int k = 0; k < 200; ++k) {
    const auto s = random_scores(4, rng);
    std::vector<double> zz(4);
    for (double& v : zz) v = rng.exponential();
    std::vector<double> shifted(4);
    for (int i = 0; i < 4; ++i) shifted[i] = 0.3 * s[i] - zz[i];
    const auto v = perturb_and_lead(s, 0.3, *set, zz);
    CHECK(oracle::value_of(v, shifted) ==
          doctest::Approx(oracle::value_of(oracle::mset_min(shifted, 2), shifted)));
  }
}

TEST_CASE("observation indicators cover the out-neighborhood of the support") {
  const std::vector<std::pair<int, int>> e{{0, 1}, {2, 3}};
  const ObservabilityGraph g(5, e);
  const ActionVector v{1, 0, 1, 0, 0};
  CHECK(observation_indicators(g, v) == std::vector<std::uint8_t>{1, 1, 1, 1, 0});
}

TEST_CASE("resampling with copies that always observe gives K = 1") {
  Rng rng(2);
  const std::vector<std::uint8_t> observed{1, 0, 1};
  const CopySource always = [](std::vector<std::uint8_t>& c) { std::fill(c.begin(), c.end(), 1); };
  const auto r = resample_counts(observed, 0.2, always, rng, 100);
  CHECK(r.counts == std::vector<std::uint64_t>{1, 0, 1});
  // No copy at all when every U_i happens to be 1.
  CHECK(r.oracle_calls <= 1);
  CHECK_FALSE(r.hit_hard_cap());
}

TEST_CASE("resampling with copies that never observe gives K = U") {
  Rng rng(3);
  const std::vector<std::uint8_t> observed{1, 1};
  const CopySource never = [](std::vector<std::uint8_t>& c) { std::fill(c.begin(), c.end(), 0); };
  for (int k = 0; k < 100; ++k) {
    const auto r = resample_counts(observed, 0.3, never, rng, 1000000);
    for (int i = 0; i < 2; ++i) {
      CHECK(r.capped[i] == 1);
      CHECK(r.counts[i] == r.caps[i]);
    }
    // One copy per step until the larger cap resolves; the step that
    // resolves it needs no copy.
    CHECK(r.oracle_calls == std::max(r.caps[0], r.caps[1]) - 1);
  }
}

TEST_CASE("hard cap stops resampling and is flagged") {
  Rng rng(4);
  const std::vector<std::uint8_t> observed{1};
  const CopySource never = [](std::vector<std::uint8_t>& c) { c[0] = 0; };
  // gamma tiny: U is almost surely far above the cap.
  const auto r = resample_counts(observed, 1e-9, never, rng, 5);
  CHECK(r.hit_hard_cap());
  CHECK(r.counts[0] == 5);
  CHECK(r.oracle_calls == 5);
  CHECK_THROWS_AS(resample_counts(observed, 0.0, never, rng, 5), UsageError);
  CHECK_THROWS_AS(resample_counts(observed, 0.5, never, rng, 0), UsageError);
}

TEST_CASE("mean of K matches 1 / (o + (1 - o) gamma)") {
  Rng rng(5);
  const std::vector<std::uint8_t> observed{1};
  for (double o : {0.2, 0.7}) {
    for (double gamma : {0.1, 0.5}) {
      const CopySource bern = [&](std::vector<std::uint8_t>& c) { c[0] = rng.bernoulli(o); };
      const int n = 100000;
      double sum = 0.0, sum_sq = 0.0;
      for (int k = 0; k < n; ++k) {
        const double v = static_cast<double>(resample_counts(observed, gamma, bern, rng, 1 << 20).counts[0]);
        sum += v;
        sum_sq += v * v;
      }
      const double mean = sum / n;
      const double se = std::sqrt((sum_sq / n - mean * mean) / n);
      const double expected = 1.0 / (o + (1.0 - o) * gamma);
      CHECK(std::abs(mean - expected) < 4.0 * se);
      CHECK(expected <= 1.0 / o);
    }
  }
}

TEST_CASE("rate schedule and hard cap") {
  CHECK(fplix_rate(4, 2, 0.0) == 0.5);
  CHECK(fplix_rate(16, 2, 0.0) == doctest::Approx(0.3433560798500489).epsilon(1e-14));
  CHECK(fplix_rate(10, 3, 6.0) == doctest::Approx(0.2623048914985053).epsilon(1e-14));
  CHECK(default_hard_cap(4, 0.5) == 122);
  CHECK(default_hard_cap(12, 0.1) == 1957);
}

TEST_CASE("complete graph gives K = 1 everywhere") {
  auto set = make_decision_set("msets(2)", 5);
  FplIxPolicy policy(*set);
  const auto g = oracle::complete(5);
  Rng rng(6);
  const std::vector<double> losses{0.1, 0.9, 0.4, 0.3, 0.6};
  for (int t = 0; t < 30; ++t) {
    policy.act(nullptr, rng);
    const RevealedLosses feedback(losses, std::vector<std::uint8_t>(5, 1));
    policy.update(g, feedback, rng);
    for (int i = 0; i < 5; ++i) {
      CHECK(policy.last_resample().counts[i] == 1);
      CHECK(policy.last_estimate()[i] == losses[i]);
    }
    CHECK(policy.diagnostics().oracle_calls <= 1);
  }
}

TEST_CASE("FPL-IX reads only revealed losses") {
  auto set = make_decision_set("msets(2)", 8);
  FplIxPolicy policy(*set);
  Rng rng(7);
  std::vector<double> losses(8);
  for (double& v : losses) v = rng.uniform();
  for (int t = 0; t < 50; ++t) {
    const auto g = random_graph(8, rng);
    const ActionVector v = policy.act(nullptr, rng);
    const RevealedLosses feedback(losses, observation_indicators(g, v));
    policy.update(g, feedback, rng);
    for (int i = 0; i < 8; ++i) {
      CHECK(feedback.reads()[i] <= feedback.observed()[i]);
      if (!feedback.observed()[i]) CHECK(policy.last_estimate()[i] == 0.0);
    }
  }
}

TEST_CASE("small instances are flagged outside the rate assumption") {
  auto tiny = make_decision_set("msets(2)", 2);
  CHECK(FplIxPolicy(*tiny).outside_rate_assumption());
  auto fine = make_decision_set("msets(2)", 6);
  CHECK_FALSE(FplIxPolicy(*fine).outside_rate_assumption());
}
