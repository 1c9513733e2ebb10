#include <doctest.h>

#include <sstream>

#include "oracles.hpp"
#include "sidebandit/bounds.hpp"
#include "sidebandit/environment.hpp"
#include "sidebandit/exp3ix.hpp"
#include "sidebandit/fplix.hpp"

using namespace sidebandit;

namespace {

// Plays uniformly at random and never reads anything.
class UniformPolicy final : public Policy {
 public:
  explicit UniformPolicy(int d) : d_(d), estimate_(d, 0.0) {}
  std::string name() const override { return "uniform"; }
  int dimension() const override { return d_; }
  ActionVector act(const ObservabilityGraph* graph, Rng& rng) override {
    saw_graph_ = saw_graph_ || graph != nullptr;
    ActionVector a(d_, 0);
    a[rng.below(d_)] = 1;
    return a;
  }
  void update(const ObservabilityGraph&, const RevealedLosses&, Rng&) override {}
  PolicyDiagnostics diagnostics() const override { return {}; }
  std::span<const double> last_estimate() const override { return estimate_; }
  bool saw_graph_ = false;

 private:
  int d_;
  std::vector<double> estimate_;
};

// Tries to read every loss, revealed or not.
class PeekingPolicy final : public Policy {
 public:
  explicit PeekingPolicy(int d) : d_(d), estimate_(d, 0.0) {}
  std::string name() const override { return "peek"; }
  int dimension() const override { return d_; }
  ActionVector act(const ObservabilityGraph*, Rng&) override {
    ActionVector a(d_, 0);
    a[0] = 1;
    return a;
  }
  void update(const ObservabilityGraph&, const RevealedLosses& feedback, Rng&) override {
    for (int i = 0; i < d_; ++i) estimate_[i] = feedback.at(i);
  }
  PolicyDiagnostics diagnostics() const override { return {}; }
  std::span<const double> last_estimate() const override { return estimate_; }

 private:
  int d_;
  std::vector<double> estimate_;
};

}  // namespace

TEST_CASE("Bernoulli losses have the requested means") {
  Rng rng(1);
  const auto m = gen_losses(loss_kind::IidBernoulli{{0.2, 0.8}}, 2, 20000, rng);
  double s0 = 0.0, s1 = 0.0;
  for (int t = 0; t < m.horizon(); ++t) {
    for (double v : m.row(t)) CHECK((v == 0.0 || v == 1.0));
    s0 += m.row(t)[0];
    s1 += m.row(t)[1];
  }
  const double se = std::sqrt(0.16 / 20000);
  CHECK(std::abs(s0 / 20000 - 0.2) < 4 * se);
  CHECK(std::abs(s1 / 20000 - 0.8) < 4 * se);
}

TEST_CASE("loss generator rejects bad parameters") {
  Rng rng(1);
  CHECK_THROWS_AS(gen_losses(loss_kind::IidBernoulli{{0.5}}, 2, 5, rng), UsageError);
  CHECK_THROWS_AS(gen_losses(loss_kind::IidBernoulli{{0.5, 1.5}}, 2, 5, rng), UsageError);
  CHECK_THROWS_AS(gen_losses(loss_kind::Switching{0, 0.1}, 2, 5, rng), UsageError);
  CHECK_THROWS_AS(gen_losses(loss_kind::Switching{5, 0.7}, 2, 5, rng), UsageError);
  CHECK_THROWS(gen_losses(loss_kind::FromFile{"/nonexistent/losses.csv"}, 2, 5, rng));
}

TEST_CASE("switching with period T equals the iid instance") {
  const int d = 4, T = 500;
  const double gap = 0.15;
  Rng a(77), b(77);
  const auto sw = gen_losses(loss_kind::Switching{T, gap}, d, T, a);
  const auto iid = gen_losses(loss_kind::IidBernoulli{{0.5 - gap, 0.5, 0.5, 0.5}}, d, T, b);
  CHECK(sw == iid);
}

TEST_CASE("switching moves the best component") {
  const int d = 3, T = 30000;
  Rng rng(5);
  const auto m = gen_losses(loss_kind::Switching{10000, 0.3}, d, T, rng);
  for (int block = 0; block < 3; ++block) {
    std::vector<double> s(d, 0.0);
    for (int t = block * 10000; t < (block + 1) * 10000; ++t)
      for (int i = 0; i < d; ++i) s[i] += m.row(t)[i];
    CHECK(std::min_element(s.begin(), s.end()) - s.begin() == block);
  }
}

TEST_CASE("loss CSV parsing") {
  std::istringstream ok("0,1,0.5\n0.25,0.75,1\n");
  const auto m = read_losses_csv(ok);
  CHECK(m.horizon() == 2);
  CHECK(m.dimension() == 3);
  CHECK(m.row(1)[0] == 0.25);
  std::istringstream ragged("0,1\n0\n");
  CHECK_THROWS_AS(read_losses_csv(ragged), UsageError);
  std::istringstream range("0,1.5\n");
  CHECK_THROWS_AS(read_losses_csv(range), UsageError);
  std::istringstream junk("0,abc\n");
  CHECK_THROWS_AS(read_losses_csv(junk), UsageError);
  std::istringstream empty("");
  CHECK_THROWS_AS(read_losses_csv(empty), UsageError);
}

TEST_CASE("graph generators") {
  Rng rng(3);
  CHECK(gen_graph(graph_kind::Empty{}, 5, rng).edge_count() == 5);
  CHECK(gen_graph(graph_kind::Complete{}, 5, rng).edge_count() == 25);
  CHECK(independence_number_exact(gen_graph(graph_kind::CliquePartition{3}, 9, rng)) == 3);
  CHECK(independence_number_exact(gen_graph(graph_kind::CliquePartition{4}, 10, rng)) == 4);
  const auto star = gen_graph(graph_kind::Star{2}, 6, rng);
  CHECK(independence_number_exact(star) == 5);
  CHECK(greedy_dominating_set(star) == std::vector<int>{2});
  CHECK(gen_graph(graph_kind::ErdosRenyi{0.0}, 6, rng) == ObservabilityGraph(6));
  CHECK(gen_graph(graph_kind::ErdosRenyi{1.0}, 6, rng) == oracle::complete(6));
  CHECK_THROWS_AS(gen_graph(graph_kind::ErdosRenyi{1.5}, 6, rng), UsageError);
  CHECK_THROWS_AS(gen_graph(graph_kind::CliquePartition{7}, 6, rng), UsageError);
  CHECK_THROWS_AS(gen_graph(graph_kind::Star{6}, 6, rng), UsageError);
}

TEST_CASE("Erdos-Renyi edge density") {
  Rng rng(4);
  const int d = 40;
  const auto g = gen_graph(graph_kind::ErdosRenyi{0.3}, d, rng);
  const double off_diagonal = static_cast<double>(g.edge_count() - d);
  const double n = d * (d - 1.0);
  CHECK(std::abs(off_diagonal / n - 0.3) < 4 * std::sqrt(0.21 / n));
}

TEST_CASE("trace is fixed before play and per-round graphs vary") {
  Rng l1(1), g1(2), l2(1), g2(2);
  const auto a = make_trace(loss_kind::IidUniform{}, graph_kind::ErdosRenyi{0.5}, true, 6, 20, l1, g1);
  const auto b = make_trace(loss_kind::IidUniform{}, graph_kind::ErdosRenyi{0.5}, true, 6, 20, l2, g2);
  CHECK(a.losses == b.losses);
  CHECK(a.graphs == b.graphs);
  CHECK(a.graphs.size() == 20);
  bool varies = false;
  for (int t = 1; t < 20; ++t) varies = varies || !(a.graph_at(t) == a.graph_at(0));
  CHECK(varies);
}

TEST_CASE("protocol hides the graph until after the action") {
  Rng l(1), g(2), r(3);
  const auto trace = make_trace(loss_kind::IidUniform{}, graph_kind::Complete{}, false, 4, 10, l, g);
  UniformPolicy policy(4);
  const auto logs = run_protocol(policy, trace, r);
  CHECK_FALSE(policy.saw_graph_);
  CHECK(logs.size() == 10);
  for (const auto& log : logs) {
    CHECK(log.observed.size() == 4);
    CHECK(log.alpha.value() == 1);
  }
}

TEST_CASE("a policy reading unrevealed losses is stopped") {
  Rng l(1), g(2), r(3);
  const auto trace = make_trace(loss_kind::IidUniform{}, graph_kind::Empty{}, false, 3, 5, l, g);
  PeekingPolicy cheat(3);
  CHECK_THROWS_AS(run_protocol(cheat, trace, r), ProtocolViolation);
}

TEST_CASE("protocol reads match observations for Exp3-IX and FPL-IX") {
  Rng l(1), g(2), r(3);
  const auto trace = make_trace(loss_kind::IidUniform{}, graph_kind::ErdosRenyi{0.3}, true, 8, 200, l, g);
  Exp3IxPolicy exp3ix(8);
  auto logs = run_protocol(exp3ix, trace, r);
  for (const auto& log : logs) {
    CHECK(log.q_t.has_value());
    for (int j : log.action) CHECK(std::count(log.observed.begin(), log.observed.end(), j) == 1);
  }
  auto set = make_decision_set("msets(2)", 8);
  FplIxPolicy fpl(*set);
  logs = run_protocol(fpl, trace, r);
  for (const auto& log : logs) CHECK(log.action.size() == 2);
  UniformPolicy wrong(5);
  CHECK_THROWS_AS(run_protocol(wrong, trace, r), UsageError);
}

TEST_CASE("uniform play has the expected regret") {
  // Means (0.2, 0.8): expected regret of uniform play is T (0.5 - 0.2).
  const int T = 10000, runs = 50;
  auto set = make_decision_set("simplex", 2);
  std::vector<double> regrets;
  for (int k = 0; k < runs; ++k) {
    auto lr = Rng::derive(99, k, StreamRole::kLosses);
    auto gr = Rng::derive(99, k, StreamRole::kGraphs);
    auto pr = Rng::derive(99, k, StreamRole::kPolicy);
    const auto trace = make_trace(loss_kind::IidBernoulli{{0.2, 0.8}}, graph_kind::Empty{}, false, 2, T, lr, gr);
    UniformPolicy policy(2);
    const auto logs = run_protocol(policy, trace, pr);
    regrets.push_back(empirical_regret(logs, trace, *set));
  }
  double mean = 0.0;
  for (double v : regrets) mean += v;
  mean /= runs;
  double var = 0.0;
  for (double v : regrets) var += (v - mean) * (v - mean);
  const double se = std::sqrt(var / (runs - 1) / runs);
  CHECK(std::abs(mean - 3000.0) < 4 * se);
}
