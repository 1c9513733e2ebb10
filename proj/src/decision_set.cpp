#include "sidebandit/decision_set.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <regex>

#include "sidebandit/graph.hpp"

namespace sidebandit {

namespace {

constexpr std::size_t kMaxEnumeration = 1u << 20;

void check_scores(std::span<const double> score) {
  if (score.empty()) throw UsageError("empty score vector");
  for (double s : score) {
    if (!std::isfinite(s)) throw UsageError("non-finite score passed to oracle");
  }
}

double binomial(int n, int k) {
  double result = 1.0;
  for (int i = 1; i <= k; ++i) result = result * (n - k + i) / i;
  return result;
}

}  // namespace

std::vector<int> support(const ActionVector& action) {
  std::vector<int> result;
  for (std::size_t i = 0; i < action.size(); ++i) {
    if (action[i]) result.push_back(static_cast<int>(i));
  }
  return result;
}

double dot(const ActionVector& action, std::span<const double> values) {
  double total = 0.0;
  for (std::size_t i = 0; i < action.size(); ++i) {
    if (action[i]) total += values[i];
  }
  return total;
}

ActionVector simplex_oracle(std::span<const double> score) {
  check_scores(score);
  // min_element returns the first minimum, i.e. the lowest index on ties.
  const auto best = std::min_element(score.begin(), score.end());
  ActionVector action(score.size(), 0);
  action[best - score.begin()] = 1;
  return action;
}

ActionVector mset_oracle(std::span<const double> score, int m) {
  check_scores(score);
  const int d = static_cast<int>(score.size());
  if (m < 1 || m > d) throw UsageError("m-set size out of range");
  std::vector<int> order(d);
  std::iota(order.begin(), order.end(), 0);
  std::partial_sort(order.begin(), order.begin() + m, order.end(),
                    [&](int a, int b) {
                      return score[a] < score[b] ||
                             (score[a] == score[b] && a < b);
                    });
  ActionVector action(d, 0);
  for (int k = 0; k < m; ++k) action[order[k]] = 1;
  return action;
}

SimplexSet::SimplexSet(int d) : d_(d) {
  if (d < 1) throw UsageError("simplex needs d >= 1");
}

ActionVector SimplexSet::minimize(std::span<const double> score) const {
  if (static_cast<int>(score.size()) != d_) throw UsageError("score has wrong length");
  return simplex_oracle(score);
}

std::optional<std::vector<ActionVector>> SimplexSet::enumerate() const {
  std::vector<ActionVector> all;
  for (int i = 0; i < d_; ++i) {
    ActionVector v(d_, 0);
    v[i] = 1;
    all.push_back(std::move(v));
  }
  return all;
}

MSetsSet::MSetsSet(int d, int m) : d_(d), m_(m) {
  if (m < 1 || m > d) {
    throw UsageError("msets needs 1 <= m <= d (m = " + std::to_string(m) +
                     ", d = " + std::to_string(d) + ")");
  }
}

ActionVector MSetsSet::minimize(std::span<const double> score) const {
  if (static_cast<int>(score.size()) != d_) throw UsageError("score has wrong length");
  return mset_oracle(score, m_);
}

std::optional<std::vector<ActionVector>> MSetsSet::enumerate() const {
  if (binomial(d_, m_) > kMaxEnumeration) return std::nullopt;
  // prev_permutation over a 1..10..0 mask lists supports in lexicographic order.
  ActionVector mask(d_, 0);
  std::fill(mask.begin(), mask.begin() + m_, 1);
  std::vector<ActionVector> all;
  do {
    all.push_back(mask);
  } while (std::prev_permutation(mask.begin(), mask.end()));
  return all;
}

std::unique_ptr<DecisionSet> make_decision_set(const std::string& key, int d) {
  if (key == "simplex") return std::make_unique<SimplexSet>(d);
  static const std::regex msets(R"(\s*msets\s*\(\s*(\d+)\s*\)\s*)");
  std::smatch match;
  if (std::regex_match(key, match, msets)) {
    return std::make_unique<MSetsSet>(d, std::stoi(match[1]));
  }
  throw UsageError("unknown decision set '" + key +
                   "' (expected `simplex` or `msets(m)`)");
}

}  // namespace sidebandit
