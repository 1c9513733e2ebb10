#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace sidebandit {

// Binary action vector v in {0,1}^d.
using ActionVector = std::vector<std::uint8_t>;

std::vector<int> support(const ActionVector& action);
double dot(const ActionVector& action, std::span<const double> values);

// Combinatorial action family S with ||v||_1 <= m for every v in S, accessed
// through a linear-minimization oracle. Ties break toward the
// lexicographically smallest support.
class DecisionSet {
 public:
  virtual ~DecisionSet() = default;

  virtual int dimension() const = 0;
  virtual int max_support() const = 0;
  virtual std::string name() const = 0;

  // argmin_{v in S} v . score
  virtual ActionVector minimize(std::span<const double> score) const = 0;

  // All of S, when small enough to list (tests and oracles only).
  virtual std::optional<std::vector<ActionVector>> enumerate() const = 0;
};

// Standard basis vectors e_0..e_{d-1}: the multi-armed bandit case.
class SimplexSet final : public DecisionSet {
 public:
  explicit SimplexSet(int d);
  int dimension() const override { return d_; }
  int max_support() const override { return 1; }
  std::string name() const override { return "simplex"; }
  ActionVector minimize(std::span<const double> score) const override;
  std::optional<std::vector<ActionVector>> enumerate() const override;

 private:
  int d_;
};

// All subsets of exactly m components.
class MSetsSet final : public DecisionSet {
 public:
  MSetsSet(int d, int m);
  int dimension() const override { return d_; }
  int max_support() const override { return m_; }
  std::string name() const override { return "msets(" + std::to_string(m_) + ")"; }
  ActionVector minimize(std::span<const double> score) const override;
  std::optional<std::vector<ActionVector>> enumerate() const override;

 private:
  int d_;
  int m_;
};

ActionVector simplex_oracle(std::span<const double> score);
ActionVector mset_oracle(std::span<const double> score, int m);

// Parses `simplex` or `msets(m)`.
std::unique_ptr<DecisionSet> make_decision_set(const std::string& key, int d);

}  // namespace sidebandit
