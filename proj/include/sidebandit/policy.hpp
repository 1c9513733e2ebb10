#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "sidebandit/decision_set.hpp"
#include "sidebandit/graph.hpp"
#include "sidebandit/rng.hpp"

namespace sidebandit {

// A policy touched a loss it was not shown.
class ProtocolViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// When the policy gets to see G_t.
enum class GraphAccess {
  kAfterAction,      // implicit-exploration policies
  kBeforeAction,     // Exp3-DOM needs a dominating set to sample
  kFullInformation,  // full-information baselines see every loss
};

std::string to_string(GraphAccess access);

// The slice of the loss vector revealed this round. Reading an unrevealed
// entry throws; every read is recorded so tests can audit what was used.
class RevealedLosses {
 public:
  RevealedLosses(std::span<const double> losses,
                 std::vector<std::uint8_t> observed)
      : losses_(losses),
        observed_(std::move(observed)),
        read_(observed_.size(), 0) {}

  int size() const { return static_cast<int>(observed_.size()); }
  bool is_observed(int i) const { return observed_.at(i) != 0; }
  std::span<const std::uint8_t> observed() const { return observed_; }

  double at(int i) const {
    if (i < 0 || i >= size() || !observed_[i]) {
      throw ProtocolViolation("policy read unrevealed loss of component " +
                              std::to_string(i));
    }
    read_[i] = 1;
    return losses_[i];
  }

  std::span<const std::uint8_t> reads() const { return read_; }

 private:
  std::span<const double> losses_;
  std::vector<std::uint8_t> observed_;
  mutable std::vector<std::uint8_t> read_;
};

// What a policy reports about the round it just finished.
struct PolicyDiagnostics {
  double rate = 0.0;   // eta_t
  double gamma = 0.0;  // gamma_t (IX parameter or explicit mixing)
  std::optional<double> q_t;
  std::optional<int> alpha_tilde;
  std::uint64_t oracle_calls = 0;
  std::uint64_t hard_cap_hits = 0;
};

struct RoundLog {
  int round = 0;  // 1-based
  std::vector<int> action;
  double loss = 0.0;
  double rate = 0.0;
  double gamma = 0.0;
  std::optional<double> q_t;
  std::optional<int> alpha;
  int alpha_tilde = 0;
  std::uint64_t oracle_calls = 0;
  std::vector<int> observed;
  GraphAccess graph_access = GraphAccess::kAfterAction;
};

class Policy {
 public:
  virtual ~Policy() = default;

  virtual std::string name() const = 0;
  virtual int dimension() const = 0;
  virtual GraphAccess graph_access() const { return GraphAccess::kAfterAction; }

  // `graph` is only provided to policies with kBeforeAction access.
  virtual ActionVector act(const ObservabilityGraph* graph, Rng& rng) = 0;

  // Called once per round after the action, with G_t and the revealed losses.
  virtual void update(const ObservabilityGraph& graph,
                      const RevealedLosses& feedback, Rng& rng) = 0;

  virtual PolicyDiagnostics diagnostics() const = 0;

  // Loss estimate built in the most recent update.
  virtual std::span<const double> last_estimate() const = 0;
};

}  // namespace sidebandit
