#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sidebandit {

using NodeId = int;

// Bad arguments from the caller (out-of-range ids, malformed vectors, ...).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A request the implementation cannot serve, e.g. exact alpha on a big graph.
class CapabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kDefaultExactAlphaLimit = 30;

// Directed observability graph over d components. Playing node j reveals the
// losses of every i with (j -> i) in the graph. Self-loops are always present
// and stored explicitly. Immutable once built.
class ObservabilityGraph {
 public:
  // Builds the graph from an edge list (source, target). Missing self-loops
  // are added; duplicate edges are collapsed.
  ObservabilityGraph(int d, std::span<const std::pair<NodeId, NodeId>> edges);
  explicit ObservabilityGraph(int d) : ObservabilityGraph(d, {}) {}

  int size() const { return static_cast<int>(out_.size()); }

  // Sorted targets of j, including j itself.
  std::span<const NodeId> out_edges(NodeId j) const;
  // Sorted sources of i, including i itself.
  std::span<const NodeId> in_edges(NodeId i) const;

  bool has_edge(NodeId from, NodeId to) const;
  std::size_t edge_count() const;

  // Adjacency of the underlying undirected graph without self-loops, as a
  // bitmask per node. Only valid for d <= 64.
  std::vector<std::uint64_t> undirected_masks() const;

  std::vector<std::pair<NodeId, NodeId>> edges() const;

  friend bool operator==(const ObservabilityGraph&,
                         const ObservabilityGraph&) = default;

 private:
  void check_node(NodeId i) const;

  std::vector<std::vector<NodeId>> out_;
  std::vector<std::vector<NodeId>> in_;
};

struct GraphStats {
  std::optional<int> alpha_exact;
  int alpha_greedy = 0;
  std::vector<NodeId> dominating_set;
};

// { j != i : (j -> i) in G }.
std::vector<NodeId> in_neighborhood(const ObservabilityGraph& graph, NodeId i);

// o_i = p_i + sum over in-neighbors of p_j, the probability that component i
// is observed when the played node is drawn from p.
std::vector<double> observation_probabilities(const ObservabilityGraph& graph,
                                              std::span<const double> p);

// Independence number of the underlying undirected graph (self-loops
// ignored). Exact branch and bound; throws CapabilityError above `limit`.
int independence_number_exact(const ObservabilityGraph& graph,
                              int limit = kDefaultExactAlphaLimit);

// Size of the maximal independent set built by repeatedly taking a surviving
// node of minimum (in + out) degree, lowest id first, and deleting its closed
// neighborhood. Always in [1, alpha].
int independence_number_greedy(const ObservabilityGraph& graph);

// Greedy max-coverage dominating set: repeatedly take the node whose
// out-neighborhood (self included) covers the most uncovered nodes.
std::vector<NodeId> greedy_dominating_set(const ObservabilityGraph& graph);

bool dominates(const ObservabilityGraph& graph, std::span<const NodeId> set);

GraphStats compute_stats(const ObservabilityGraph& graph,
                         int exact_alpha_limit = kDefaultExactAlphaLimit);

struct Lemma1Sides {
  double lhs = 0.0;
  double rhs = 0.0;
  int alpha = 0;
  bool alpha_is_exact = true;
  bool holds() const { return lhs <= rhs; }
};

// Both sides of the graph lemma
//   sum_i p_i / (p_i/m + P_i/m + c) <= 2 m a log(1 + (m ceil(d^2/c) + d)/a) + 2m
// with P_i the in-neighborhood mass of p. Uses exact alpha when
// d <= exact_alpha_limit, otherwise the greedy value (flagged).
Lemma1Sides lemma1_sides(const ObservabilityGraph& graph,
                         std::span<const double> p, int m, double c,
                         int exact_alpha_limit = kDefaultExactAlphaLimit);

// ceil(d^2 / c) evaluated in floating point, with c clamped at 1e-12.
double ceil_d2_over(int d, double c);

// Text format: first line `d`, then one `j i` line per edge (j -> i).
// Self-loops may be omitted; they are added on load. Blank lines and lines
// starting with '#' are skipped.
ObservabilityGraph read_graph(std::istream& in);
ObservabilityGraph read_graph_file(const std::string& path);
void write_graph(std::ostream& out, const ObservabilityGraph& graph);

}  // namespace sidebandit
