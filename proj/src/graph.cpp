#include "sidebandit/graph.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace sidebandit {

ObservabilityGraph::ObservabilityGraph(
    int d, std::span<const std::pair<NodeId, NodeId>> edges) {
  if (d < 1) throw UsageError("graph needs at least one node");
  out_.resize(d);
  in_.resize(d);
  for (NodeId i = 0; i < d; ++i) out_[i].push_back(i);
  for (const auto& [from, to] : edges) {
    if (from < 0 || from >= d || to < 0 || to >= d) {
      throw UsageError("edge (" + std::to_string(from) + ", " +
                       std::to_string(to) + ") out of range for d = " +
                       std::to_string(d));
    }
    out_[from].push_back(to);
  }
  for (NodeId j = 0; j < d; ++j) {
    auto& targets = out_[j];
    std::sort(targets.begin(), targets.end());
    targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
    for (NodeId i : targets) in_[i].push_back(j);
  }
}

void ObservabilityGraph::check_node(NodeId i) const {
  if (i < 0 || i >= size()) {
    throw UsageError("node " + std::to_string(i) + " out of range for d = " +
                     std::to_string(size()));
  }
}

std::span<const NodeId> ObservabilityGraph::out_edges(NodeId j) const {
  check_node(j);
  return out_[j];
}

std::span<const NodeId> ObservabilityGraph::in_edges(NodeId i) const {
  check_node(i);
  return in_[i];
}

bool ObservabilityGraph::has_edge(NodeId from, NodeId to) const {
  check_node(from);
  check_node(to);
  return std::binary_search(out_[from].begin(), out_[from].end(), to);
}

std::size_t ObservabilityGraph::edge_count() const {
  std::size_t n = 0;
  for (const auto& targets : out_) n += targets.size();
  return n;
}

std::vector<std::uint64_t> ObservabilityGraph::undirected_masks() const {
  const int d = size();
  if (d > 64) throw CapabilityError("bitmask adjacency needs d <= 64");
  std::vector<std::uint64_t> masks(d, 0);
  for (NodeId j = 0; j < d; ++j) {
    for (NodeId i : out_[j]) {
      if (i == j) continue;
      masks[j] |= std::uint64_t{1} << i;
      masks[i] |= std::uint64_t{1} << j;
    }
  }
  return masks;
}

std::vector<std::pair<NodeId, NodeId>> ObservabilityGraph::edges() const {
  std::vector<std::pair<NodeId, NodeId>> result;
  result.reserve(edge_count());
  for (NodeId j = 0; j < size(); ++j) {
    for (NodeId i : out_[j]) result.emplace_back(j, i);
  }
  return result;
}

std::vector<NodeId> in_neighborhood(const ObservabilityGraph& graph, NodeId i) {
  std::vector<NodeId> result;
  for (NodeId j : graph.in_edges(i)) {
    if (j != i) result.push_back(j);
  }
  return result;
}

std::vector<double> observation_probabilities(const ObservabilityGraph& graph,
                                              std::span<const double> p) {
  const int d = graph.size();
  if (static_cast<int>(p.size()) != d) {
    throw UsageError("probability vector has length " +
                     std::to_string(p.size()) + ", graph has " +
                     std::to_string(d) + " nodes");
  }
  std::vector<double> o(d);
  std::vector<char> in_closed(d, 0);
  for (NodeId i = 0; i < d; ++i) {
    const auto sources = graph.in_edges(i);
    const std::size_t outside = d - sources.size();
    double value = 0.0;
    if (sources.size() <= outside) {
      for (NodeId j : sources) value += p[j];
    } else {
      // Sum the smaller complement; exact 1 on the complete graph.
      for (NodeId j : sources) in_closed[j] = 1;
      double missing = 0.0;
      for (NodeId j = 0; j < d; ++j) {
        if (!in_closed[j]) missing += p[j];
      }
      for (NodeId j : sources) in_closed[j] = 0;
      value = 1.0 - missing;
    }
    o[i] = std::clamp(value, p[i], 1.0);
  }
  return o;
}

namespace {

// Branch and bound over bitmasks. `candidates` are nodes that may still be
// added; the bound is |current| + popcount(candidates).
class MaxIndependentSet {
 public:
  explicit MaxIndependentSet(std::vector<std::uint64_t> adjacency)
      : adjacency_(std::move(adjacency)) {}

  int solve() {
    const int d = static_cast<int>(adjacency_.size());
    const std::uint64_t all =
        d == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << d) - 1;
    best_ = 0;
    expand(all, 0);
    return best_;
  }

 private:
  void expand(std::uint64_t candidates, int size) {
    if (candidates == 0) {
      best_ = std::max(best_, size);
      return;
    }
    if (size + std::popcount(candidates) <= best_) return;

    // Isolated candidates always belong to some maximum set.
    std::uint64_t forced = 0;
    for (std::uint64_t rest = candidates; rest; rest &= rest - 1) {
      const int v = std::countr_zero(rest);
      if ((adjacency_[v] & candidates) == 0) forced |= std::uint64_t{1} << v;
    }
    if (forced) {
      expand(candidates & ~forced, size + std::popcount(forced));
      return;
    }

    // Branch on the candidate of maximum residual degree.
    int pivot = -1;
    int pivot_degree = -1;
    for (std::uint64_t rest = candidates; rest; rest &= rest - 1) {
      const int v = std::countr_zero(rest);
      const int degree = std::popcount(adjacency_[v] & candidates);
      if (degree > pivot_degree) {
        pivot = v;
        pivot_degree = degree;
      }
    }
    const std::uint64_t bit = std::uint64_t{1} << pivot;
    expand(candidates & ~bit & ~adjacency_[pivot], size + 1);
    expand(candidates & ~bit, size);
  }

  std::vector<std::uint64_t> adjacency_;
  int best_ = 0;
};

}  // namespace

int independence_number_exact(const ObservabilityGraph& graph, int limit) {
  if (graph.size() > limit || graph.size() > 64) {
    throw CapabilityError(
        "exact independence number limited to d <= " + std::to_string(limit) +
        " (got d = " + std::to_string(graph.size()) +
        "); use independence_number_greedy");
  }
  return MaxIndependentSet(graph.undirected_masks()).solve();
}

int independence_number_greedy(const ObservabilityGraph& graph) {
  const int d = graph.size();
  std::vector<std::vector<NodeId>> neighbors(d);
  for (NodeId j = 0; j < d; ++j) {
    for (NodeId i : graph.out_edges(j)) {
      if (i == j) continue;
      neighbors[j].push_back(i);
      neighbors[i].push_back(j);
    }
  }
  // Degree counts each arc once, so a bidirected pair contributes 2.
  std::vector<char> alive(d, 1);
  std::vector<int> degree(d);
  for (NodeId v = 0; v < d; ++v) degree[v] = static_cast<int>(neighbors[v].size());

  int chosen = 0;
  for (;;) {
    NodeId pick = -1;
    for (NodeId v = 0; v < d; ++v) {
      if (alive[v] && (pick < 0 || degree[v] < degree[pick])) pick = v;
    }
    if (pick < 0) break;
    ++chosen;
    std::vector<NodeId> removed{pick};
    for (NodeId u : neighbors[pick]) {
      if (alive[u]) removed.push_back(u);
    }
    for (NodeId v : removed) {
      if (!alive[v]) continue;
      alive[v] = 0;
      for (NodeId u : neighbors[v]) {
        if (alive[u]) --degree[u];
      }
    }
  }
  return chosen;
}

std::vector<NodeId> greedy_dominating_set(const ObservabilityGraph& graph) {
  const int d = graph.size();
  std::vector<char> covered(d, 0);
  int remaining = d;
  std::vector<NodeId> result;
  while (remaining > 0) {
    NodeId best = -1;
    int best_gain = 0;
    for (NodeId j = 0; j < d; ++j) {
      int gain = 0;
      for (NodeId i : graph.out_edges(j)) gain += covered[i] ? 0 : 1;
      if (gain > best_gain) {
        best = j;
        best_gain = gain;
      }
    }
    result.push_back(best);
    for (NodeId i : graph.out_edges(best)) {
      if (!covered[i]) {
        covered[i] = 1;
        --remaining;
      }
    }
  }
  std::sort(result.begin(), result.end());
  return result;
}

bool dominates(const ObservabilityGraph& graph, std::span<const NodeId> set) {
  std::vector<char> covered(graph.size(), 0);
  for (NodeId j : set) {
    for (NodeId i : graph.out_edges(j)) covered[i] = 1;
  }
  return std::all_of(covered.begin(), covered.end(),
                     [](char c) { return c != 0; });
}

GraphStats compute_stats(const ObservabilityGraph& graph,
                         int exact_alpha_limit) {
  GraphStats stats;
  if (graph.size() <= exact_alpha_limit) {
    stats.alpha_exact = independence_number_exact(graph, exact_alpha_limit);
  }
  stats.alpha_greedy = independence_number_greedy(graph);
  stats.dominating_set = greedy_dominating_set(graph);
  return stats;
}

double ceil_d2_over(int d, double c) {
  const double dd = static_cast<double>(d);
  return std::ceil(dd * dd / std::max(c, 1e-12));
}

Lemma1Sides lemma1_sides(const ObservabilityGraph& graph,
                         std::span<const double> p, int m, double c,
                         int exact_alpha_limit) {
  const int d = graph.size();
  if (static_cast<int>(p.size()) != d) {
    throw UsageError("p has wrong length");
  }
  if (m < 1) throw UsageError("m must be positive");
  if (!(c > 0.0)) throw UsageError("c must be positive");
  double total = 0.0;
  for (double v : p) {
    if (!(v >= 0.0 && v <= 1.0)) throw UsageError("p entries must lie in [0, 1]");
    total += v;
  }
  if (total > m + 1e-9) {
    throw UsageError("sum of p (" + std::to_string(total) +
                     ") exceeds m = " + std::to_string(m));
  }

  Lemma1Sides sides;
  if (d <= exact_alpha_limit) {
    sides.alpha = independence_number_exact(graph, exact_alpha_limit);
  } else {
    sides.alpha = independence_number_greedy(graph);
    sides.alpha_is_exact = false;
  }

  const double inv_m = 1.0 / m;
  for (NodeId i = 0; i < d; ++i) {
    double in_mass = 0.0;
    for (NodeId j : graph.in_edges(i)) {
      if (j != i) in_mass += p[j];
    }
    sides.lhs += p[i] / (inv_m * p[i] + inv_m * in_mass + c);
  }
  const double alpha = sides.alpha;
  sides.rhs = 2.0 * m * alpha *
                  std::log(1.0 + (m * ceil_d2_over(d, c) + d) / alpha) +
              2.0 * m;
  return sides;
}

ObservabilityGraph read_graph(std::istream& in) {
  std::string line;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      const auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos || line[first] == '#') continue;
      return true;
    }
    return false;
  };
  if (!next_line()) throw UsageError("graph file is empty");
  int d = 0;
  {
    std::istringstream header(line);
    if (!(header >> d) || d < 1) throw UsageError("bad graph header: " + line);
  }
  std::vector<std::pair<NodeId, NodeId>> edges;
  while (next_line()) {
    std::istringstream row(line);
    NodeId from = 0;
    NodeId to = 0;
    if (!(row >> from >> to)) throw UsageError("bad edge line: " + line);
    edges.emplace_back(from, to);
  }
  return ObservabilityGraph(d, edges);
}

ObservabilityGraph read_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open graph file " + path);
  return read_graph(in);
}

void write_graph(std::ostream& out, const ObservabilityGraph& graph) {
  out << graph.size() << '\n';
  for (const auto& [from, to] : graph.edges()) {
    if (from != to) out << from << ' ' << to << '\n';
  }
}

}  // namespace sidebandit
