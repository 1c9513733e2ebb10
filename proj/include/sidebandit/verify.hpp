#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sidebandit/graph.hpp"
#include "sidebandit/rng.hpp"

namespace sidebandit {

// Outcome of one randomized verification suite.
struct SuiteResult {
  std::string name;
  int cases = 0;
  int failures = 0;
  double worst_margin = 0.0;  // suite-specific; larger is closer to failing
  std::vector<std::string> failure_details;
  double seconds = 0.0;

  bool passed() const { return cases > 0 && failures == 0; }
};

// Random graph on d nodes: Erdos-Renyi with a random density, or one of the
// structured families.
ObservabilityGraph random_graph(int d, Rng& rng);

// Graph lemma: lhs <= rhs on random (G, p, m, c), d <= 12, exact alpha.
SuiteResult verify_lemma1(int cases, std::uint64_t seed);

// Q = sum p_i/(o_i + gamma) <= lemma2_bound on random (G, p, gamma).
SuiteResult verify_lemma2(int cases, std::uint64_t seed);

// Monte Carlo Q~(c) <= lemma4_bound + 4 SE on random FPL distributions.
SuiteResult verify_lemma4(int cases, std::uint64_t seed, int samples = 100000);

// IX optimism and the bias identity of the simple-setting estimator, by
// resampling I_t ~ p `draws` times per configuration.
SuiteResult verify_optimism(int cases, std::uint64_t seed, int draws = 1000000);

// Mean of K against 1/(o + (1-o) gamma) with synthetic Bernoulli(o) copies over
// the grid o in {0.1..0.9} x gamma in {0.1, 0.3, 0.5}; tolerance 2%.
SuiteResult verify_resampling(std::uint64_t seed, int trials = 1000000);

}  // namespace sidebandit
