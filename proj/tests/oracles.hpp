#pragma once

// Test-only oracles. Each one recomputes an expected value along a route that
// is independent of the implementation path it validates: explicit
// materialization + plain Dijkstra instead of on-the-fly A*, fine-grid
// distances instead of the embedding, exhaustive enumeration instead of
// search.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lassoplan/buchi.hpp"
#include "lassoplan/graph.hpp"
#include "lassoplan/ltl.hpp"
#include "lassoplan/world.hpp"

namespace lasso::oracles {

FormulaPtr random_formula(Rng& rng, int n_atoms, int max_depth);

LassoWord random_lasso(Rng& rng, int n_atoms, int max_prefix, int max_period,
                       bool multi_label = false);

// every lasso word with |prefix| <= max_prefix, 1 <= |period| <= max_period
// and at most one label per position
std::vector<LassoWord> all_small_lassos(int n_atoms, int max_prefix, int max_period);

// the task templates instantiated with up to 3 atoms drawn from {a, b, c}
std::vector<std::string> template_instances_m3();

// minimal step count between two free points: Dijkstra over a fine grid of
// resolution v_max with octile moves (1 step per v_max of travel)
double fine_grid_steps(const Maze& m, const Vec2& a, const Vec2& b);

// optimal prefix cost to every accepting endpoint: explicit product graph +
// uniform-cost search
std::map<std::pair<int, int>, double> explicit_prefix_costs(const LatentGraph& g, const Nba& nba,
                                                            int v0, double tau_soft);

// optimal suffix-cycle cost for an accepting endpoint over the same explicit
// product, including the trivial self-transition and latent closure cases
std::optional<double> explicit_suffix_cost(const LatentGraph& g, const Nba& nba, int u,
                                           int q_star, double tau_soft);

// exhaustive simple-path minimum; practical only for tiny graphs
std::optional<double> brute_force_shortest(const LatentGraph& g, int from, int to);

std::vector<double> bellman_ford(const LatentGraph& g, int from);

// synthetic augmented graph with random geometry, anchors and soft labels
LatentGraph random_augmented_graph(Rng& rng, int n_nodes, int n_labels, int anchors_per_label,
                                   double h_td);

}  // namespace lasso::oracles
