#pragma once

// Exact and width-limited relaxed BDD compilation for SocConstraint.
//
// The builder starts from the width-one diagram and alternates a bottom-up
// pass (suffix state bounds) with a top-down pass that, layer by layer,
// recomputes prefix state bounds, splits nodes whose bounds are wider than
// the split threshold (up to the width limit), and removes arcs every one of
// whose completions violates the constraint. It stops when a full pass
// changes nothing, then reduces the result.
//
// State components: component 0 tracks a.x. For general constraints
// component k >= 1 tracks d_k.x - h_k; for the diagonal knapsack component
// 1 tracks sum_i d_ii^2 x_i; linear constraints carry component 0 only.

#include <climits>
#include <vector>

#include "bddcut/bdd.hpp"
#include "bddcut/model.hpp"

namespace bddcut {

inline constexpr int kUnboundedWidth = INT_MAX;

struct BuildConfig {
  int max_width = kUnboundedWidth;
  double split_threshold = 1e-6;
  int max_refinement_rounds = 1000;
};

// Interval bounds of every state component over r-u paths (down) and u-t
// paths (up).
struct NodeState {
  std::vector<double> down_min;
  std::vector<double> down_max;
  std::vector<double> up_min;
  std::vector<double> up_max;
};

struct BuildStats {
  int rounds = 0;
  long long splits = 0;
  long long filtered_arcs = 0;
  bool converged = false;
  // Converged with singleton prefix states on every non-terminal node.
  bool exact = false;
};

struct BuildResult {
  Bdd bdd;
  BuildStats stats;

  bool empty() const { return bdd.is_empty(); }
};

BuildResult build_bdd(const SocConstraint& constraint, const BuildConfig& config = {});

// Step-level access to the refinement procedure. Layers are 0..n; layer n
// is the terminal. Node indices are positions within a layer and change
// when nodes are split or pruned.
class RefinementBuilder {
 public:
  RefinementBuilder(const SocConstraint& constraint, BuildConfig config);
  // Starts from an existing diagram instead of the width-one cube.
  RefinementBuilder(const SocConstraint& constraint, const Bdd& start, BuildConfig config);

  int num_vars() const { return n_; }
  int num_components() const { return components_; }
  int layer_size(int layer) const;
  // Child index in layer + 1, or kNoNode.
  int child(int layer, int node, int value) const;
  NodeState state(int layer, int node) const;

  // Recomputes suffix bounds for all nodes; prunes nodes without children.
  void update_bottom_up();
  // Recomputes prefix bounds of one layer from the layer above; prunes
  // nodes without incoming arcs. Returns the number of pruned nodes.
  int update_top_down(int layer);
  // Splits nodes of the layer while it is below the width limit. Returns
  // the number of splits performed.
  int split_layer(int layer);
  // Left-hand side of the arc-removal test for the value-arc out of node.
  double filter_lhs(int layer, int node, int value) const;
  bool filter_arc(int layer, int node, int value) const;
  // Removes failing arcs leaving the layer; returns how many were removed.
  int filter_layer(int layer);

  // One bottom-up pass plus one full top-down pass; true if anything changed.
  bool refine_round();
  // Runs rounds to convergence (or the round limit) and reduces.
  BuildResult run();

  // Current diagram (pruned, not reduced).
  Bdd snapshot() const;
  bool all_prefix_states_singleton() const;

 private:
  struct Layer {
    std::vector<std::array<int, 2>> children;
    // Flattened per-node state vectors, components_ entries per node.
    std::vector<double> down_min, down_max, up_min, up_max;
    int size() const { return static_cast<int>(children.size()); }
  };

  double coefficient(int component, int var) const;
  void init_from(const LayeredGraph& graph);
  void resize_states(Layer& layer);
  // Drops nodes with keep[u] == 0 and remaps the layer above.
  void compact_layer(int layer, const std::vector<char>& keep);
  void split_node(int layer, int node, int component,
                  std::vector<std::vector<std::pair<int, int>>>& incoming);
  void recompute_down(int layer, int node, const std::vector<std::pair<int, int>>& incoming);

  SocConstraint constraint_;
  BuildConfig config_;
  int n_ = 0;
  int components_ = 1;
  std::vector<Layer> layers_;  // n_ + 1 layers
  BuildStats stats_;
};

}  // namespace bddcut
