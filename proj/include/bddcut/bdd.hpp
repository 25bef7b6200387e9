#pragma once

// Layered binary decision diagrams.
//
// A Bdd over n variables has layers 0..n. Layer 0 holds the root, layer n
// the terminal; an arc leaving layer i assigns variable x_i (0-based). Nodes
// are numbered contiguously layer by layer, so a node id doubles as a
// position in per-node arrays. Arcs are numbered by (source, value).
//
// Instances are immutable once constructed. Construction goes through a
// LayeredGraph (children per node), which is validated and pruned: nodes
// that are unreachable from the root or cannot reach the terminal are
// dropped together with their arcs.

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace bddcut {

using NodeId = int;
using ArcId = int;
inline constexpr int kNoNode = -1;
inline constexpr ArcId kNoArc = -1;

using BitVector = std::vector<std::uint8_t>;

struct Arc {
  NodeId source;
  NodeId target;
  int value;
};

// Mutable children-list form. layers[i][u] holds the indices, into layer
// i + 1, of node u's 0-child and 1-child (kNoNode when absent). Layer n is
// implicit and holds the single terminal with index 0.
struct LayeredGraph {
  int num_vars = 0;
  std::vector<std::vector<std::array<int, 2>>> layers;
};

class Bdd {
 public:
  // Full cube {0,1}^n: one node per layer, both arcs everywhere.
  static Bdd width_one(int num_vars);
  // Sentinel for an empty solution set.
  static Bdd empty(int num_vars);
  // Validates and prunes; yields empty() when no root-terminal path survives.
  static Bdd from_layers(const LayeredGraph& graph);

  int num_vars() const { return num_vars_; }
  bool is_empty() const { return layer_begin_.empty(); }
  int num_nodes() const { return static_cast<int>(layer_of_.size()); }
  int num_arcs() const { return static_cast<int>(arcs_.size()); }

  NodeId root() const { return 0; }
  NodeId terminal() const { return num_nodes() - 1; }

  // layer in [0, num_vars]
  NodeId layer_begin(int layer) const { return layer_begin_[layer]; }
  NodeId layer_end(int layer) const { return layer_begin_[layer + 1]; }
  int layer_size(int layer) const { return layer_end(layer) - layer_begin(layer); }
  int layer_of(NodeId node) const { return layer_of_[node]; }
  int width() const;

  const Arc& arc(ArcId a) const { return arcs_[a]; }
  const std::vector<Arc>& arcs() const { return arcs_; }
  // Arcs leaving layer i occupy [arc_layer_begin(i), arc_layer_begin(i + 1)).
  ArcId arc_layer_begin(int layer) const { return arc_layer_begin_[layer]; }
  ArcId child(NodeId node, int value) const { return out_[node][value]; }
  std::span<const ArcId> in_arcs(NodeId node) const;

  // Variable assigned by an arc.
  int arc_var(ArcId a) const { return layer_of_[arcs_[a].source]; }

  bool contains(std::span<const std::uint8_t> point) const;
  // Number of root-terminal paths, as a double (exact below 2^53).
  double path_count() const;

  LayeredGraph to_layers() const;

  friend bool operator==(const Bdd& lhs, const Bdd& rhs);

 private:
  Bdd() = default;
  void throw_if_empty(const char* what) const;

  int num_vars_ = 0;
  std::vector<NodeId> layer_begin_;
  std::vector<int> layer_of_;
  std::vector<Arc> arcs_;
  std::vector<ArcId> arc_layer_begin_;
  std::vector<std::array<ArcId, 2>> out_;
  std::vector<int> in_begin_;
  std::vector<ArcId> in_arcs_;
};

// Every point of Sol_B, sorted lexicographically. Throws std::length_error
// when the path count exceeds max_paths.
std::vector<BitVector> enumerate_paths(const Bdd& bdd,
                                       double max_paths = 16777216.0);

// Unique reduced diagram for the same variable order: nodes with identical
// (0-child, 1-child) signatures are merged bottom-up.
Bdd reduce(const Bdd& bdd);

// Arc weights w_a = coefficients[i] * v_a for arcs leaving layer i.
std::vector<double> arc_weights(const Bdd& bdd, std::span<const double> coefficients);

// Longest-path values from the root (down) and to the terminal (up).
struct NodePotentials {
  std::vector<double> down;
  std::vector<double> up;
};

NodePotentials potentials(const Bdd& bdd, std::span<const double> coefficients);

// theta_a: longest root-terminal path value among paths through arc a.
std::vector<double> arc_lengths(const Bdd& bdd, const NodePotentials& pots,
                                std::span<const double> coefficients);

}  // namespace bddcut
