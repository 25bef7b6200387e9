#pragma once

// Shortest-augmenting-path (Edmonds-Karp) maximum flow with real
// capacities. Residual capacities at or below 1e-12 count as saturated.

#include <vector>

namespace bddcut {

class FlowNetwork {
 public:
  explicit FlowNetwork(int num_nodes);

  int num_nodes() const { return static_cast<int>(head_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size() / 2); }

  // Returns the edge id. Capacity must be >= 0.
  int add_edge(int from, int to, double capacity);

  // Maximum s-t flow value. Can be called once per network.
  double max_flow(int source, int sink);

  double flow(int edge) const { return edges_[2 * edge].flow; }
  double capacity(int edge) const { return edges_[2 * edge].capacity; }
  int from(int edge) const { return edges_[2 * edge + 1].to; }
  int to(int edge) const { return edges_[2 * edge].to; }

  // After max_flow: nodes reachable from the source in the residual graph.
  const std::vector<char>& source_side() const { return reachable_; }
  // Edges from the source side to the sink side.
  std::vector<int> min_cut_edges() const;

  static constexpr double kResidualFloor = 1e-12;

 private:
  struct Edge {
    int to;
    int next;
    double capacity;
    double flow;
  };
  double residual(int e) const { return edges_[e].capacity - edges_[e].flow; }

  std::vector<int> head_;
  std::vector<Edge> edges_;  // edge 2k forward, 2k + 1 its reverse
  std::vector<char> reachable_;
};

}  // namespace bddcut
