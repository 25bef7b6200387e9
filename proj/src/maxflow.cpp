#include "bddcut/maxflow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

namespace bddcut {

FlowNetwork::FlowNetwork(int num_nodes) {
  if (num_nodes < 2) throw std::invalid_argument("FlowNetwork: need at least two nodes");
  head_.assign(static_cast<std::size_t>(num_nodes), -1);
}

int FlowNetwork::add_edge(int from, int to, double capacity) {
  if (from < 0 || from >= num_nodes() || to < 0 || to >= num_nodes()) {
    throw std::out_of_range("FlowNetwork: edge endpoint out of range");
  }
  if (!(capacity >= 0.0)) throw std::invalid_argument("FlowNetwork: negative capacity");
  const int id = num_edges();
  edges_.push_back({to, head_[from], capacity, 0.0});
  head_[from] = 2 * id;
  // The reverse edge has zero capacity; its flow is the negated forward flow.
  edges_.push_back({from, head_[to], 0.0, 0.0});
  head_[to] = 2 * id + 1;
  return id;
}

double FlowNetwork::max_flow(int source, int sink) {
  if (source == sink) throw std::invalid_argument("FlowNetwork: source equals sink");
  const int n = num_nodes();
  std::vector<int> parent_edge(static_cast<std::size_t>(n));
  double total = 0.0;
  while (true) {
    std::fill(parent_edge.begin(), parent_edge.end(), -1);
    reachable_.assign(static_cast<std::size_t>(n), 0);
    reachable_[source] = 1;
    std::queue<int> queue;
    queue.push(source);
    while (!queue.empty() && !reachable_[sink]) {
      const int u = queue.front();
      queue.pop();
      for (int e = head_[u]; e != -1; e = edges_[e].next) {
        const int v = edges_[e].to;
        if (reachable_[v] || residual(e) <= kResidualFloor) continue;
        reachable_[v] = 1;
        parent_edge[v] = e;
        queue.push(v);
      }
    }
    if (!reachable_[sink]) break;
    double push = std::numeric_limits<double>::infinity();
    for (int v = sink; v != source; v = edges_[parent_edge[v] ^ 1].to) {
      push = std::min(push, residual(parent_edge[v]));
    }
    for (int v = sink; v != source; v = edges_[parent_edge[v] ^ 1].to) {
      const int e = parent_edge[v];
      edges_[e].flow += push;
      edges_[e ^ 1].flow -= push;
    }
    total += push;
  }
  return total;
}

std::vector<int> FlowNetwork::min_cut_edges() const {
  if (reachable_.empty()) throw std::logic_error("FlowNetwork: max_flow not run");
  std::vector<int> out;
  for (int id = 0; id < num_edges(); ++id) {
    if (reachable_[from(id)] && !reachable_[to(id)]) out.push_back(id);
  }
  return out;
}

}  // namespace bddcut
