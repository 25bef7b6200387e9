#include "bddcut/bdd.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace bddcut {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct SignatureHash {
  std::size_t operator()(const std::array<int, 2>& s) const noexcept {
    const auto a = static_cast<std::uint64_t>(static_cast<std::uint32_t>(s[0]));
    const auto b = static_cast<std::uint64_t>(static_cast<std::uint32_t>(s[1]));
    std::uint64_t h = (a << 32) ^ b;
    h ^= h >> 33;
    h *= 0xff51afd7ed558ccdULL;
    h ^= h >> 33;
    return static_cast<std::size_t>(h);
  }
};

}  // namespace

Bdd Bdd::width_one(int num_vars) {
  if (num_vars < 1) throw std::invalid_argument("width_one: n must be >= 1");
  LayeredGraph g;
  g.num_vars = num_vars;
  g.layers.assign(static_cast<std::size_t>(num_vars), {{0, 0}});
  return from_layers(g);
}

Bdd Bdd::empty(int num_vars) {
  if (num_vars < 1) throw std::invalid_argument("empty: n must be >= 1");
  Bdd b;
  b.num_vars_ = num_vars;
  return b;
}

Bdd Bdd::from_layers(const LayeredGraph& graph) {
  const int n = graph.num_vars;
  if (n < 1) throw std::invalid_argument("Bdd: n must be >= 1");
  if (static_cast<int>(graph.layers.size()) != n) {
    throw std::invalid_argument("Bdd: expected " + std::to_string(n) + " layers, got " +
                                std::to_string(graph.layers.size()));
  }
  if (graph.layers[0].size() != 1) {
    throw std::invalid_argument("Bdd: root layer must hold exactly one node");
  }
  for (int i = 0; i < n; ++i) {
    const int next = i + 1 < n ? static_cast<int>(graph.layers[i + 1].size()) : 1;
    for (const auto& ch : graph.layers[i]) {
      for (int v : {0, 1}) {
        if (ch[v] != kNoNode && (ch[v] < 0 || ch[v] >= next)) {
          throw std::invalid_argument("Bdd: arc target outside layer " + std::to_string(i + 1));
        }
      }
    }
  }

  // Forward reachability.
  std::vector<std::vector<char>> reach(static_cast<std::size_t>(n + 1));
  for (int i = 0; i < n; ++i) reach[i].assign(graph.layers[i].size(), 0);
  reach[n].assign(1, 0);
  reach[0][0] = 1;
  for (int i = 0; i < n; ++i) {
    for (std::size_t u = 0; u < graph.layers[i].size(); ++u) {
      if (!reach[i][u]) continue;
      for (int v : {0, 1}) {
        const int c = graph.layers[i][u][v];
        if (c != kNoNode) reach[i + 1][c] = 1;
      }
    }
  }
  // Backward: alive = reachable and reaches the terminal.
  std::vector<std::vector<char>> alive(static_cast<std::size_t>(n + 1));
  alive[n] = reach[n];
  for (int i = n - 1; i >= 0; --i) {
    alive[i].assign(graph.layers[i].size(), 0);
    for (std::size_t u = 0; u < graph.layers[i].size(); ++u) {
      if (!reach[i][u]) continue;
      for (int v : {0, 1}) {
        const int c = graph.layers[i][u][v];
        if (c != kNoNode && alive[i + 1][c]) alive[i][u] = 1;
      }
    }
  }
  if (!alive[0][0]) return empty(n);

  Bdd b;
  b.num_vars_ = n;
  std::vector<std::vector<int>> new_id(static_cast<std::size_t>(n + 1));
  int next_id = 0;
  b.layer_begin_.reserve(static_cast<std::size_t>(n + 2));
  for (int i = 0; i <= n; ++i) {
    b.layer_begin_.push_back(next_id);
    new_id[i].assign(alive[i].size(), kNoNode);
    for (std::size_t u = 0; u < alive[i].size(); ++u) {
      if (alive[i][u]) {
        new_id[i][u] = next_id++;
        b.layer_of_.push_back(i);
      }
    }
  }
  b.layer_begin_.push_back(next_id);

  b.out_.assign(static_cast<std::size_t>(next_id), {kNoArc, kNoArc});
  b.arc_layer_begin_.reserve(static_cast<std::size_t>(n + 1));
  for (int i = 0; i < n; ++i) {
    b.arc_layer_begin_.push_back(static_cast<ArcId>(b.arcs_.size()));
    for (std::size_t u = 0; u < alive[i].size(); ++u) {
      if (!alive[i][u]) continue;
      const NodeId src = new_id[i][u];
      for (int v : {0, 1}) {
        const int c = graph.layers[i][u][v];
        if (c == kNoNode || !alive[i + 1][c]) continue;
        b.out_[src][v] = static_cast<ArcId>(b.arcs_.size());
        b.arcs_.push_back({src, new_id[i + 1][c], v});
      }
    }
  }
  b.arc_layer_begin_.push_back(static_cast<ArcId>(b.arcs_.size()));

  b.in_begin_.assign(static_cast<std::size_t>(next_id + 1), 0);
  for (const Arc& a : b.arcs_) ++b.in_begin_[a.target + 1];
  for (int u = 0; u < next_id; ++u) b.in_begin_[u + 1] += b.in_begin_[u];
  b.in_arcs_.resize(b.arcs_.size());
  std::vector<int> fill(b.in_begin_.begin(), b.in_begin_.end() - 1);
  for (ArcId a = 0; a < b.num_arcs(); ++a) b.in_arcs_[fill[b.arcs_[a].target]++] = a;
  return b;
}

void Bdd::throw_if_empty(const char* what) const {
  if (is_empty()) throw std::logic_error(std::string(what) + ": empty BDD");
}

int Bdd::width() const {
  int w = 0;
  if (is_empty()) return 0;
  for (int i = 0; i <= num_vars_; ++i) w = std::max(w, layer_size(i));
  return w;
}

std::span<const ArcId> Bdd::in_arcs(NodeId node) const {
  return {in_arcs_.data() + in_begin_[node],
          static_cast<std::size_t>(in_begin_[node + 1] - in_begin_[node])};
}

bool Bdd::contains(std::span<const std::uint8_t> point) const {
  if (static_cast<int>(point.size()) != num_vars_) {
    throw std::invalid_argument("contains: point has wrong dimension");
  }
  if (is_empty()) return false;
  NodeId u = root();
  for (int i = 0; i < num_vars_; ++i) {
    const ArcId a = child(u, point[i] ? 1 : 0);
    if (a == kNoArc) return false;
    u = arcs_[a].target;
  }
  return true;
}

double Bdd::path_count() const {
  if (is_empty()) return 0.0;
  std::vector<double> count(static_cast<std::size_t>(num_nodes()), 0.0);
  count[root()] = 1.0;
  for (const Arc& a : arcs_) count[a.target] += count[a.source];
  return count[terminal()];
}

LayeredGraph Bdd::to_layers() const {
  throw_if_empty("to_layers");
  LayeredGraph g;
  g.num_vars = num_vars_;
  g.layers.resize(static_cast<std::size_t>(num_vars_));
  for (int i = 0; i < num_vars_; ++i) {
    const NodeId next_begin = layer_begin(i + 1);
    for (NodeId u = layer_begin(i); u < layer_end(i); ++u) {
      std::array<int, 2> ch{kNoNode, kNoNode};
      for (int v : {0, 1}) {
        if (out_[u][v] != kNoArc) ch[v] = arcs_[out_[u][v]].target - next_begin;
      }
      g.layers[i].push_back(ch);
    }
  }
  return g;
}

bool operator==(const Bdd& lhs, const Bdd& rhs) {
  if (lhs.num_vars_ != rhs.num_vars_ || lhs.layer_begin_ != rhs.layer_begin_ ||
      lhs.arcs_.size() != rhs.arcs_.size()) {
    return false;
  }
  for (std::size_t a = 0; a < lhs.arcs_.size(); ++a) {
    const Arc& x = lhs.arcs_[a];
    const Arc& y = rhs.arcs_[a];
    if (x.source != y.source || x.target != y.target || x.value != y.value) return false;
  }
  return true;
}

std::vector<BitVector> enumerate_paths(const Bdd& bdd, double max_paths) {
  std::vector<BitVector> out;
  if (bdd.is_empty()) return out;
  const double count = bdd.path_count();
  if (count > max_paths) {
    throw std::length_error("enumerate_paths: " + std::to_string(count) +
                            " paths exceed the limit");
  }
  out.reserve(static_cast<std::size_t>(count));
  const int n = bdd.num_vars();
  BitVector bits(static_cast<std::size_t>(n), 0);
  // Iterative DFS; 0-arcs first yields lexicographic order.
  std::vector<NodeId> stack_node(static_cast<std::size_t>(n + 1));
  std::vector<int> stack_next(static_cast<std::size_t>(n + 1), 0);
  int depth = 0;
  stack_node[0] = bdd.root();
  stack_next[0] = 0;
  while (depth >= 0) {
    if (depth == n) {
      out.push_back(bits);
      --depth;
      continue;
    }
    const int v = stack_next[depth];
    if (v > 1) {
      --depth;
      continue;
    }
    stack_next[depth] = v + 1;
    const ArcId a = bdd.child(stack_node[depth], v);
    if (a == kNoArc) continue;
    bits[depth] = static_cast<std::uint8_t>(v);
    stack_node[depth + 1] = bdd.arc(a).target;
    stack_next[depth + 1] = 0;
    ++depth;
  }
  // Distinct paths of a deterministic diagram encode distinct points.
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Bdd reduce(const Bdd& bdd) {
  if (bdd.is_empty()) return bdd;
  LayeredGraph g = bdd.to_layers();
  const int n = g.num_vars;
  // canon[u] for the layer below the one being processed.
  std::vector<int> canon_below{0};
  for (int i = n - 1; i >= 0; --i) {
    std::unordered_map<std::array<int, 2>, int, SignatureHash> seen;
    std::vector<std::array<int, 2>> merged;
    std::vector<int> canon(g.layers[i].size());
    for (std::size_t u = 0; u < g.layers[i].size(); ++u) {
      std::array<int, 2> sig = g.layers[i][u];
      for (int v : {0, 1}) {
        if (sig[v] != kNoNode) sig[v] = canon_below[sig[v]];
      }
      auto [it, inserted] = seen.try_emplace(sig, static_cast<int>(merged.size()));
      if (inserted) merged.push_back(sig);
      canon[u] = it->second;
    }
    g.layers[i] = std::move(merged);
    canon_below = std::move(canon);
  }
  // Renumber each layer in order of first reference from the layer above
  // (0-child before 1-child), so isomorphic inputs give identical output.
  for (int i = 0; i + 1 < n; ++i) {
    std::vector<int> order(g.layers[i + 1].size(), kNoNode);
    int next = 0;
    for (auto& children : g.layers[i]) {
      for (int& c : children) {
        if (c == kNoNode) continue;
        if (order[c] == kNoNode) order[c] = next++;
        c = order[c];
      }
    }
    std::vector<std::array<int, 2>> renumbered(static_cast<std::size_t>(next));
    for (std::size_t u = 0; u < order.size(); ++u) {
      if (order[u] != kNoNode) renumbered[order[u]] = g.layers[i + 1][u];
    }
    g.layers[i + 1] = std::move(renumbered);
  }
  return Bdd::from_layers(g);
}

std::vector<double> arc_weights(const Bdd& bdd, std::span<const double> coefficients) {
  if (static_cast<int>(coefficients.size()) != bdd.num_vars()) {
    throw std::invalid_argument("arc_weights: coefficient vector has wrong length");
  }
  std::vector<double> w(static_cast<std::size_t>(bdd.num_arcs()), 0.0);
  for (ArcId a = 0; a < bdd.num_arcs(); ++a) {
    if (bdd.arc(a).value == 1) w[a] = coefficients[bdd.arc_var(a)];
  }
  return w;
}

NodePotentials potentials(const Bdd& bdd, std::span<const double> coefficients) {
  if (bdd.is_empty()) throw std::logic_error("potentials: empty BDD");
  const std::vector<double> w = arc_weights(bdd, coefficients);
  const auto nodes = static_cast<std::size_t>(bdd.num_nodes());
  NodePotentials p{std::vector<double>(nodes, kNegInf), std::vector<double>(nodes, kNegInf)};
  p.down[bdd.root()] = 0.0;
  for (ArcId a = 0; a < bdd.num_arcs(); ++a) {
    const Arc& arc = bdd.arc(a);
    p.down[arc.target] = std::max(p.down[arc.target], p.down[arc.source] + w[a]);
  }
  p.up[bdd.terminal()] = 0.0;
  for (ArcId a = bdd.num_arcs() - 1; a >= 0; --a) {
    const Arc& arc = bdd.arc(a);
    p.up[arc.source] = std::max(p.up[arc.source], p.up[arc.target] + w[a]);
  }
  for (std::size_t u = 0; u < nodes; ++u) {
    if (p.down[u] == kNegInf || p.up[u] == kNegInf) {
      throw std::logic_error("potentials: node " + std::to_string(u) +
                             " lacks an incoming or outgoing arc");
    }
  }
  return p;
}

std::vector<double> arc_lengths(const Bdd& bdd, const NodePotentials& pots,
                                std::span<const double> coefficients) {
  const std::vector<double> w = arc_weights(bdd, coefficients);
  std::vector<double> theta(w.size());
  for (ArcId a = 0; a < bdd.num_arcs(); ++a) {
    const Arc& arc = bdd.arc(a);
    theta[a] = pots.down[arc.source] + w[a] + pots.up[arc.target];
  }
  return theta;
}

}  // namespace bddcut
