#include "bddcut/compile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>
#include <utility>

namespace bddcut {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

BuildResult build_bdd(const SocConstraint& constraint, const BuildConfig& config) {
  RefinementBuilder builder(constraint, config);
  return builder.run();
}

RefinementBuilder::RefinementBuilder(const SocConstraint& constraint, BuildConfig config)
    : RefinementBuilder(constraint, Bdd::width_one(constraint.num_vars()), config) {}

RefinementBuilder::RefinementBuilder(const SocConstraint& constraint, const Bdd& start,
                                     BuildConfig config)
    : constraint_(constraint), config_(config), n_(constraint.num_vars()) {
  if (config_.max_width < 1) throw std::invalid_argument("max_width must be >= 1");
  if (!(config_.split_threshold > 0.0)) {
    throw std::invalid_argument("split_threshold must be positive");
  }
  if (start.num_vars() != n_) {
    throw std::invalid_argument("start diagram has the wrong number of variables");
  }
  switch (constraint_.kind()) {
    case ConstraintKind::kLinear:
      components_ = 1;
      break;
    case ConstraintKind::kDiagonalKnapsack:
      components_ = 2;
      break;
    case ConstraintKind::kGeneral:
      components_ = 1 + constraint_.num_rows();
      break;
  }
  layers_.resize(static_cast<std::size_t>(n_) + 1);
  if (start.is_empty()) return;
  init_from(start.to_layers());
  for (int i = 0; i <= n_; ++i) update_top_down(i);
  update_bottom_up();
}

void RefinementBuilder::init_from(const LayeredGraph& graph) {
  for (int i = 0; i < n_; ++i) {
    layers_[i].children = graph.layers[i];
    resize_states(layers_[i]);
  }
  layers_[n_].children.assign(1, {kNoNode, kNoNode});
  resize_states(layers_[n_]);
}

void RefinementBuilder::resize_states(Layer& layer) {
  const std::size_t size = layer.children.size() * static_cast<std::size_t>(components_);
  layer.down_min.resize(size, 0.0);
  layer.down_max.resize(size, 0.0);
  layer.up_min.resize(size, 0.0);
  layer.up_max.resize(size, 0.0);
}

double RefinementBuilder::coefficient(int component, int var) const {
  if (component == 0) return constraint_.a()[var];
  if (constraint_.kind() == ConstraintKind::kDiagonalKnapsack) {
    const double d = constraint_.d(var, var);
    return d * d;
  }
  return constraint_.d(component - 1, var);
}

int RefinementBuilder::layer_size(int layer) const { return layers_.at(layer).size(); }

int RefinementBuilder::child(int layer, int node, int value) const {
  if (layer < 0 || layer >= n_) throw std::out_of_range("child: layer out of range");
  return layers_[layer].children.at(node)[value];
}

NodeState RefinementBuilder::state(int layer, int node) const {
  const Layer& l = layers_.at(layer);
  if (node < 0 || node >= l.size()) throw std::out_of_range("state: node out of range");
  const auto begin = static_cast<std::ptrdiff_t>(node) * components_;
  const auto end = begin + components_;
  return NodeState{{l.down_min.begin() + begin, l.down_min.begin() + end},
                   {l.down_max.begin() + begin, l.down_max.begin() + end},
                   {l.up_min.begin() + begin, l.up_min.begin() + end},
                   {l.up_max.begin() + begin, l.up_max.begin() + end}};
}

void RefinementBuilder::compact_layer(int layer, const std::vector<char>& keep) {
  Layer& l = layers_[layer];
  std::vector<int> remap(l.children.size(), kNoNode);
  int next = 0;
  for (int u = 0; u < l.size(); ++u) {
    if (!keep[u]) continue;
    remap[u] = next;
    if (next != u) {
      l.children[next] = l.children[u];
      for (int k = 0; k < components_; ++k) {
        l.down_min[next * components_ + k] = l.down_min[u * components_ + k];
        l.down_max[next * components_ + k] = l.down_max[u * components_ + k];
        l.up_min[next * components_ + k] = l.up_min[u * components_ + k];
        l.up_max[next * components_ + k] = l.up_max[u * components_ + k];
      }
    }
    ++next;
  }
  l.children.resize(next);
  resize_states(l);
  if (layer > 0) {
    for (auto& ch : layers_[layer - 1].children) {
      for (int& c : ch) {
        if (c != kNoNode) c = remap[c];
      }
    }
  }
  if (next == 0) {
    for (Layer& other : layers_) {
      other.children.clear();
      resize_states(other);
    }
  }
}

void RefinementBuilder::update_bottom_up() {
  if (layers_[n_].size() == 0) return;
  Layer& term = layers_[n_];
  std::fill(term.up_min.begin(), term.up_min.end(), 0.0);
  std::fill(term.up_max.begin(), term.up_max.end(), 0.0);
  for (int i = n_ - 1; i >= 0; --i) {
    Layer& l = layers_[i];
    const Layer& below = layers_[i + 1];
    std::vector<char> keep(l.children.size(), 0);
    bool any_dead = false;
    for (int u = 0; u < l.size(); ++u) {
      for (int k = 0; k < components_; ++k) {
        double lo = kInf;
        double hi = -kInf;
        for (int v = 0; v < 2; ++v) {
          const int c = l.children[u][v];
          if (c == kNoNode) continue;
          const double w = coefficient(k, i) * v;
          lo = std::min(lo, below.up_min[c * components_ + k] + w);
          hi = std::max(hi, below.up_max[c * components_ + k] + w);
        }
        l.up_min[u * components_ + k] = lo;
        l.up_max[u * components_ + k] = hi;
      }
      keep[u] = l.children[u][0] != kNoNode || l.children[u][1] != kNoNode;
      any_dead |= !keep[u];
    }
    if (any_dead) compact_layer(i, keep);
    if (layers_[n_].size() == 0) return;
  }
}

int RefinementBuilder::update_top_down(int layer) {
  if (layers_[n_].size() == 0) return 0;
  Layer& l = layers_[layer];
  if (layer == 0) {
    for (int k = 0; k < components_; ++k) {
      const double init = (k > 0 && constraint_.kind() == ConstraintKind::kGeneral)
                              ? -constraint_.h()[k - 1]
                              : 0.0;
      l.down_min[k] = init;
      l.down_max[k] = init;
    }
    return 0;
  }
  const Layer& above = layers_[layer - 1];
  std::fill(l.down_min.begin(), l.down_min.end(), kInf);
  std::fill(l.down_max.begin(), l.down_max.end(), -kInf);
  std::vector<char> keep(l.children.size(), 0);
  for (int p = 0; p < above.size(); ++p) {
    for (int v = 0; v < 2; ++v) {
      const int c = above.children[p][v];
      if (c == kNoNode) continue;
      keep[c] = 1;
      for (int k = 0; k < components_; ++k) {
        const double w = coefficient(k, layer - 1) * v;
        double& lo = l.down_min[c * components_ + k];
        double& hi = l.down_max[c * components_ + k];
        lo = std::min(lo, above.down_min[p * components_ + k] + w);
        hi = std::max(hi, above.down_max[p * components_ + k] + w);
      }
    }
  }
  const int dead = static_cast<int>(std::count(keep.begin(), keep.end(), 0));
  if (dead > 0) compact_layer(layer, keep);
  return dead;
}

void RefinementBuilder::recompute_down(int layer, int node,
                                       const std::vector<std::pair<int, int>>& incoming) {
  Layer& l = layers_[layer];
  const Layer& above = layers_[layer - 1];
  for (int k = 0; k < components_; ++k) {
    double lo = kInf;
    double hi = -kInf;
    for (const auto& [p, v] : incoming) {
      const double w = coefficient(k, layer - 1) * v;
      lo = std::min(lo, above.down_min[p * components_ + k] + w);
      hi = std::max(hi, above.down_max[p * components_ + k] + w);
    }
    l.down_min[node * components_ + k] = lo;
    l.down_max[node * components_ + k] = hi;
  }
}

void RefinementBuilder::split_node(int layer, int node, int component,
                                   std::vector<std::vector<std::pair<int, int>>>& incoming) {
  Layer& l = layers_[layer];
  Layer& above = layers_[layer - 1];
  const int k = component;
  const double mid =
      0.5 * (l.down_min[node * components_ + k] + l.down_max[node * components_ + k]);
  std::vector<std::pair<int, int>> left;
  std::vector<std::pair<int, int>> right;
  for (const auto& arc : incoming[node]) {
    const auto [p, v] = arc;
    const double arriving =
        0.5 * (above.down_min[p * components_ + k] + above.down_max[p * components_ + k]) +
        coefficient(k, layer - 1) * v;
    (arriving <= mid ? left : right).push_back(arc);
  }
  if (left.empty() || right.empty()) return;

  const int fresh = l.size();
  l.children.push_back(l.children[node]);
  resize_states(l);
  for (int c = 0; c < components_; ++c) {
    l.up_min[fresh * components_ + c] = l.up_min[node * components_ + c];
    l.up_max[fresh * components_ + c] = l.up_max[node * components_ + c];
  }
  for (const auto& [p, v] : right) above.children[p][v] = fresh;
  incoming.emplace_back(std::move(right));
  incoming[node] = std::move(left);
  recompute_down(layer, node, incoming[node]);
  recompute_down(layer, fresh, incoming[fresh]);
  ++stats_.splits;
}

int RefinementBuilder::split_layer(int layer) {
  if (layer <= 0 || layer >= n_ || layers_[n_].size() == 0) return 0;
  Layer& l = layers_[layer];
  if (l.size() >= config_.max_width) return 0;

  std::vector<std::vector<std::pair<int, int>>> incoming(l.children.size());
  const Layer& above = layers_[layer - 1];
  for (int p = 0; p < above.size(); ++p) {
    for (int v = 0; v < 2; ++v) {
      const int c = above.children[p][v];
      if (c != kNoNode) incoming[c].emplace_back(p, v);
    }
  }

  auto widest = [&](int u) {
    int best = 0;
    double width = -1.0;
    for (int k = 0; k < components_; ++k) {
      const double w = l.down_max[u * components_ + k] - l.down_min[u * components_ + k];
      if (w > width) {
        width = w;
        best = k;
      }
    }
    return std::pair<double, int>{width, best};
  };

  // Max-heap on interval width; ties go to the lower node index.
  using Entry = std::pair<double, int>;
  auto cmp = [](const Entry& x, const Entry& y) {
    if (x.first != y.first) return x.first < y.first;
    return x.second > y.second;
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(cmp)> heap(cmp);
  for (int u = 0; u < l.size(); ++u) {
    const double w = widest(u).first;
    if (w >= config_.split_threshold) heap.emplace(w, u);
  }

  int splits = 0;
  while (!heap.empty() && l.size() < config_.max_width) {
    const auto [w, u] = heap.top();
    heap.pop();
    const auto [current, k] = widest(u);
    if (current != w) {
      if (current >= config_.split_threshold) heap.emplace(current, u);
      continue;
    }
    const int before = l.size();
    split_node(layer, u, k, incoming);
    if (l.size() == before) continue;
    ++splits;
    for (int node : {u, before}) {
      const double nw = widest(node).first;
      if (nw >= config_.split_threshold) heap.emplace(nw, node);
    }
  }
  return splits;
}

double RefinementBuilder::filter_lhs(int layer, int node, int value) const {
  const int c = child(layer, node, value);
  if (c == kNoNode) throw std::out_of_range("filter_lhs: arc does not exist");
  const Layer& l = layers_[layer];
  const Layer& below = layers_[layer + 1];
  const int K = components_;
  auto lo = [&](int k) {
    return l.down_min[node * K + k] + coefficient(k, layer) * value + below.up_min[c * K + k];
  };
  auto hi = [&](int k) {
    return l.down_max[node * K + k] + coefficient(k, layer) * value + below.up_max[c * K + k];
  };
  const double q0 = lo(0);
  switch (constraint_.kind()) {
    case ConstraintKind::kLinear:
      return q0;
    case ConstraintKind::kDiagonalKnapsack:
      return q0 + constraint_.omega() * std::sqrt(std::max(0.0, lo(1)));
    case ConstraintKind::kGeneral: {
      double squares = 0.0;
      for (int k = 1; k < K; ++k) {
        const double mn = lo(k);
        const double mx = hi(k);
        if (mn > 0.0) {
          squares += mn * mn;
        } else if (mx < 0.0) {
          squares += mx * mx;
        }
      }
      return q0 + constraint_.omega() * std::sqrt(squares);
    }
  }
  return q0;
}

bool RefinementBuilder::filter_arc(int layer, int node, int value) const {
  return filter_lhs(layer, node, value) > constraint_.b() + kFeasibilityTolerance;
}

int RefinementBuilder::filter_layer(int layer) {
  if (layer < 0 || layer >= n_ || layers_[n_].size() == 0) return 0;
  Layer& l = layers_[layer];
  int removed = 0;
  for (int u = 0; u < l.size(); ++u) {
    for (int v = 0; v < 2; ++v) {
      if (l.children[u][v] == kNoNode) continue;
      if (filter_arc(layer, u, v)) {
        l.children[u][v] = kNoNode;
        ++removed;
      }
    }
  }
  stats_.filtered_arcs += removed;
  return removed;
}

bool RefinementBuilder::refine_round() {
  if (layers_[n_].size() == 0) return false;
  bool modified = false;
  update_bottom_up();
  for (int i = 0; i < n_ && layers_[n_].size() > 0; ++i) {
    update_top_down(i);
    if (layers_[n_].size() == 0) break;
    if (split_layer(i) > 0) modified = true;
    if (filter_layer(i) > 0) modified = true;
  }
  update_top_down(n_);
  ++stats_.rounds;
  return modified;
}

BuildResult RefinementBuilder::run() {
  while (stats_.rounds < config_.max_refinement_rounds) {
    if (!refine_round()) {
      stats_.converged = true;
      break;
    }
  }
  if (layers_[n_].size() == 0) {
    stats_.exact = stats_.converged;
    return BuildResult{Bdd::empty(n_), stats_};
  }
  stats_.exact = stats_.converged && all_prefix_states_singleton();
  return BuildResult{reduce(snapshot()), stats_};
}

Bdd RefinementBuilder::snapshot() const {
  if (layers_[n_].size() == 0) return Bdd::empty(n_);
  LayeredGraph graph;
  graph.num_vars = n_;
  graph.layers.reserve(n_);
  for (int i = 0; i < n_; ++i) graph.layers.push_back(layers_[i].children);
  return Bdd::from_layers(graph);
}

bool RefinementBuilder::all_prefix_states_singleton() const {
  for (int i = 0; i < n_; ++i) {
    const Layer& l = layers_[i];
    for (std::size_t j = 0; j < l.down_min.size(); ++j) {
      if (!(l.down_max[j] - l.down_min[j] < config_.split_threshold)) return false;
    }
  }
  return true;
}

}  // namespace bddcut
