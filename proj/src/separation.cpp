#include "bddcut/separation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

#include "bddcut/lp.hpp"
#include "bddcut/maxflow.hpp"

namespace bddcut {

namespace {

constexpr double kPricingTolerance = 1e-9;
constexpr int kMaxColumns = 100000;

void check_point(const Bdd& bdd, std::span<const double> x, const char* what) {
  if (bdd.is_empty()) throw std::invalid_argument(std::string(what) + ": empty BDD");
  if (static_cast<int>(x.size()) != bdd.num_vars()) {
    throw std::invalid_argument(std::string(what) + ": point has dimension " +
                                std::to_string(x.size()) + ", BDD has " +
                                std::to_string(bdd.num_vars()));
  }
  for (double v : x) {
    if (!(v >= -1e-9 && v <= 1.0 + 1e-9)) {
      throw std::invalid_argument(std::string(what) + ": point outside [0,1]^n");
    }
  }
}

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

double arc_capacity(const Bdd& bdd, ArcId a, std::span<const double> x) {
  const double xi = clamp01(x[bdd.arc_var(a)]);
  return bdd.arc(a).value == 1 ? xi : 1.0 - xi;
}

struct PricedPath {
  BitVector bits;
  double cost = 0.0;
};

// Cheapest root-terminal path when 1-arcs of layer i cost cost1[i] and
// 0-arcs cost cost0[i]. Ties go to the first arc in arc order.
PricedPath shortest_path(const Bdd& bdd, std::span<const double> cost1,
                         std::span<const double> cost0) {
  const int nodes = bdd.num_nodes();
  std::vector<double> dist(static_cast<std::size_t>(nodes),
                           std::numeric_limits<double>::infinity());
  std::vector<ArcId> pred(static_cast<std::size_t>(nodes), kNoArc);
  dist[bdd.root()] = 0.0;
  for (ArcId a = 0; a < bdd.num_arcs(); ++a) {
    const Arc& arc = bdd.arc(a);
    const int i = bdd.arc_var(a);
    const double d = dist[arc.source] + (arc.value == 1 ? cost1[i] : cost0[i]);
    if (d < dist[arc.target]) {
      dist[arc.target] = d;
      pred[arc.target] = a;
    }
  }
  PricedPath path;
  path.bits.assign(static_cast<std::size_t>(bdd.num_vars()), 0);
  path.cost = dist[bdd.terminal()];
  for (NodeId u = bdd.terminal(); u != bdd.root();) {
    const Arc& arc = bdd.arc(pred[u]);
    path.bits[bdd.layer_of(arc.source)] = static_cast<std::uint8_t>(arc.value);
    u = arc.source;
  }
  return path;
}

void add_balance_rows(const Bdd& bdd, lp::Problem& problem) {
  for (NodeId u = bdd.root() + 1; u < bdd.terminal(); ++u) {
    std::vector<std::pair<int, double>> row;
    for (ArcId a : bdd.in_arcs(u)) row.emplace_back(a, 1.0);
    for (int v = 0; v < 2; ++v) {
      if (bdd.child(u, v) != kNoArc) row.emplace_back(bdd.child(u, v), -1.0);
    }
    problem.add_sparse_row(row, lp::Relation::kEqual, 0.0);
  }
}

void set_root_outflow_objective(const Bdd& bdd, lp::Problem& problem) {
  for (int v = 0; v < 2; ++v) {
    if (bdd.child(bdd.root(), v) != kNoArc) problem.set_objective(bdd.child(bdd.root(), v), 1.0);
  }
}

}  // namespace

double flow_cut_lhs(std::span<const double> nu, std::span<const double> eta,
                    std::span<const double> x) {
  if (nu.size() != x.size() || eta.size() != x.size()) {
    throw std::invalid_argument("flow_cut_lhs: dimension mismatch");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += nu[i] * x[i] + eta[i] * (1.0 - x[i]);
  return s;
}

JointFlowResult maxflow_joint(const Bdd& bdd, std::span<const double> x) {
  check_point(bdd, x, "maxflow_joint");
  const int n = bdd.num_vars();
  std::vector<double> cap1(static_cast<std::size_t>(n));
  std::vector<double> cap0(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    cap1[i] = clamp01(x[i]);
    cap0[i] = 1.0 - cap1[i];
  }

  std::vector<BitVector> columns;
  std::set<BitVector> known;
  // Seed with the path closest to x' in L1 distance.
  {
    std::vector<double> c1(static_cast<std::size_t>(n));
    std::vector<double> c0(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      c1[i] = cap0[i];
      c0[i] = cap1[i];
    }
    PricedPath seed = shortest_path(bdd, c1, c0);
    known.insert(seed.bits);
    columns.push_back(std::move(seed.bits));
  }

  JointFlowResult result;
  result.nu.assign(static_cast<std::size_t>(n), 0.0);
  result.eta.assign(static_cast<std::size_t>(n), 0.0);
  while (true) {
    const int cols = static_cast<int>(columns.size());
    lp::Problem master(cols, lp::Sense::kMaximize);
    for (int p = 0; p < cols; ++p) master.set_objective(p, 1.0);
    for (int value : {1, 0}) {
      for (int i = 0; i < n; ++i) {
        std::vector<std::pair<int, double>> row;
        for (int p = 0; p < cols; ++p) {
          if (columns[p][i] == value) row.emplace_back(p, 1.0);
        }
        master.add_sparse_row(row, lp::Relation::kLessEqual, value == 1 ? cap1[i] : cap0[i]);
      }
    }
    const lp::Solution sol = lp::solve(master);
    ++result.lp_solves;
    if (!sol.optimal()) {
      throw std::runtime_error("maxflow_joint: master LP " + lp::to_string(sol.status));
    }
    for (int i = 0; i < n; ++i) {
      result.nu[i] = std::max(0.0, sol.dual[i]);
      result.eta[i] = std::max(0.0, sol.dual[n + i]);
    }
    result.value = sol.objective;
    PricedPath priced = shortest_path(bdd, result.nu, result.eta);
    if (priced.cost >= 1.0 - kPricingTolerance) break;
    if (!known.insert(priced.bits).second) break;
    if (cols >= kMaxColumns) throw std::runtime_error("maxflow_joint: column limit reached");
    columns.push_back(std::move(priced.bits));
  }
  result.columns = static_cast<int>(columns.size());
  return result;
}

JointFlowResult maxflow_joint_lp(const Bdd& bdd, std::span<const double> x) {
  check_point(bdd, x, "maxflow_joint_lp");
  const int n = bdd.num_vars();
  lp::Problem problem(bdd.num_arcs(), lp::Sense::kMaximize);
  set_root_outflow_objective(bdd, problem);
  add_balance_rows(bdd, problem);
  std::vector<int> row1(static_cast<std::size_t>(n), -1);
  std::vector<int> row0(static_cast<std::size_t>(n), -1);
  for (int i = 0; i < n; ++i) {
    std::vector<std::pair<int, double>> ones;
    std::vector<std::pair<int, double>> zeros;
    for (ArcId a = bdd.arc_layer_begin(i); a < bdd.arc_layer_begin(i + 1); ++a) {
      (bdd.arc(a).value == 1 ? ones : zeros).emplace_back(a, 1.0);
    }
    const double xi = clamp01(x[i]);
    if (!ones.empty()) row1[i] = problem.add_sparse_row(ones, lp::Relation::kLessEqual, xi);
    if (!zeros.empty()) {
      row0[i] = problem.add_sparse_row(zeros, lp::Relation::kLessEqual, 1.0 - xi);
    }
  }
  const lp::Solution sol = lp::solve(problem);
  if (!sol.optimal()) {
    throw std::runtime_error("maxflow_joint_lp: LP " + lp::to_string(sol.status));
  }
  JointFlowResult result;
  result.value = sol.objective;
  result.lp_solves = 1;
  result.nu.assign(static_cast<std::size_t>(n), 0.0);
  result.eta.assign(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    if (row1[i] >= 0) result.nu[i] = std::max(0.0, sol.dual[row1[i]]);
    if (row0[i] >= 0) result.eta[i] = std::max(0.0, sol.dual[row0[i]]);
  }
  return result;
}

std::optional<CglpCut> cglp_cut(const Bdd& bdd, std::span<const double> x) {
  JointFlowResult flow = maxflow_joint(bdd, x);
  if (1.0 - flow.value <= kCutViolationThreshold) return std::nullopt;
  const PricedPath cheapest = shortest_path(bdd, flow.nu, flow.eta);
  if (!(cheapest.cost > 0.0)) {
    throw std::runtime_error("cglp_cut: multipliers do not define a cut");
  }
  if (cheapest.cost < 1.0) {
    for (double& v : flow.nu) v /= cheapest.cost;
    for (double& v : flow.eta) v /= cheapest.cost;
  }
  CglpCut cut{std::move(flow.nu), std::move(flow.eta), 0.0};
  cut.lhs_at_point = flow_cut_lhs(cut.nu, cut.eta, x);
  if (1.0 - cut.lhs_at_point <= kCutViolationThreshold) return std::nullopt;
  return cut;
}

CapFlowResult maxflow_cap(const Bdd& bdd, std::span<const double> x) {
  check_point(bdd, x, "maxflow_cap");
  const int n = bdd.num_vars();
  FlowNetwork net(bdd.num_nodes());
  for (ArcId a = 0; a < bdd.num_arcs(); ++a) {
    net.add_edge(bdd.arc(a).source, bdd.arc(a).target, arc_capacity(bdd, a, x));
  }
  CapFlowResult result;
  result.value = net.max_flow(bdd.root(), bdd.terminal());
  result.cut_arcs.assign(static_cast<std::size_t>(bdd.num_arcs()), 0);
  result.coef1.assign(static_cast<std::size_t>(n), 0.0);
  result.coef0.assign(static_cast<std::size_t>(n), 0.0);
  for (int e : net.min_cut_edges()) {
    result.cut_arcs[e] = 1;
    (bdd.arc(e).value == 1 ? result.coef1 : result.coef0)[bdd.arc_var(e)] += 1.0;
    result.cut_capacity += net.capacity(e);
  }
  return result;
}

double maxflow_cap_lp(const Bdd& bdd, std::span<const double> x) {
  check_point(bdd, x, "maxflow_cap_lp");
  lp::Problem problem(bdd.num_arcs(), lp::Sense::kMaximize);
  set_root_outflow_objective(bdd, problem);
  for (ArcId a = 0; a < bdd.num_arcs(); ++a) problem.set_bounds(a, 0.0, arc_capacity(bdd, a, x));
  add_balance_rows(bdd, problem);
  const lp::Solution sol = lp::solve(problem);
  if (!sol.optimal()) throw std::runtime_error("maxflow_cap_lp: LP " + lp::to_string(sol.status));
  return sol.objective;
}

std::optional<MinCutCut> mincut_cut(const Bdd& bdd, std::span<const double> x) {
  CapFlowResult flow = maxflow_cap(bdd, x);
  if (1.0 - flow.value <= kCutViolationThreshold) return std::nullopt;
  MinCutCut cut{std::move(flow.cut_arcs), std::move(flow.coef1), std::move(flow.coef0), 0.0};
  cut.lhs_at_point = flow_cut_lhs(cut.coef1, cut.coef0, x);
  if (1.0 - cut.lhs_at_point <= kCutViolationThreshold) return std::nullopt;
  return cut;
}

Inequality cut_to_inequality(std::span<const double> nu, std::span<const double> eta) {
  if (nu.size() != eta.size()) throw std::invalid_argument("cut_to_inequality: size mismatch");
  Inequality ineq;
  ineq.pi.resize(nu.size());
  ineq.pi0 = -1.0;
  for (std::size_t i = 0; i < nu.size(); ++i) {
    ineq.pi[i] = eta[i] - nu[i];
    ineq.pi0 += eta[i];
  }
  return ineq;
}

Inequality cut_to_inequality(const CglpCut& cut) { return cut_to_inequality(cut.nu, cut.eta); }

Inequality cut_to_inequality(const MinCutCut& cut) {
  return cut_to_inequality(cut.coef1, cut.coef0);
}

}  // namespace bddcut
