#pragma once

// Separation of fractional points from conv(Sol_B).
//
// Joint-capacity model: route one unit of flow from root to terminal where
// all 1-arcs of layer i share capacity x_i and all 0-arcs share 1 - x_i. Its
// value z reaches 1 exactly when x is in conv(Sol_B); otherwise the optimal
// multipliers (nu, eta) of the capacity rows give the cut
//     sum_i nu_i x_i + sum_i eta_i (1 - x_i) >= 1.
//
// Per-arc model: every arc individually gets capacity x_i or 1 - x_i. It is
// a plain max-flow problem; a minimum cut with fewer than one unit of
// capacity gives the same kind of cut with integer coefficients counting
// the cut arcs per layer and value.

#include <optional>
#include <span>
#include <vector>

#include "bddcut/bdd.hpp"
#include "bddcut/lifting.hpp"

namespace bddcut {

// A cut is emitted only when 1 - lhs(x') exceeds this.
inline constexpr double kCutViolationThreshold = 1e-6;

struct JointFlowResult {
  double value = 0.0;
  std::vector<double> nu;   // multipliers of the 1-arc rows
  std::vector<double> eta;  // multipliers of the 0-arc rows
  int columns = 0;          // paths generated (column generation only)
  int lp_solves = 0;
};

// Path formulation solved by column generation: the restricted master is
// max sum_p w_p subject to the 2n layer capacity rows, and pricing is a
// shortest root-terminal path under arc costs nu_i (1-arcs) / eta_i (0-arcs).
// The master duals are therefore a feasible point of the cut-generating LP
// at termination. Throws std::runtime_error on LP failure.
JointFlowResult maxflow_joint(const Bdd& bdd, std::span<const double> x);

// The same model in arc-flow form (one variable per arc, balance rows per
// node) solved as one LP. Quadratic memory in |A|; intended for small BDDs
// and cross-checks.
JointFlowResult maxflow_joint_lp(const Bdd& bdd, std::span<const double> x);

struct CglpCut {
  std::vector<double> nu;
  std::vector<double> eta;
  double lhs_at_point = 0.0;  // sum nu x' + eta (1 - x')
};

// Cut from maxflow_joint, or nothing when x' is not separated. The
// multipliers are rescaled so that every root-terminal path has lhs >= 1.
std::optional<CglpCut> cglp_cut(const Bdd& bdd, std::span<const double> x);

struct CapFlowResult {
  double value = 0.0;
  std::vector<char> cut_arcs;  // per BDD arc, 1 when in the minimum cut
  std::vector<double> coef1;   // cut 1-arcs per layer
  std::vector<double> coef0;   // cut 0-arcs per layer
  double cut_capacity = 0.0;
};

CapFlowResult maxflow_cap(const Bdd& bdd, std::span<const double> x);

// Per-arc model as an LP, for checking the combinatorial solver.
double maxflow_cap_lp(const Bdd& bdd, std::span<const double> x);

struct MinCutCut {
  std::vector<char> cut_arcs;
  std::vector<double> coef1;
  std::vector<double> coef0;
  double lhs_at_point = 0.0;
};

std::optional<MinCutCut> mincut_cut(const Bdd& bdd, std::span<const double> x);

// sum nu x + sum eta (1 - x) >= 1  <=>  sum (eta - nu) x <= sum eta - 1.
Inequality cut_to_inequality(std::span<const double> nu, std::span<const double> eta);
Inequality cut_to_inequality(const CglpCut& cut);
Inequality cut_to_inequality(const MinCutCut& cut);

// sum nu x + sum eta (1 - x).
double flow_cut_lhs(std::span<const double> nu, std::span<const double> eta,
                    std::span<const double> x);

}  // namespace bddcut
