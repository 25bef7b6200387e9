#pragma once

// Disjunctive slacks and sequential combinatorial lifting of inequalities
// pi.x <= pi0 against the point set of a BDD.

#include <span>
#include <string>
#include <vector>

#include "bddcut/bdd.hpp"

namespace bddcut {

struct Inequality {
  std::vector<double> pi;
  double pi0 = 0.0;

  int num_vars() const { return static_cast<int>(pi.size()); }
  bool operator==(const Inequality&) const = default;
};

double lhs(const Inequality& ineq, std::span<const double> x);
double lhs(const Inequality& ineq, std::span<const std::uint8_t> x);
// pi.x - pi0; positive means violated.
double violation(const Inequality& ineq, std::span<const double> x);
double violation(const Inequality& ineq, std::span<const std::uint8_t> x);

// Sign class of lambda_i. kFixed marks an index whose 0- or 1-branch holds
// no point of the BDD.
enum class SlackClass { kNegative, kZero, kPositive, kFixed };

std::string to_string(SlackClass cls);

struct DSlacks {
  std::vector<double> lambda0;  // max pi.x over points with x_i = 0 (-inf if none)
  std::vector<double> lambda1;  // max pi.x over points with x_i = 1 (-inf if none)
  std::vector<double> lambda;   // lambda0 - lambda1 (NaN when fixed)
  std::vector<SlackClass> cls;

  int size() const { return static_cast<int>(lambda.size()); }
  int count(SlackClass c) const;
};

// |lambda| <= 1e-9 * max(1, |pi0|).
bool is_zero_slack(double lambda, double pi0);

// (pi, max over the BDD of pi.x). Throws std::invalid_argument on an empty BDD.
Inequality tighten_rhs(const Bdd& bdd, const Inequality& ineq);

// Conditional maxima from two longest-path passes. ineq.pi0 only sets the
// scale of the zero test.
DSlacks d_slacks(const Bdd& bdd, const Inequality& ineq);

// pi_i += lambda_i; pi0 stays for lambda_i > 0 and becomes pi0 + lambda_i
// otherwise. Throws std::invalid_argument for zero or fixed slacks.
Inequality lift_step(const Inequality& ineq, int index, const DSlacks& slacks);

enum class LiftRule {
  kMinAbsSlack,  // smallest |lambda_i|, ties to the lowest index
  kLowestIndex,  // first index with a nonzero slack
};

struct LiftStepRecord {
  int index = -1;
  double lambda = 0.0;
  Inequality result;
};

enum class LiftTermination { kAllZero, kStepLimit };

struct LiftReport {
  std::vector<LiftStepRecord> steps;
  std::vector<int> fixed;  // indices skipped because a branch is empty
  LiftTermination termination = LiftTermination::kAllZero;
};

struct LiftResult {
  Inequality inequality;
  LiftReport report;
};

// Repeats d_slacks + lift_step until all non-fixed slacks are zero. The
// input is expected to be supporting (see tighten_rhs). Stops with
// kStepLimit after 2n + 2 steps, which does not happen for well-scaled input.
LiftResult sequential_lift(const Bdd& bdd, const Inequality& ineq,
                           LiftRule rule = LiftRule::kMinAbsSlack);

// Dimension of the affine hull of the points: -1 for none, 0 for one.
// Rank is computed with a 1e-8 threshold.
int face_dimension(const std::vector<std::vector<double>>& points);
int face_dimension(const std::vector<BitVector>& points);

// Points with |pi.x - pi0| <= tol.
std::vector<BitVector> tight_points(const std::vector<BitVector>& points,
                                    const Inequality& ineq, double tol = 1e-9);

}  // namespace bddcut
