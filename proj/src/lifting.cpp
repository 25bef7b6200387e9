#include "bddcut/lifting.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace bddcut {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

template <typename T>
double lhs_impl(const Inequality& ineq, std::span<const T> x) {
  if (x.size() != ineq.pi.size()) throw std::invalid_argument("inequality: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += ineq.pi[i] * static_cast<double>(x[i]);
  return s;
}

void check_dimensions(const Bdd& bdd, const Inequality& ineq, const char* what) {
  if (bdd.is_empty()) throw std::invalid_argument(std::string(what) + ": empty BDD");
  if (ineq.num_vars() != bdd.num_vars()) {
    throw std::invalid_argument(std::string(what) + ": inequality has dimension " +
                                std::to_string(ineq.num_vars()) + ", BDD has " +
                                std::to_string(bdd.num_vars()));
  }
}

}  // namespace

double lhs(const Inequality& ineq, std::span<const double> x) { return lhs_impl(ineq, x); }
double lhs(const Inequality& ineq, std::span<const std::uint8_t> x) { return lhs_impl(ineq, x); }
double violation(const Inequality& ineq, std::span<const double> x) {
  return lhs(ineq, x) - ineq.pi0;
}
double violation(const Inequality& ineq, std::span<const std::uint8_t> x) {
  return lhs(ineq, x) - ineq.pi0;
}

std::string to_string(SlackClass cls) {
  switch (cls) {
    case SlackClass::kNegative:
      return "S-";
    case SlackClass::kZero:
      return "S0";
    case SlackClass::kPositive:
      return "S+";
    case SlackClass::kFixed:
      return "fixed";
  }
  return "?";
}

int DSlacks::count(SlackClass c) const {
  return static_cast<int>(std::count(cls.begin(), cls.end(), c));
}

bool is_zero_slack(double lambda, double pi0) {
  return std::abs(lambda) <= 1e-9 * std::max(1.0, std::abs(pi0));
}

Inequality tighten_rhs(const Bdd& bdd, const Inequality& ineq) {
  check_dimensions(bdd, ineq, "tighten_rhs");
  const NodePotentials pots = potentials(bdd, ineq.pi);
  return Inequality{ineq.pi, pots.down[bdd.terminal()]};
}

DSlacks d_slacks(const Bdd& bdd, const Inequality& ineq) {
  check_dimensions(bdd, ineq, "d_slacks");
  const int n = bdd.num_vars();
  const NodePotentials pots = potentials(bdd, ineq.pi);
  const std::vector<double> theta = arc_lengths(bdd, pots, ineq.pi);
  DSlacks s;
  s.lambda0.assign(n, kNegInf);
  s.lambda1.assign(n, kNegInf);
  for (ArcId a = 0; a < bdd.num_arcs(); ++a) {
    const int i = bdd.arc_var(a);
    double& slot = bdd.arc(a).value == 0 ? s.lambda0[i] : s.lambda1[i];
    slot = std::max(slot, theta[a]);
  }
  s.lambda.resize(n);
  s.cls.resize(n);
  for (int i = 0; i < n; ++i) {
    if (s.lambda0[i] == kNegInf || s.lambda1[i] == kNegInf) {
      s.lambda[i] = std::numeric_limits<double>::quiet_NaN();
      s.cls[i] = SlackClass::kFixed;
      continue;
    }
    s.lambda[i] = s.lambda0[i] - s.lambda1[i];
    if (is_zero_slack(s.lambda[i], ineq.pi0)) {
      s.cls[i] = SlackClass::kZero;
    } else {
      s.cls[i] = s.lambda[i] > 0 ? SlackClass::kPositive : SlackClass::kNegative;
    }
  }
  return s;
}

Inequality lift_step(const Inequality& ineq, int index, const DSlacks& slacks) {
  if (index < 0 || index >= ineq.num_vars() || index >= slacks.size()) {
    throw std::invalid_argument("lift_step: index out of range");
  }
  const SlackClass cls = slacks.cls[index];
  if (cls == SlackClass::kFixed) throw std::invalid_argument("lift_step: index is fixed");
  if (cls == SlackClass::kZero) throw std::invalid_argument("lift_step: zero slack");
  const double lambda = slacks.lambda[index];
  Inequality out = ineq;
  out.pi[index] += lambda;
  if (cls == SlackClass::kNegative) out.pi0 += lambda;
  return out;
}

LiftResult sequential_lift(const Bdd& bdd, const Inequality& ineq, LiftRule rule) {
  check_dimensions(bdd, ineq, "sequential_lift");
  const int n = bdd.num_vars();
  LiftResult result{ineq, {}};
  const int step_limit = 2 * n + 2;
  bool fixed_recorded = false;
  while (true) {
    const DSlacks slacks = d_slacks(bdd, result.inequality);
    if (!fixed_recorded) {
      for (int i = 0; i < n; ++i) {
        if (slacks.cls[i] == SlackClass::kFixed) result.report.fixed.push_back(i);
      }
      fixed_recorded = true;
    }
    int pick = -1;
    for (int i = 0; i < n; ++i) {
      const SlackClass c = slacks.cls[i];
      if (c == SlackClass::kFixed || c == SlackClass::kZero) continue;
      if (pick < 0) {
        pick = i;
        if (rule == LiftRule::kLowestIndex) break;
      } else if (std::abs(slacks.lambda[i]) < std::abs(slacks.lambda[pick])) {
        pick = i;
      }
    }
    if (pick < 0) {
      result.report.termination = LiftTermination::kAllZero;
      return result;
    }
    if (static_cast<int>(result.report.steps.size()) >= step_limit) {
      result.report.termination = LiftTermination::kStepLimit;
      return result;
    }
    result.inequality = lift_step(result.inequality, pick, slacks);
    result.report.steps.push_back({pick, slacks.lambda[pick], result.inequality});
  }
}

int face_dimension(const std::vector<std::vector<double>>& points) {
  if (points.empty()) return -1;
  if (points.size() == 1) return 0;
  const auto dim = static_cast<Eigen::Index>(points[0].size());
  Eigen::MatrixXd m(static_cast<Eigen::Index>(points.size()) - 1, dim);
  for (std::size_t r = 1; r < points.size(); ++r) {
    if (static_cast<Eigen::Index>(points[r].size()) != dim) {
      throw std::invalid_argument("face_dimension: points of different dimension");
    }
    for (Eigen::Index c = 0; c < dim; ++c) {
      m(static_cast<Eigen::Index>(r) - 1, c) = points[r][c] - points[0][c];
    }
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
  lu.setThreshold(1e-8);
  return static_cast<int>(lu.rank());
}

int face_dimension(const std::vector<BitVector>& points) {
  std::vector<std::vector<double>> real;
  real.reserve(points.size());
  for (const BitVector& p : points) real.emplace_back(p.begin(), p.end());
  return face_dimension(real);
}

std::vector<BitVector> tight_points(const std::vector<BitVector>& points,
                                    const Inequality& ineq, double tol) {
  std::vector<BitVector> out;
  for (const BitVector& p : points) {
    if (std::abs(violation(ineq, std::span<const std::uint8_t>(p))) <= tol) out.push_back(p);
  }
  return out;
}

}  // namespace bddcut
