#include "bddcut/lp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bddcut::lp {

std::string to_string(Status status) {
  switch (status) {
    case Status::kOptimal:
      return "optimal";
    case Status::kInfeasible:
      return "infeasible";
    case Status::kUnbounded:
      return "unbounded";
    case Status::kNumericalFailure:
      return "numerical-failure";
  }
  return "unknown";
}

Problem::Problem(int num_vars, Sense sense)
    : sense_(sense),
      objective_(static_cast<std::size_t>(num_vars), 0.0),
      lower_(static_cast<std::size_t>(num_vars), 0.0),
      upper_(static_cast<std::size_t>(num_vars), kInfinity) {
  if (num_vars < 0) throw std::invalid_argument("lp: negative variable count");
}

void Problem::set_objective(int var, double coefficient) {
  if (!std::isfinite(coefficient)) {
    throw std::invalid_argument("lp: objective coefficients must be finite");
  }
  objective_.at(static_cast<std::size_t>(var)) = coefficient;
}

void Problem::set_objective(std::vector<double> coefficients) {
  if (coefficients.size() != objective_.size()) {
    throw std::invalid_argument("lp: objective size mismatch");
  }
  for (double c : coefficients) {
    if (!std::isfinite(c)) {
      throw std::invalid_argument("lp: objective coefficients must be finite");
    }
  }
  objective_ = std::move(coefficients);
}

void Problem::set_bounds(int var, double lower, double upper) {
  if (std::isnan(lower) || std::isnan(upper)) {
    throw std::invalid_argument("lp: NaN bound");
  }
  if (lower > upper) throw std::invalid_argument("lp: lower bound above upper bound");
  lower_.at(static_cast<std::size_t>(var)) = lower;
  upper_.at(static_cast<std::size_t>(var)) = upper;
}

int Problem::add_row(std::vector<double> coefficients, Relation relation,
                     double rhs) {
  if (coefficients.size() != objective_.size()) {
    throw std::invalid_argument("lp: row size mismatch");
  }
  if (!std::isfinite(rhs)) throw std::invalid_argument("lp: rhs must be finite");
  rows_.push_back(std::move(coefficients));
  relations_.push_back(relation);
  rhs_.push_back(rhs);
  return num_rows() - 1;
}

int Problem::add_sparse_row(const std::vector<std::pair<int, double>>& entries,
                            Relation relation, double rhs) {
  std::vector<double> dense(objective_.size(), 0.0);
  for (const auto& [var, coef] : entries) {
    dense.at(static_cast<std::size_t>(var)) += coef;
  }
  return add_row(std::move(dense), relation, rhs);
}

namespace {

// Mapping of a user variable onto nonnegative internal columns:
//   x = offset + sign * t[col]            (one column)
//   x = t[col] - t[col2]                  (free variable)
struct VarMap {
  int col = -1;
  int col2 = -1;
  double sign = 1.0;
  double offset = 0.0;
};

class Tableau {
 public:
  Tableau(int rows, int cols)
      : rows_(rows), cols_(cols),
        data_(static_cast<std::size_t>(rows) * (cols + 1), 0.0),
        reduced_(static_cast<std::size_t>(cols), 0.0),
        basis_(static_cast<std::size_t>(rows), -1) {}

  double& at(int r, int c) { return data_[index(r, c)]; }
  double at(int r, int c) const { return data_[index(r, c)]; }
  double& rhs(int r) { return data_[index(r, cols_)]; }
  double rhs(int r) const { return data_[index(r, cols_)]; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::vector<int>& basis() { return basis_; }
  const std::vector<int>& basis() const { return basis_; }
  std::vector<double>& reduced() { return reduced_; }
  double objective_value() const { return objective_value_; }

  // Prices out the basis for the given column costs (maximization).
  void set_costs(const std::vector<double>& cost) {
    reduced_ = cost;
    objective_value_ = 0.0;
    for (int r = 0; r < rows_; ++r) {
      const double cb = cost[static_cast<std::size_t>(basis_[r])];
      if (cb == 0.0) continue;
      for (int c = 0; c < cols_; ++c) reduced_[c] -= cb * at(r, c);
      objective_value_ += cb * rhs(r);
    }
  }

  void pivot(int pr, int pc) {
    const double p = at(pr, pc);
    for (int c = 0; c <= cols_; ++c) data_[index(pr, c)] /= p;
    at(pr, pc) = 1.0;
    for (int r = 0; r < rows_; ++r) {
      if (r == pr) continue;
      const double f = at(r, pc);
      if (f == 0.0) continue;
      double* dst = &data_[index(r, 0)];
      const double* src = &data_[index(pr, 0)];
      for (int c = 0; c <= cols_; ++c) dst[c] -= f * src[c];
      at(r, pc) = 0.0;
      if (rhs(r) < 0.0 && rhs(r) > -1e-12) rhs(r) = 0.0;
    }
    const double f = reduced_[pc];
    if (f != 0.0) {
      const double* src = &data_[index(pr, 0)];
      for (int c = 0; c < cols_; ++c) reduced_[c] -= f * src[c];
      reduced_[pc] = 0.0;
      objective_value_ += f * rhs(pr);
    }
    basis_[pr] = pc;
  }

 private:
  std::size_t index(int r, int c) const {
    return static_cast<std::size_t>(r) * (cols_ + 1) + c;
  }

  int rows_;
  int cols_;
  std::vector<double> data_;
  std::vector<double> reduced_;
  std::vector<int> basis_;
  double objective_value_ = 0.0;
};

enum class PhaseResult { kOptimal, kUnbounded, kIterationLimit };

PhaseResult run_simplex(Tableau& t, const std::vector<char>& allowed,
                        const Options& options, int& iterations) {
  int degenerate_run = 0;
  bool bland = false;
  while (true) {
    if (iterations >= options.max_iterations) return PhaseResult::kIterationLimit;
    const auto& d = t.reduced();
    int entering = -1;
    double best = options.pivot_tolerance;
    for (int c = 0; c < t.cols(); ++c) {
      if (!allowed[c] || d[c] <= options.pivot_tolerance) continue;
      if (bland) {
        entering = c;
        break;
      }
      if (d[c] > best) {
        best = d[c];
        entering = c;
      }
    }
    if (entering < 0) return PhaseResult::kOptimal;

    int leaving = -1;
    double best_ratio = 0.0;
    for (int r = 0; r < t.rows(); ++r) {
      const double a = t.at(r, entering);
      if (a <= options.pivot_tolerance) continue;
      const double ratio = std::max(0.0, t.rhs(r)) / a;
      if (leaving < 0 || ratio < best_ratio - 1e-12 ||
          (ratio <= best_ratio + 1e-12 && t.basis()[r] < t.basis()[leaving])) {
        if (leaving < 0 || ratio < best_ratio - 1e-12) best_ratio = ratio;
        leaving = r;
      }
    }
    if (leaving < 0) return PhaseResult::kUnbounded;

    if (best_ratio <= 1e-12) {
      if (++degenerate_run >= options.degenerate_run_before_bland) bland = true;
    } else {
      degenerate_run = 0;
      bland = false;
    }
    t.pivot(leaving, entering);
    ++iterations;
  }
}

}  // namespace

namespace {

Solution solve_impl(const Problem& problem, const Options& options) {
  const int n = problem.num_vars();
  Solution solution;

  // Internal columns for user variables.
  std::vector<VarMap> vars(static_cast<std::size_t>(n));
  int structural = 0;
  struct BoundRow {
    int col;
    double width;
  };
  std::vector<BoundRow> bound_rows;
  for (int j = 0; j < n; ++j) {
    const double lo = problem.lower(j);
    const double hi = problem.upper(j);
    if (lo > hi) {
      solution.status = Status::kInfeasible;
      return solution;
    }
    VarMap& vm = vars[j];
    if (std::isfinite(lo)) {
      vm.col = structural++;
      vm.offset = lo;
      vm.sign = 1.0;
      if (std::isfinite(hi)) bound_rows.push_back({vm.col, hi - lo});
    } else if (std::isfinite(hi)) {
      vm.col = structural++;
      vm.offset = hi;
      vm.sign = -1.0;
    } else {
      vm.col = structural++;
      vm.col2 = structural++;
    }
  }

  const int user_rows = problem.num_rows();
  const int m = user_rows + static_cast<int>(bound_rows.size());

  // Transformed rows over structural columns, rhs made nonnegative.
  std::vector<std::vector<double>> rows(static_cast<std::size_t>(m),
                                        std::vector<double>(structural, 0.0));
  std::vector<Relation> rel(static_cast<std::size_t>(m));
  std::vector<double> rhs(static_cast<std::size_t>(m));
  std::vector<char> negated(static_cast<std::size_t>(m), 0);
  for (int r = 0; r < user_rows; ++r) {
    const auto& a = problem.row(r);
    double b = problem.rhs(r);
    for (int j = 0; j < n; ++j) {
      if (a[j] == 0.0) continue;
      const VarMap& vm = vars[j];
      if (vm.col2 >= 0) {
        rows[r][vm.col] += a[j];
        rows[r][vm.col2] -= a[j];
      } else {
        rows[r][vm.col] += a[j] * vm.sign;
        b -= a[j] * vm.offset;
      }
    }
    rel[r] = problem.relation(r);
    rhs[r] = b;
  }
  for (std::size_t k = 0; k < bound_rows.size(); ++k) {
    const int r = user_rows + static_cast<int>(k);
    rows[r][bound_rows[k].col] = 1.0;
    rel[r] = Relation::kLessEqual;
    rhs[r] = bound_rows[k].width;
  }
  for (int r = 0; r < m; ++r) {
    if (rhs[r] < 0.0) {
      negated[r] = 1;
      rhs[r] = -rhs[r];
      for (double& v : rows[r]) v = -v;
      if (rel[r] == Relation::kLessEqual) {
        rel[r] = Relation::kGreaterEqual;
      } else if (rel[r] == Relation::kGreaterEqual) {
        rel[r] = Relation::kLessEqual;
      }
    }
  }

  // Column layout: structural | slack/surplus | artificial.
  int cols = structural;
  std::vector<int> slack_col(static_cast<std::size_t>(m), -1);
  std::vector<int> art_col(static_cast<std::size_t>(m), -1);
  for (int r = 0; r < m; ++r) {
    if (rel[r] != Relation::kEqual) slack_col[r] = cols++;
  }
  const int first_artificial = cols;
  for (int r = 0; r < m; ++r) {
    if (rel[r] != Relation::kLessEqual) art_col[r] = cols++;
  }

  Tableau t(m, cols);
  std::vector<int> unit_col(static_cast<std::size_t>(m));
  for (int r = 0; r < m; ++r) {
    for (int c = 0; c < structural; ++c) t.at(r, c) = rows[r][c];
    t.rhs(r) = rhs[r];
    if (rel[r] == Relation::kLessEqual) {
      t.at(r, slack_col[r]) = 1.0;
      t.basis()[r] = slack_col[r];
      unit_col[r] = slack_col[r];
    } else {
      if (rel[r] == Relation::kGreaterEqual) t.at(r, slack_col[r]) = -1.0;
      t.at(r, art_col[r]) = 1.0;
      t.basis()[r] = art_col[r];
      unit_col[r] = art_col[r];
    }
  }

  int iterations = 0;
  std::vector<char> allowed(static_cast<std::size_t>(cols), 1);

  // Phase 1.
  if (first_artificial < cols) {
    std::vector<double> cost(static_cast<std::size_t>(cols), 0.0);
    for (int c = first_artificial; c < cols; ++c) cost[c] = -1.0;
    t.set_costs(cost);
    const PhaseResult phase1 = run_simplex(t, allowed, options, iterations);
    if (phase1 == PhaseResult::kIterationLimit) {
      solution.iterations = iterations;
      return solution;
    }
    double scale = 1.0;
    for (double b : rhs) scale = std::max(scale, b);
    if (t.objective_value() < -options.feasibility_tolerance * scale) {
      solution.status = Status::kInfeasible;
      solution.iterations = iterations;
      return solution;
    }
    // Drive zero-level artificials out of the basis where possible.
    for (int r = 0; r < m; ++r) {
      if (t.basis()[r] < first_artificial) continue;
      int pc = -1;
      double best = options.pivot_tolerance;
      for (int c = 0; c < first_artificial; ++c) {
        if (std::abs(t.at(r, c)) > best) {
          best = std::abs(t.at(r, c));
          pc = c;
        }
      }
      if (pc >= 0) {
        t.pivot(r, pc);
        t.rhs(r) = std::max(0.0, t.rhs(r));
      }
    }
    for (int c = first_artificial; c < cols; ++c) allowed[c] = 0;
  }

  // Phase 2 (internally always maximization).
  const double sense_sign = problem.sense() == Sense::kMaximize ? 1.0 : -1.0;
  std::vector<double> cost(static_cast<std::size_t>(cols), 0.0);
  for (int j = 0; j < n; ++j) {
    const double c = sense_sign * problem.objective()[j];
    const VarMap& vm = vars[j];
    if (vm.col2 >= 0) {
      cost[vm.col] += c;
      cost[vm.col2] -= c;
    } else {
      cost[vm.col] += c * vm.sign;
    }
  }
  t.set_costs(cost);
  const PhaseResult phase2 = run_simplex(t, allowed, options, iterations);
  solution.iterations = iterations;
  if (phase2 == PhaseResult::kIterationLimit) return solution;
  if (phase2 == PhaseResult::kUnbounded) {
    solution.status = Status::kUnbounded;
    return solution;
  }

  std::vector<double> value(static_cast<std::size_t>(cols), 0.0);
  for (int r = 0; r < m; ++r) value[t.basis()[r]] = std::max(0.0, t.rhs(r));
  solution.primal.assign(static_cast<std::size_t>(n), 0.0);
  for (int j = 0; j < n; ++j) {
    const VarMap& vm = vars[j];
    solution.primal[j] = vm.col2 >= 0 ? value[vm.col] - value[vm.col2]
                                      : vm.offset + vm.sign * value[vm.col];
  }
  solution.objective = 0.0;
  for (int j = 0; j < n; ++j) {
    solution.objective += problem.objective()[j] * solution.primal[j];
  }

  solution.dual.assign(static_cast<std::size_t>(user_rows), 0.0);
  for (int r = 0; r < user_rows; ++r) {
    double y = -t.reduced()[unit_col[r]];
    if (negated[r]) y = -y;
    solution.dual[r] = sense_sign * y;
  }
  solution.reduced_costs = problem.objective();
  for (int r = 0; r < user_rows; ++r) {
    const auto& a = problem.row(r);
    for (int j = 0; j < n; ++j) solution.reduced_costs[j] -= a[j] * solution.dual[r];
  }

  for (double v : solution.primal) {
    if (!std::isfinite(v)) return solution;
  }
  solution.status = Status::kOptimal;
  return solution;
}

SolveObserver& observer() {
  static SolveObserver instance;
  return instance;
}

}  // namespace

void set_solve_observer(SolveObserver callback) { observer() = std::move(callback); }

Solution solve(const Problem& problem, const Options& options) {
  Solution solution = solve_impl(problem, options);
  if (observer()) observer()(problem, solution);
  return solution;
}

Certificate certify(const Problem& problem, const Solution& solution) {
  Certificate cert;
  const int n = problem.num_vars();
  const bool maximize = problem.sense() == Sense::kMaximize;
  for (int j = 0; j < n; ++j) {
    const double x = solution.primal[j];
    cert.primal_residual = std::max(
        {cert.primal_residual, problem.lower(j) - x, x - problem.upper(j)});
  }
  double dual_obj = 0.0;
  for (int r = 0; r < problem.num_rows(); ++r) {
    const auto& a = problem.row(r);
    double lhs = 0.0;
    for (int j = 0; j < n; ++j) lhs += a[j] * solution.primal[j];
    const double b = problem.rhs(r);
    const double y = solution.dual[r];
    switch (problem.relation(r)) {
      case Relation::kLessEqual:
        cert.primal_residual = std::max(cert.primal_residual, lhs - b);
        cert.dual_residual = std::max(cert.dual_residual, maximize ? -y : y);
        break;
      case Relation::kGreaterEqual:
        cert.primal_residual = std::max(cert.primal_residual, b - lhs);
        cert.dual_residual = std::max(cert.dual_residual, maximize ? y : -y);
        break;
      case Relation::kEqual:
        cert.primal_residual = std::max(cert.primal_residual, std::abs(lhs - b));
        break;
    }
    dual_obj += b * y;
  }
  for (int j = 0; j < n; ++j) {
    const double rc = solution.reduced_costs[j];
    const double lo = problem.lower(j);
    const double hi = problem.upper(j);
    // Bound on which a nonzero reduced cost is charged.
    const double bound = (rc > 0.0) == maximize ? hi : lo;
    if (rc == 0.0) continue;
    if (std::isfinite(bound)) {
      dual_obj += rc * bound;
    } else {
      cert.dual_residual = std::max(cert.dual_residual, std::abs(rc));
    }
  }
  cert.dual_objective = dual_obj;
  cert.duality_gap = std::abs(solution.objective - dual_obj);
  return cert;
}

}  // namespace bddcut::lp
