#pragma once

// Dense-tableau linear programming kernel.
//
// Two-phase primal simplex over a dense tableau. Pivoting uses Dantzig's
// rule and falls back to Bland's rule after a run of degenerate pivots.
// Intended for desk-scale problems: memory is rows x (vars + rows) doubles,
// so a few thousand rows and columns is the practical ceiling.

#include <cstddef>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace bddcut::lp {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class Sense { kMaximize, kMinimize };
enum class Relation { kLessEqual, kEqual, kGreaterEqual };
enum class Status { kOptimal, kInfeasible, kUnbounded, kNumericalFailure };

std::string to_string(Status status);

class Problem {
 public:
  explicit Problem(int num_vars, Sense sense = Sense::kMaximize);

  int num_vars() const { return static_cast<int>(objective_.size()); }
  int num_rows() const { return static_cast<int>(rows_.size()); }
  Sense sense() const { return sense_; }

  void set_objective(int var, double coefficient);
  void set_objective(std::vector<double> coefficients);
  // Default bounds are [0, +inf).
  void set_bounds(int var, double lower, double upper);

  // Dense row; size must equal num_vars(). Returns the row index.
  int add_row(std::vector<double> coefficients, Relation relation, double rhs);
  // Sparse row given as (var, coefficient) pairs.
  int add_sparse_row(const std::vector<std::pair<int, double>>& entries,
                     Relation relation, double rhs);

  const std::vector<double>& objective() const { return objective_; }
  double lower(int var) const { return lower_[var]; }
  double upper(int var) const { return upper_[var]; }
  const std::vector<double>& row(int r) const { return rows_[r]; }
  Relation relation(int r) const { return relations_[r]; }
  double rhs(int r) const { return rhs_[r]; }

 private:
  Sense sense_;
  std::vector<double> objective_;
  std::vector<double> lower_;
  std::vector<double> upper_;
  std::vector<std::vector<double>> rows_;
  std::vector<Relation> relations_;
  std::vector<double> rhs_;
};

struct Options {
  double pivot_tolerance = 1e-9;
  double feasibility_tolerance = 1e-9;
  int max_iterations = 200000;
  // Consecutive degenerate pivots before switching to Bland's rule.
  int degenerate_run_before_bland = 50;
};

struct Solution {
  Status status = Status::kNumericalFailure;
  double objective = 0.0;
  std::vector<double> primal;
  // One multiplier per row, in the sign convention of the problem's sense:
  // for maximization, <= rows carry y >= 0 and >= rows carry y <= 0.
  std::vector<double> dual;
  // c - A^T y per variable.
  std::vector<double> reduced_costs;
  int iterations = 0;

  bool optimal() const { return status == Status::kOptimal; }
};

Solution solve(const Problem& problem, const Options& options = {});

// Called after every solve() with the problem and its result. Process-wide
// and not synchronized; install it before any solving starts.
using SolveObserver = std::function<void(const Problem&, const Solution&)>;
void set_solve_observer(SolveObserver callback);

// Quality measures of an optimal solution, used by tests and callers that
// want to assert on solver output.
struct Certificate {
  double primal_residual = 0.0;  // max row / bound violation
  double dual_residual = 0.0;    // max sign violation of duals / reduced costs
  double duality_gap = 0.0;      // |primal objective - dual objective|
  double dual_objective = 0.0;
};

Certificate certify(const Problem& problem, const Solution& solution);

}  // namespace bddcut::lp
