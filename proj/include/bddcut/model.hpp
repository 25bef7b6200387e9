#pragma once

// Binary programs with second-order-cone constraints
//
//   max c.x  s.t.  a_j.x + Omega_j * || D_j x - h_j ||_2 <= b_j,  x in {0,1}^n
//
// plus the two special cases used throughout the library: the diagonal SOC
// knapsack  a.x + Omega * sqrt(sum_i d_ii^2 x_i) <= b  and plain linear
// constraints a.x <= b.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace bddcut {

enum class ConstraintKind { kGeneral, kDiagonalKnapsack, kLinear };

std::string to_string(ConstraintKind kind);
ConstraintKind parse_constraint_kind(const std::string& text);

// Sparse entry of D: row k (one quadratic term d_k), column i (variable).
struct MatrixEntry {
  int row;
  int col;
  double value;
};

// Feasibility slack shared by evaluation and BDD filtering, so that the
// compiled diagrams and the enumeration oracle agree on borderline points.
inline constexpr double kFeasibilityTolerance = 1e-9;

class SocConstraint {
 public:
  // General form; rows of D are the d_k, h has one entry per row.
  static SocConstraint general(std::vector<double> a, int num_rows,
                               std::vector<MatrixEntry> entries, std::vector<double> h,
                               double omega, double b);
  // Diagonal knapsack; diag holds d_ii (the constraint uses d_ii^2).
  static SocConstraint diagonal_knapsack(std::vector<double> a, std::vector<double> diag,
                                         double omega, double b);
  static SocConstraint linear(std::vector<double> a, double b);

  ConstraintKind kind() const { return kind_; }
  int num_vars() const { return static_cast<int>(a_.size()); }
  // Number of quadratic terms l (n for the diagonal knapsack, 0 for linear).
  int num_rows() const { return num_rows_; }
  const std::vector<double>& a() const { return a_; }
  // Dense D, row-major num_rows x num_vars.
  const std::vector<double>& d() const { return d_; }
  double d(int row, int col) const { return d_[static_cast<std::size_t>(row) * a_.size() + col]; }
  const std::vector<double>& h() const { return h_; }
  double omega() const { return omega_; }
  double b() const { return b_; }

  std::vector<MatrixEntry> nonzeros() const;

  bool operator==(const SocConstraint&) const = default;

 private:
  SocConstraint() = default;

  ConstraintKind kind_ = ConstraintKind::kLinear;
  int num_rows_ = 0;
  std::vector<double> a_;
  std::vector<double> d_;
  std::vector<double> h_;
  double omega_ = 0.0;
  double b_ = 0.0;
};

// Left-hand side value at x (fractional or integral).
double evaluate(const SocConstraint& c, std::span<const double> x);
double evaluate(const SocConstraint& c, std::span<const std::uint8_t> x);
bool is_feasible(const SocConstraint& c, std::span<const std::uint8_t> x);

struct InstanceMetadata {
  std::string family;  // "soc-cc", "soc-k", or free text
  std::uint64_t seed = 0;
  double tightness = 0.0;
  double omega = 0.0;

  bool operator==(const InstanceMetadata&) const = default;
};

struct Instance {
  int n = 0;
  std::vector<double> c;  // maximization objective
  std::vector<SocConstraint> constraints;
  std::optional<InstanceMetadata> metadata;

  int m() const { return static_cast<int>(constraints.size()); }
  bool operator==(const Instance&) const = default;
};

// Throws std::invalid_argument on inconsistent dimensions.
void validate(const Instance& instance);

bool is_feasible(const Instance& instance, std::span<const std::uint8_t> x);

// Right-hand side b = t * (sum_i a_i^+ + Omega * sqrt(sum_k max(sum_i d_ki^+,
// sum_i d_ki^-)^2)); for the diagonal knapsack the root term reduces to
// sqrt(sum_i d_ii^2).
double tightness_rhs(const SocConstraint& shape, double tightness);

// Random instance families. Both are deterministic functions of their
// arguments on every platform (see rng.hpp).
Instance generate_soc_cc(int n, int m, double omega, double tightness, std::uint64_t seed);
Instance generate_soc_k(int n, int m, double omega, double tightness, std::uint64_t seed);

}  // namespace bddcut
