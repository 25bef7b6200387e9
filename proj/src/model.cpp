#include "bddcut/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bddcut/rng.hpp"

namespace bddcut {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream)
    : engine_(splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x632be59bd9b4e019ULL))) {}

std::int64_t RandomStream::uniform_int(std::int64_t lo, std::int64_t hi) {
  if (lo > hi) throw std::invalid_argument("uniform_int: empty range");
  const std::uint64_t span = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo);
  if (span == ~0ULL) return static_cast<std::int64_t>(engine_());
  const std::uint64_t range = span + 1;
  // Largest multiple of range that fits; draws at or above it are rejected.
  const std::uint64_t limit = (~0ULL / range) * range;
  std::uint64_t r = 0;
  do {
    r = engine_();
  } while (r >= limit);
  return lo + static_cast<std::int64_t>(r % range);
}

double RandomStream::uniform01() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

bool RandomStream::bernoulli(double p) { return uniform01() < p; }

std::string to_string(ConstraintKind kind) {
  switch (kind) {
    case ConstraintKind::kGeneral:
      return "general";
    case ConstraintKind::kDiagonalKnapsack:
      return "diagonal-knapsack";
    case ConstraintKind::kLinear:
      return "linear";
  }
  return "unknown";
}

ConstraintKind parse_constraint_kind(const std::string& text) {
  if (text == "general") return ConstraintKind::kGeneral;
  if (text == "diagonal-knapsack") return ConstraintKind::kDiagonalKnapsack;
  if (text == "linear") return ConstraintKind::kLinear;
  throw std::invalid_argument("unknown constraint kind '" + text + "'");
}

namespace {

void check_finite(const std::vector<double>& v, const char* what) {
  for (double x : v) {
    if (!std::isfinite(x)) throw std::invalid_argument(std::string(what) + " must be finite");
  }
}

}  // namespace

SocConstraint SocConstraint::general(std::vector<double> a, int num_rows,
                                     std::vector<MatrixEntry> entries, std::vector<double> h,
                                     double omega, double b) {
  if (a.empty()) throw std::invalid_argument("constraint needs at least one variable");
  if (num_rows < 0) throw std::invalid_argument("negative row count");
  if (static_cast<int>(h.size()) != num_rows) {
    throw std::invalid_argument("h must have one entry per row of D");
  }
  if (!(omega >= 0.0) || !std::isfinite(omega)) {
    throw std::invalid_argument("omega must be finite and nonnegative");
  }
  if (std::isnan(b)) throw std::invalid_argument("b must not be NaN");
  check_finite(a, "a");
  check_finite(h, "h");
  SocConstraint c;
  c.kind_ = ConstraintKind::kGeneral;
  c.num_rows_ = num_rows;
  c.d_.assign(static_cast<std::size_t>(num_rows) * a.size(), 0.0);
  for (const MatrixEntry& e : entries) {
    if (e.row < 0 || e.row >= num_rows || e.col < 0 || e.col >= static_cast<int>(a.size())) {
      throw std::invalid_argument("D entry out of range");
    }
    if (!std::isfinite(e.value)) throw std::invalid_argument("D must be finite");
    c.d_[static_cast<std::size_t>(e.row) * a.size() + e.col] = e.value;
  }
  c.a_ = std::move(a);
  c.h_ = std::move(h);
  c.omega_ = omega;
  c.b_ = b;
  return c;
}

SocConstraint SocConstraint::diagonal_knapsack(std::vector<double> a, std::vector<double> diag,
                                               double omega, double b) {
  if (a.empty()) throw std::invalid_argument("constraint needs at least one variable");
  if (diag.size() != a.size()) throw std::invalid_argument("diagonal must have length n");
  if (!(omega >= 0.0) || !std::isfinite(omega)) {
    throw std::invalid_argument("omega must be finite and nonnegative");
  }
  if (std::isnan(b)) throw std::invalid_argument("b must not be NaN");
  check_finite(a, "a");
  check_finite(diag, "D");
  SocConstraint c;
  c.kind_ = ConstraintKind::kDiagonalKnapsack;
  const auto n = a.size();
  c.num_rows_ = static_cast<int>(n);
  c.d_.assign(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) c.d_[i * n + i] = diag[i];
  c.h_.assign(n, 0.0);
  c.a_ = std::move(a);
  c.omega_ = omega;
  c.b_ = b;
  return c;
}

SocConstraint SocConstraint::linear(std::vector<double> a, double b) {
  if (a.empty()) throw std::invalid_argument("constraint needs at least one variable");
  if (std::isnan(b)) throw std::invalid_argument("b must not be NaN");
  check_finite(a, "a");
  SocConstraint c;
  c.kind_ = ConstraintKind::kLinear;
  c.a_ = std::move(a);
  c.b_ = b;
  return c;
}

std::vector<MatrixEntry> SocConstraint::nonzeros() const {
  std::vector<MatrixEntry> out;
  const int n = num_vars();
  for (int k = 0; k < num_rows_; ++k) {
    for (int i = 0; i < n; ++i) {
      const double v = d(k, i);
      if (v != 0.0) out.push_back({k, i, v});
    }
  }
  return out;
}

namespace {

template <typename T>
double evaluate_impl(const SocConstraint& c, std::span<const T> x) {
  const int n = c.num_vars();
  if (static_cast<int>(x.size()) != n) {
    throw std::invalid_argument("evaluate: point has dimension " + std::to_string(x.size()) +
                                ", constraint has " + std::to_string(n));
  }
  double linear = 0.0;
  for (int i = 0; i < n; ++i) linear += c.a()[i] * static_cast<double>(x[i]);
  switch (c.kind()) {
    case ConstraintKind::kLinear:
      return linear;
    case ConstraintKind::kDiagonalKnapsack: {
      double inner = 0.0;
      for (int i = 0; i < n; ++i) {
        const double d = c.d(i, i);
        inner += d * d * static_cast<double>(x[i]);
      }
      return linear + c.omega() * std::sqrt(std::max(0.0, inner));
    }
    case ConstraintKind::kGeneral: {
      double squares = 0.0;
      for (int k = 0; k < c.num_rows(); ++k) {
        double q = -c.h()[k];
        for (int i = 0; i < n; ++i) q += c.d(k, i) * static_cast<double>(x[i]);
        squares += q * q;
      }
      return linear + c.omega() * std::sqrt(squares);
    }
  }
  return linear;
}

}  // namespace

double evaluate(const SocConstraint& c, std::span<const double> x) {
  return evaluate_impl(c, x);
}

double evaluate(const SocConstraint& c, std::span<const std::uint8_t> x) {
  return evaluate_impl(c, x);
}

bool is_feasible(const SocConstraint& c, std::span<const std::uint8_t> x) {
  return evaluate(c, x) <= c.b() + kFeasibilityTolerance;
}

void validate(const Instance& instance) {
  if (instance.n < 1) throw std::invalid_argument("instance: n must be >= 1");
  if (static_cast<int>(instance.c.size()) != instance.n) {
    throw std::invalid_argument("instance: objective has wrong length");
  }
  check_finite(instance.c, "objective");
  for (std::size_t j = 0; j < instance.constraints.size(); ++j) {
    if (instance.constraints[j].num_vars() != instance.n) {
      throw std::invalid_argument("instance: constraint " + std::to_string(j) +
                                  " has wrong dimension");
    }
  }
}

bool is_feasible(const Instance& instance, std::span<const std::uint8_t> x) {
  for (const SocConstraint& c : instance.constraints) {
    if (!is_feasible(c, x)) return false;
  }
  return true;
}

double tightness_rhs(const SocConstraint& shape, double tightness) {
  const int n = shape.num_vars();
  double linear = 0.0;
  for (double a : shape.a()) linear += std::max(0.0, a);
  double squares = 0.0;
  if (shape.kind() == ConstraintKind::kDiagonalKnapsack) {
    for (int i = 0; i < n; ++i) squares += shape.d(i, i) * shape.d(i, i);
  } else {
    for (int k = 0; k < shape.num_rows(); ++k) {
      double pos = 0.0;
      double neg = 0.0;
      for (int i = 0; i < n; ++i) {
        pos += std::max(0.0, shape.d(k, i));
        neg += std::max(0.0, -shape.d(k, i));
      }
      const double m = std::max(pos, neg);
      squares += m * m;
    }
  }
  return tightness * (linear + shape.omega() * std::sqrt(squares));
}

namespace {

std::vector<double> sample_objective(int n, std::uint64_t seed) {
  RandomStream rng(seed, 0);
  std::vector<double> c(static_cast<std::size_t>(n));
  for (double& v : c) v = static_cast<double>(rng.uniform_int(0, 100));
  return c;
}

void check_generator_args(int n, int m, double omega, double tightness) {
  if (n < 1 || m < 1) throw std::invalid_argument("generate: n and m must be >= 1");
  if (!(omega >= 0.0)) throw std::invalid_argument("generate: omega must be >= 0");
  if (!(tightness > 0.0)) throw std::invalid_argument("generate: tightness must be > 0");
}

}  // namespace

Instance generate_soc_cc(int n, int m, double omega, double tightness, std::uint64_t seed) {
  check_generator_args(n, m, omega, tightness);
  Instance inst;
  inst.n = n;
  inst.c = sample_objective(n, seed);
  const double density = std::min(1.0, 2.0 / std::sqrt(static_cast<double>(n)));
  for (int j = 0; j < m; ++j) {
    RandomStream rng(seed, static_cast<std::uint64_t>(j) + 1);
    std::vector<double> a(static_cast<std::size_t>(n));
    for (double& v : a) v = static_cast<double>(rng.uniform_int(-50, 50));
    std::vector<MatrixEntry> entries;
    for (int k = 0; k < n; ++k) {
      for (int i = 0; i < n; ++i) {
        if (!rng.bernoulli(density)) continue;
        // Nonzero uniform on {-20..-1, 1..20}.
        std::int64_t v = rng.uniform_int(-20, 19);
        if (v >= 0) ++v;
        entries.push_back({k, i, static_cast<double>(v)});
      }
    }
    SocConstraint shape = SocConstraint::general(
        a, n, entries, std::vector<double>(static_cast<std::size_t>(n), 0.0), omega, 0.0);
    const double b = tightness_rhs(shape, tightness);
    inst.constraints.push_back(SocConstraint::general(
        std::move(a), n, std::move(entries), std::vector<double>(static_cast<std::size_t>(n), 0.0),
        omega, b));
  }
  inst.metadata = InstanceMetadata{"soc-cc", seed, tightness, omega};
  return inst;
}

Instance generate_soc_k(int n, int m, double omega, double tightness, std::uint64_t seed) {
  check_generator_args(n, m, omega, tightness);
  Instance inst;
  inst.n = n;
  inst.c = sample_objective(n, seed);
  for (int j = 0; j < m; ++j) {
    RandomStream rng(seed, static_cast<std::uint64_t>(j) + 1);
    std::vector<double> a(static_cast<std::size_t>(n));
    std::vector<double> diag(static_cast<std::size_t>(n));
    for (double& v : a) v = static_cast<double>(rng.uniform_int(0, 50));
    for (double& v : diag) v = static_cast<double>(rng.uniform_int(0, 20));
    const double b =
        tightness_rhs(SocConstraint::diagonal_knapsack(a, diag, omega, 0.0), tightness);
    inst.constraints.push_back(
        SocConstraint::diagonal_knapsack(std::move(a), std::move(diag), omega, b));
  }
  inst.metadata = InstanceMetadata{"soc-k", seed, tightness, omega};
  return inst;
}

}  // namespace bddcut
