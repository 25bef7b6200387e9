#include "bddcut/driver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "bddcut/lp.hpp"
#include "bddcut/separation.hpp"

namespace bddcut {

std::string to_string(Variant variant) {
  switch (variant) {
    case Variant::kFlow:
      return "flow";
    case Variant::kFlowLift:
      return "flow+lift";
    case Variant::kCglp:
      return "cglp";
    case Variant::kCglpLift:
      return "cglp+lift";
  }
  return "unknown";
}

Variant parse_variant(const std::string& text) {
  if (text == "flow") return Variant::kFlow;
  if (text == "flow+lift") return Variant::kFlowLift;
  if (text == "cglp") return Variant::kCglp;
  if (text == "cglp+lift") return Variant::kCglpLift;
  throw std::invalid_argument("unknown variant '" + text +
                              "' (expected flow, flow+lift, cglp, cglp+lift)");
}

bool uses_cglp(Variant variant) {
  return variant == Variant::kCglp || variant == Variant::kCglpLift;
}

bool uses_lifting(Variant variant) {
  return variant == Variant::kFlowLift || variant == Variant::kCglpLift;
}

std::string to_string(CutFamily family) {
  return family == CutFamily::kMinCut ? "mincut" : "cglp";
}

std::vector<Bdd> compile_instance(const Instance& instance, const BuildConfig& config) {
  validate(instance);
  std::vector<Bdd> bdds;
  bdds.reserve(instance.constraints.size());
  for (int j = 0; j < instance.m(); ++j) {
    BuildResult built = build_bdd(instance.constraints[j], config);
    if (built.empty()) {
      throw std::invalid_argument("constraint " + std::to_string(j) + " has no feasible point");
    }
    bdds.push_back(std::move(built.bdd));
  }
  return bdds;
}

double root_gap(double bound, double optimum) {
  return (bound - optimum) / std::max(1.0, std::abs(optimum));
}

namespace {

bool strictly_changed(const Inequality& a, const Inequality& b) {
  constexpr double kEps = 1e-12;
  if (std::abs(a.pi0 - b.pi0) > kEps) return true;
  for (std::size_t i = 0; i < a.pi.size(); ++i) {
    if (std::abs(a.pi[i] - b.pi[i]) > kEps) return true;
  }
  return false;
}

class RootLp {
 public:
  explicit RootLp(const Instance& instance) : c_(instance.c) {}

  void add_cut(const Inequality& ineq) { cuts_.push_back(ineq); }

  // Returns false on solver failure.
  bool solve(RootReport& report, double& bound, std::vector<double>& point) {
    const int n = static_cast<int>(c_.size());
    lp::Problem problem(n, lp::Sense::kMaximize);
    problem.set_objective(c_);
    for (int i = 0; i < n; ++i) problem.set_bounds(i, 0.0, 1.0);
    for (const Inequality& cut : cuts_) {
      problem.add_row(cut.pi, lp::Relation::kLessEqual, cut.pi0);
    }
    const lp::Solution sol = lp::solve(problem);
    ++report.lp_solves;
    if (!sol.optimal()) {
      report.valid = false;
      report.error = "LP solve failed: " + lp::to_string(sol.status);
      return false;
    }
    const lp::Certificate cert = lp::certify(problem, sol);
    report.max_duality_gap = std::max(report.max_duality_gap, cert.duality_gap);
    bound = sol.objective;
    point = sol.primal;
    for (double& v : point) v = std::clamp(v, 0.0, 1.0);
    return true;
  }

 private:
  std::vector<double> c_;
  std::vector<Inequality> cuts_;
};

}  // namespace

RootReport root_loop(const Instance& instance, const std::vector<Bdd>& bdds,
                     const LoopConfig& config) {
  validate(instance);
  if (config.max_rounds < 1) throw std::invalid_argument("root_loop: max_rounds must be >= 1");
  if (static_cast<int>(bdds.size()) != instance.m()) {
    throw std::invalid_argument("root_loop: need one BDD per constraint");
  }
  for (const Bdd& b : bdds) {
    if (b.is_empty()) throw std::invalid_argument("root_loop: empty BDD");
    if (b.num_vars() != instance.n) throw std::invalid_argument("root_loop: BDD dimension");
  }

  const auto start = std::chrono::steady_clock::now();
  RootReport report;
  report.variant = config.variant;
  RootLp lp(instance);
  double bound = 0.0;
  std::vector<double> x;
  auto finish = [&]() {
    report.final_bound = bound;
    report.final_point = x;
    int lifted = 0;
    for (const CutRecord& c : report.cuts) lifted += c.lifted ? 1 : 0;
    report.lift_fraction =
        report.cuts.empty() ? 0.0 : static_cast<double>(lifted) / report.cuts.size();
    report.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
  };

  if (!lp.solve(report, bound, x)) return finish();
  report.initial_bound = bound;
  report.rounds.push_back({0, bound, 0, 0});

  const int m = instance.m();
  int last = m - 1;
  for (int round = 1; round <= config.max_rounds; ++round) {
    bool found = false;
    for (int k = 0; k < m && !found; ++k) {
      const int j = (last + 1 + k) % m;
      const Bdd& bdd = bdds[j];
      std::optional<Inequality> separated;
      CutFamily family = CutFamily::kMinCut;
      if (auto cut = mincut_cut(bdd, x)) {
        separated = cut_to_inequality(*cut);
      } else if (uses_cglp(config.variant)) {
        if (auto cg = cglp_cut(bdd, x)) {
          separated = cut_to_inequality(*cg);
          family = CutFamily::kCglp;
        }
      }
      if (!separated) continue;
      CutRecord record;
      record.round = round;
      record.bdd = j;
      record.family = family;
      record.separated = tighten_rhs(bdd, *separated);
      record.added = record.separated;
      if (uses_lifting(config.variant)) {
        record.added = sequential_lift(bdd, record.separated, config.lift_rule).inequality;
        record.lifted = strictly_changed(record.added, record.separated);
      }
      record.violation = violation(record.added, x);
      if (record.violation <= config.violation_tolerance) continue;
      lp.add_cut(record.added);
      report.cuts.push_back(std::move(record));
      (family == CutFamily::kMinCut ? report.mincut_cuts : report.cglp_cuts) += 1;
      last = j;
      found = true;
    }
    if (!found) {
      report.converged = true;
      break;
    }
    if (!lp.solve(report, bound, x)) return finish();
    const CutRecord& added = report.cuts.back();
    report.rounds.push_back({round, bound, added.family == CutFamily::kMinCut ? 1 : 0,
                             added.family == CutFamily::kCglp ? 1 : 0});
  }
  return finish();
}

RootReport root_loop(const Instance& instance, const LoopConfig& config) {
  return root_loop(instance, compile_instance(instance, config.build), config);
}

OracleResult oracle(const Instance& instance) {
  validate(instance);
  const int n = instance.n;
  if (n > kOracleMaxVars) {
    throw std::invalid_argument("oracle: n = " + std::to_string(n) + " exceeds " +
                                std::to_string(kOracleMaxVars));
  }
  OracleResult result;
  BitVector x(static_cast<std::size_t>(n), 0);
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t code = 0; code < total; ++code) {
    // Bit n-1-i of code is x_i, so codes run in lexicographic order.
    for (int i = 0; i < n; ++i) x[i] = static_cast<std::uint8_t>((code >> (n - 1 - i)) & 1U);
    if (!is_feasible(instance, x)) continue;
    double value = 0.0;
    for (int i = 0; i < n; ++i) value += instance.c[i] * x[i];
    if (!result.optimum || value > *result.optimum) {
      result.optimum = value;
      result.argmax = x;
    }
    result.feasible.push_back(x);
  }
  return result;
}

VerifyReport verify_cuts(const std::vector<Inequality>& cuts,
                         const std::vector<BitVector>& feasible, double tol) {
  VerifyReport report;
  report.cuts_checked = static_cast<int>(cuts.size());
  report.points_checked = static_cast<int>(feasible.size());
  for (int k = 0; k < static_cast<int>(cuts.size()); ++k) {
    for (const BitVector& p : feasible) {
      const double v = violation(cuts[k], std::span<const std::uint8_t>(p));
      if (v > report.max_violation) report.max_violation = v;
      if (v > tol && report.valid) {
        report.valid = false;
        report.witness_cut = k;
        report.witness_point = p;
      }
    }
  }
  return report;
}

VerifyReport verify_cuts(const std::vector<Inequality>& cuts, const Instance& instance,
                         double tol) {
  return verify_cuts(cuts, oracle(instance).feasible, tol);
}

void require_valid(const VerifyReport& report) {
  if (report.valid) return;
  std::string point;
  for (std::uint8_t b : report.witness_point) point += static_cast<char>('0' + b);
  throw std::runtime_error("cut " + std::to_string(report.witness_cut) +
                           " is violated by feasible point " + point + " (max violation " +
                           std::to_string(report.max_violation) + ")");
}

}  // namespace bddcut
