#pragma once

// Root-node cutting-plane loop over the per-constraint BDDs of an instance,
// plus the enumeration oracle and cut verification used to check it.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bddcut/bdd.hpp"
#include "bddcut/compile.hpp"
#include "bddcut/lifting.hpp"
#include "bddcut/model.hpp"

namespace bddcut {

enum class Variant { kFlow, kFlowLift, kCglp, kCglpLift };

std::string to_string(Variant variant);
// Accepts "flow", "flow+lift", "cglp", "cglp+lift".
Variant parse_variant(const std::string& text);
bool uses_cglp(Variant variant);
bool uses_lifting(Variant variant);

struct LoopConfig {
  Variant variant = Variant::kCglp;
  int max_rounds = 1000;
  // Minimum violation pi.x* - pi0 of an added inequality.
  double violation_tolerance = 1e-6;
  BuildConfig build;
  LiftRule lift_rule = LiftRule::kMinAbsSlack;
  std::uint64_t seed = 0;
};

enum class CutFamily { kMinCut, kCglp };
std::string to_string(CutFamily family);

struct CutRecord {
  int round = 0;
  int bdd = 0;
  CutFamily family = CutFamily::kMinCut;
  Inequality separated;  // converted and tightened
  Inequality added;      // after lifting, if any
  bool lifted = false;   // lifting changed at least one coefficient
  double violation = 0.0;
};

struct RoundRecord {
  int round = 0;
  double bound = 0.0;
  int mincut_cuts = 0;
  int cglp_cuts = 0;
};

struct RootReport {
  bool valid = true;
  std::string error;
  Variant variant = Variant::kCglp;
  double initial_bound = 0.0;
  double final_bound = 0.0;
  std::vector<double> final_point;
  std::vector<RoundRecord> rounds;
  std::vector<CutRecord> cuts;
  int mincut_cuts = 0;
  int cglp_cuts = 0;
  // Share of added cuts that lifting changed.
  double lift_fraction = 0.0;
  // No BDD separated the final LP point.
  bool converged = false;
  int lp_solves = 0;
  double max_duality_gap = 0.0;
  std::optional<double> oracle_optimum;
  std::optional<double> root_gap;
  double seconds = 0.0;
};

// Compiles every constraint. Throws std::invalid_argument if one of them
// has no feasible point.
std::vector<Bdd> compile_instance(const Instance& instance, const BuildConfig& config);

RootReport root_loop(const Instance& instance, const std::vector<Bdd>& bdds,
                     const LoopConfig& config);
RootReport root_loop(const Instance& instance, const LoopConfig& config);

// (bound - optimum) / max(1, |optimum|).
double root_gap(double bound, double optimum);

struct OracleResult {
  std::vector<BitVector> feasible;  // lexicographic order
  std::optional<double> optimum;
  std::optional<BitVector> argmax;
};

inline constexpr int kOracleMaxVars = 22;

// Exhaustive enumeration of {0,1}^n. Throws std::invalid_argument for n > 22.
OracleResult oracle(const Instance& instance);

struct VerifyReport {
  bool valid = true;
  double max_violation = 0.0;
  int cuts_checked = 0;
  int points_checked = 0;
  int witness_cut = -1;
  BitVector witness_point;
};

// A cut fails when some point violates it by more than tol.
VerifyReport verify_cuts(const std::vector<Inequality>& cuts,
                         const std::vector<BitVector>& feasible, double tol = 1e-9);
VerifyReport verify_cuts(const std::vector<Inequality>& cuts, const Instance& instance,
                         double tol = 1e-9);
// Throws std::runtime_error naming the witness point and cut.
void require_valid(const VerifyReport& report);

}  // namespace bddcut
