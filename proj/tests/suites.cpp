#include "suites.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include "bddcut/compile.hpp"
#include "bddcut/driver.hpp"
#include "bddcut/lp.hpp"
#include "bddcut/separation.hpp"
#include "test_support.hpp"

namespace bddcut::suites {
namespace {

using testing::brute_feasible;
using testing::to_real;

class Check {
 public:
  explicit Check(std::string name) { result_.name = std::move(name); }

  // describe() is only called for the first failure.
  template <class Describe>
  bool expect(bool ok, Describe&& describe) {
    ++result_.cases;
    if (!ok) {
      ++result_.failures;
      if (result_.pass) result_.detail = describe();
      result_.pass = false;
    }
    return ok;
  }

  void fail(const std::string& why) {
    if (result_.pass) result_.detail = why;
    result_.pass = false;
  }

  // Extra information appended when the check passes.
  void note(const std::string& text) { note_ = text; }

  CheckResult result() const {
    CheckResult r = result_;
    if (r.pass) r.detail = note_;
    return r;
  }

 private:
  CheckResult result_;
  std::string note_;
};

template <class T>
std::string show(const std::vector<T>& v) {
  std::ostringstream out;
  out << "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out << ",";
    out << +v[i];
  }
  out << ")";
  return out.str();
}

std::string show(const Inequality& ineq) {
  std::ostringstream out;
  out << show(ineq.pi) << ".x <= " << ineq.pi0;
  return out.str();
}

std::string sci(double v) {
  std::ostringstream out;
  out.precision(3);
  out << v;
  return out.str();
}

std::vector<int> layer_sizes(const Bdd& b) {
  std::vector<int> out;
  for (int i = 0; i <= b.num_vars(); ++i) out.push_back(b.layer_size(i));
  return out;
}

std::vector<double> random_integer_vector(int n, int lo, int hi, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> coef(lo, hi);
  std::vector<double> v(static_cast<std::size_t>(n));
  for (double& x : v) x = coef(rng);
  return v;
}

double max_violation(const Inequality& ineq, const std::vector<BitVector>& points) {
  double worst = 0.0;
  for (const BitVector& p : points) {
    worst = std::max(worst, violation(ineq, std::span<const std::uint8_t>(p)));
  }
  return worst;
}

Instance single(const SocConstraint& c, std::vector<double> obj) {
  Instance inst;
  inst.n = c.num_vars();
  inst.c = std::move(obj);
  inst.constraints.push_back(c);
  return inst;
}

SocConstraint draw(int family, int n, std::mt19937_64& rng) {
  switch (family) {
    case 0:
      return testing::random_linear(n, rng);
    case 1:
      return testing::random_soc_k(n, rng);
    default:
      return testing::random_soc_cc(n, rng);
  }
}

const char* family_name(int family) {
  static const char* names[] = {"linear", "soc-k", "soc-cc"};
  return names[family];
}

struct ExactCase {
  SocConstraint constraint;
  Bdd bdd;
  std::vector<BitVector> points;
};

// Exact diagrams with at least two points, for the polyhedral checks.
std::vector<ExactCase> exact_pool(int count, int max_n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<ExactCase> pool;
  int attempt = 0;
  while (static_cast<int>(pool.size()) < count) {
    const int n = 4 + attempt % (max_n - 3);
    SocConstraint c = draw(attempt % 3, n, rng);
    ++attempt;
    Bdd b = build_bdd(c).bdd;
    if (b.is_empty()) continue;
    auto points = enumerate_paths(b);
    if (points.size() < 2) continue;
    pool.push_back({std::move(c), std::move(b), std::move(points)});
  }
  return pool;
}

// ---------------------------------------------------------------- golden

CheckResult golden_knapsack4() {
  Check c("knapsack 7-5-4-1 reduced diagram");
  const BuildResult r = build_bdd(testing::knapsack4());
  c.expect(r.stats.exact, [] { return std::string("build not exact"); });
  c.expect(layer_sizes(r.bdd) == std::vector<int>{1, 2, 2, 1, 1},
           [&] { return "layer sizes " + show(layer_sizes(r.bdd)); });
  c.expect(r.bdd == reduce(testing::knapsack4_reduced()), [] { return std::string("differs from the reduced knapsack diagram"); });
  c.expect(reduce(testing::knapsack4_unreduced()) == r.bdd, [] { return std::string("unreduced diagram does not reduce to it"); });
  c.expect(enumerate_paths(r.bdd) == brute_feasible(testing::knapsack4()),
           [] { return std::string("path set differs from enumeration"); });
  return c.result();
}

CheckResult golden_pair_lift() {
  Check c("x1 + x2 <= 1 slacks and lift");
  const Bdd knap = testing::knapsack4_reduced();
  const Inequality in{{1, 1, 0, 0}, 1.0};
  const DSlacks s = d_slacks(knap, in);
  c.expect(s.lambda == std::vector<double>{0, 0, 1, 0}, [&] { return "lambda " + show(s.lambda); });
  const LiftResult lifted = sequential_lift(knap, in);
  const Inequality want{{1, 1, 1, 0}, 1.0};
  c.expect(lifted.inequality == want, [&] { return "lifted " + show(lifted.inequality); });
  const DSlacks after = d_slacks(knap, lifted.inequality);
  c.expect(after.count(SlackClass::kZero) == 4, [] { return std::string("slack not zero after"); });
  return c.result();
}

CheckResult golden_knapsack3() {
  Check c("knapsack 5-2-3 slacks, lifts, face dimensions");
  const Bdd b = build_bdd(testing::knapsack3()).bdd;
  const Inequality in = tighten_rhs(b, {{1, 1, 1}, 10.0});
  c.expect(in.pi0 == 2.0, [&] { return "tightened rhs " + sci(in.pi0); });
  const DSlacks s = d_slacks(b, in);
  c.expect(s.lambda == std::vector<double>{1, -1, -1}, [&] { return "lambda " + show(s.lambda); });
  const Inequality first = lift_step(in, 0, s);
  const Inequality second = lift_step(in, 1, s);
  c.expect(first == Inequality{{2, 1, 1}, 2.0}, [&] { return "lift at 1: " + show(first); });
  c.expect(second == Inequality{{1, 0, 1}, 1.0}, [&] { return "lift at 2: " + show(second); });
  const auto points = enumerate_paths(b);
  const int d1 = face_dimension(tight_points(points, first));
  const int d2 = face_dimension(tight_points(points, second));
  c.expect(d1 == 1 && d2 == 2, [&] { return "dims " + std::to_string(d1) + ", " + std::to_string(d2); });
  c.expect(face_dimension(points) == 3, [] { return std::string("hull not full-dimensional"); });
  return c.result();
}

CheckResult golden_outside_point() {
  Check c("point (0.4,0.6,0.4,1) joint vs per-arc flow");
  const Bdd knap = testing::knapsack4_reduced();
  const std::vector<double> x{0.4, 0.6, 0.4, 1.0};
  const double z = maxflow_joint(knap, x).value;
  const double cap = maxflow_cap(knap, x).value;
  c.expect(z < 1.0 - 1e-7, [&] { return "joint value " + sci(z); });
  c.expect(std::abs(cap - 1.0) <= 1e-9, [&] { return "per-arc value " + sci(cap); });
  c.note("z = " + sci(z) + ", per-arc = " + sci(cap));
  return c.result();
}

CheckResult golden_conic3() {
  Check c("three-variable conic states, split, filter");
  BuildConfig cfg;
  cfg.max_width = 2;
  RefinementBuilder builder(testing::conic3(), cfg);
  auto same = [](const NodeState& s, const std::vector<double>& lo, const std::vector<double>& hi) {
    return s.down_min == lo && s.down_max == hi;
  };
  c.expect(same(builder.state(0, 0), {0, 0, 3}, {0, 0, 3}), [] { return std::string("root state"); });
  c.expect(same(builder.state(1, 0), {0, 0, 3}, {3, 1, 4}), [] { return std::string("u1 state"); });
  c.expect(builder.split_layer(1) == 1 && builder.layer_size(1) == 2,
           [] { return std::string("layer 1 not split in two"); });
  c.expect(same(builder.state(1, 0), {0, 0, 3}, {0, 0, 3}) &&
               same(builder.state(1, 1), {3, 1, 4}, {3, 1, 4}),
           [] { return std::string("split states"); });
  const double lhs = builder.filter_lhs(1, 1, 1);
  c.expect(std::abs(lhs - 10.3) <= 0.05 && lhs > 8.0, [&] { return "filter value " + sci(lhs); });
  c.expect(builder.filter_arc(1, 1, 1) && !builder.filter_arc(1, 0, 1),
           [] { return std::string("filter verdicts"); });
  c.note("filter value " + sci(lhs));
  return c.result();
}

// ---------------------------------------------------------- oracle suite

std::vector<CheckResult> oracle_family(int family, int count, std::uint64_t seed) {
  const std::string name = family_name(family);
  Check paths(name + " exact paths = enumeration");
  Check slacks(name + " d-slacks = conditional maxima");
  Check cuts(name + " emitted cuts valid");
  std::mt19937_64 rng(seed);
  int counts[2][2] = {{0, 0}, {0, 0}};  // [family][lifted]
  double worst = 0.0;
  for (int k = 0; k < count; ++k) {
    const int n = 4 + k % 9;
    const SocConstraint con = draw(family, n, rng);
    const BuildResult built = build_bdd(con);
    const auto truth = brute_feasible(con);
    const auto got = built.bdd.is_empty() ? std::vector<BitVector>{} : enumerate_paths(built.bdd);
    paths.expect(built.stats.exact && got == truth, [&] {
      return "instance " + std::to_string(k) + ": " + std::to_string(got.size()) + " paths vs " +
             std::to_string(truth.size()) + " points";
    });
    if (truth.empty() || built.bdd.is_empty()) continue;

    for (int rep = 0; rep < 3; ++rep) {
      const auto pi = random_integer_vector(n, -6, 9, rng);
      const Inequality in = tighten_rhs(built.bdd, {pi, 0.0});
      slacks.expect(in.pi0 == testing::overall_max(truth, pi),
                    [&] { return "instance " + std::to_string(k) + ": tightened rhs"; });
      const DSlacks s = d_slacks(built.bdd, in);
      for (int i = 0; i < n; ++i) {
        const double m0 = testing::conditional_max(truth, pi, i, 0);
        const double m1 = testing::conditional_max(truth, pi, i, 1);
        const bool fixed = std::isinf(m0) || std::isinf(m1);
        bool ok = s.lambda0[i] == m0 && s.lambda1[i] == m1;
        ok &= fixed == (s.cls[i] == SlackClass::kFixed);
        if (!fixed) {
          const double lam = m0 - m1;
          ok &= s.lambda[i] == lam;
          const SlackClass want = is_zero_slack(lam, in.pi0) ? SlackClass::kZero
                                  : lam < 0              ? SlackClass::kNegative
                                                         : SlackClass::kPositive;
          ok &= s.cls[i] == want;
        }
        slacks.expect(ok, [&] {
          return "instance " + std::to_string(k) + " index " + std::to_string(i) + ": got (" +
                 sci(s.lambda0[i]) + ", " + sci(s.lambda1[i]) + ") want (" + sci(m0) + ", " +
                 sci(m1) + ")";
        });
      }
    }

    // Direct separation of random points with both families.
    for (int rep = 0; rep < 3; ++rep) {
      const auto x = testing::random_point(n, rng);
      std::vector<std::pair<int, Inequality>> raw;
      if (auto cut = mincut_cut(built.bdd, x)) raw.emplace_back(0, cut_to_inequality(*cut));
      if (auto cut = cglp_cut(built.bdd, x)) raw.emplace_back(1, cut_to_inequality(*cut));
      for (const auto& [fam, ineq] : raw) {
        const Inequality tight = tighten_rhs(built.bdd, ineq);
        const Inequality lifted = sequential_lift(built.bdd, tight).inequality;
        for (const Inequality* form : {&ineq, &tight, &lifted}) {
          const double viol = max_violation(*form, truth);
          worst = std::max(worst, viol);
          cuts.expect(viol <= 1e-9, [&] {
            return "instance " + std::to_string(k) + ": " + show(*form) + " violated by " + sci(viol);
          });
        }
        ++counts[fam][0];
        if (!(lifted == tight)) ++counts[fam][1];
      }
    }

    const Instance inst = single(con, random_integer_vector(n, 1, 20, rng));
    for (Variant v : {Variant::kFlowLift, Variant::kCglpLift}) {
      LoopConfig cfg;
      cfg.variant = v;
      cfg.max_rounds = 40;
      const RootReport rep = root_loop(inst, {built.bdd}, cfg);
      cuts.expect(rep.valid, [&] { return "instance " + std::to_string(k) + ": " + rep.error; });
      for (const CutRecord& rec : rep.cuts) {
        const int fam = rec.family == CutFamily::kCglp ? 1 : 0;
        for (const Inequality* ineq : {&rec.separated, &rec.added}) {
          const double viol = max_violation(*ineq, truth);
          worst = std::max(worst, viol);
          cuts.expect(viol <= 1e-9, [&] {
            return "instance " + std::to_string(k) + ": " + show(*ineq) + " violated by " + sci(viol);
          });
        }
        ++counts[fam][0];
        if (rec.lifted) ++counts[fam][1];
      }
    }
  }
  if (counts[0][0] == 0 || counts[1][0] == 0 || counts[0][1] + counts[1][1] == 0) {
    cuts.fail("a cut family or the lifted form was never exercised");
  }
  paths.note(std::to_string(count) + " instances");
  cuts.note("mincut " + std::to_string(counts[0][0]) + " (" + std::to_string(counts[0][1]) +
            " lifted), cglp " + std::to_string(counts[1][0]) + " (" + std::to_string(counts[1][1]) +
            " lifted) from loops and direct separation, each checked before and after lifting; max violation " + sci(worst));
  return {paths.result(), slacks.result(), cuts.result()};
}

// -------- polyhedral properties

int face_dim(const std::vector<BitVector>& points, const Inequality& ineq) {
  return face_dimension(tight_points(points, ineq));
}

std::vector<int> lift_candidates(const DSlacks& s) {
  std::vector<int> out;
  for (int i = 0; i < static_cast<int>(s.size()); ++i) {
    if (s.cls[i] == SlackClass::kNegative || s.cls[i] == SlackClass::kPositive) out.push_back(i);
  }
  return out;
}

}  // namespace

// ------------------------------------------------------------- LP audit

namespace {
LpAudit* g_audit = nullptr;
}  // namespace

LpAudit::LpAudit() {
  if (g_audit) throw std::logic_error("LpAudit: already active");
  g_audit = this;
  lp::set_solve_observer([](const lp::Problem& p, const lp::Solution& s) {
    LpAudit& a = *g_audit;
    ++a.solves_;
    if (!s.optimal()) {
      ++a.not_optimal_;
      return;
    }
    const lp::Certificate cert = lp::certify(p, s);
    a.worst_gap_ = std::max(a.worst_gap_, cert.duality_gap / (1.0 + std::abs(s.objective)));
    a.worst_residual_ =
        std::max({a.worst_residual_, cert.primal_residual, cert.dual_residual});
  });
}

LpAudit::~LpAudit() {
  lp::set_solve_observer(nullptr);
  g_audit = nullptr;
}

// ------------------------------------------------------------ criteria

std::vector<CheckResult> golden_cases() {
  return {golden_knapsack4(), golden_pair_lift(), golden_knapsack3(), golden_outside_point(),
          golden_conic3()};
}

std::vector<CheckResult> oracle_equivalence(const Scale& scale) {
  std::vector<CheckResult> out;
  for (int family = 0; family < 3; ++family) {
    for (CheckResult& r : oracle_family(family, scale.per_family, 7001 + family)) {
      out.push_back(std::move(r));
    }
  }
  return out;
}

std::vector<CheckResult> polyhedral_suite(const Scale& scale) {
  Check slack_classes("slack classes match tight points");
  Check dim_bound("dim F <= |S0|");
  Check single_step("single lift step: valid, face grows, violation kept");
  Check growth("strict-minimum lift grows |S0| by one");
  Check growth_exact("strict-minimum lift grows dim by exactly one, unconditionally");
  Check facet_end("strict-minimum sequence from dim F = |S0| ends at a facet");
  Check membership("hull membership iff joint flow = 1");
  Check infeasible_cut("infeasible integer points separated by min cut");
  Check dominance("joint value <= per-arc value");
  Check reduced_dominance("per-arc value on reduced diagram never above");

  std::mt19937_64 rng(8101);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const std::vector<ExactCase> pool = exact_pool(scale.polyhedral_instances, 10, 8100);

  int violated_checked = 0;
  int strict_steps = 0;
  int full_face_steps = 0;
  int dim_jumps = 0;
  int facet_cases = 0;
  int facet_trivial = 0;

  for (std::size_t t = 0; t < pool.size(); ++t) {
    const ExactCase& ex = pool[t];
    const int n = ex.bdd.num_vars();
    const std::vector<BitVector>& points = ex.points;
    const int hull_dim = face_dimension(points);
    const std::string tag = "instance " + std::to_string(t);

    for (int rep = 0; rep < 2; ++rep) {
      const Inequality start = tighten_rhs(ex.bdd, {random_integer_vector(n, -5, 8, rng), 0.0});
      const DSlacks s = d_slacks(ex.bdd, start);
      const auto tight = tight_points(points, start);
      const int dim = face_dimension(tight);
      const int s0 = s.count(SlackClass::kZero);

      for (int i = 0; i < n; ++i) {
        if (s.cls[i] == SlackClass::kFixed) continue;
        bool has0 = false;
        bool has1 = false;
        for (const BitVector& x : tight) (x[i] ? has1 : has0) = true;
        const SlackClass want = has0 && has1 ? SlackClass::kZero
                                : has1       ? SlackClass::kNegative
                                             : SlackClass::kPositive;
        slack_classes.expect(s.cls[i] == want, [&] {
          return tag + " index " + std::to_string(i) + ": class " + to_string(s.cls[i]) +
                 " but tight points say " + to_string(want);
        });
      }
      dim_bound.expect(dim <= s0 && (dim != 0 || s0 == 0), [&] {
        return tag + ": dim " + std::to_string(dim) + ", |S0| " + std::to_string(s0);
      });

      // Every admissible single step.
      for (int i : lift_candidates(s)) {
        const Inequality out = lift_step(start, i, s);
        const double viol = max_violation(out, points);
        const auto tight_out = tight_points(points, out);
        const int dim_out = face_dimension(tight_out);
        single_step.expect(viol <= 1e-9, [&] { return tag + ": lifted cut violated by " + sci(viol); });
        single_step.expect(dim_out >= dim + 1 && tight_out.size() > tight.size(), [&] {
          return tag + " index " + std::to_string(i) + ": dim " + std::to_string(dim) + " -> " +
                 std::to_string(dim_out);
        });
        // Fractional points violating the input, drawn on segments toward
        // the box maximizer of pi.
        std::vector<double> top(n);
        for (int j = 0; j < n; ++j) top[j] = start.pi[j] > 0 ? 1.0 : 0.0;
        if (violation(start, std::span<const double>(top)) <= 1e-6) continue;
        int found = 0;
        for (int attempt = 0; attempt < 50 * scale.violated_points && found < scale.violated_points;
             ++attempt) {
          const double alpha = u01(rng);
          std::vector<double> x = testing::random_point(n, rng);
          for (int j = 0; j < n; ++j) x[j] = alpha * x[j] + (1 - alpha) * top[j];
          if (violation(start, std::span<const double>(x)) <= 1e-9) continue;
          ++found;
          ++violated_checked;
          const double after = violation(out, std::span<const double>(x));
          single_step.expect(after > 0.0, [&] {
            return tag + ": fractional point no longer violated (" + sci(after) + ")";
          });
        }
      }

      // Sequential run with the minimum-|lambda| rule, watching each step.
      Inequality cur = start;
      bool facet_ok = dim == s0;
      int steps = 0;
      bool any_fixed = false;
      for (int i = 0; i < n; ++i) any_fixed |= s.cls[i] == SlackClass::kFixed;
      while (steps <= 2 * n + 2) {
        const DSlacks cs = d_slacks(ex.bdd, cur);
        const auto cand = lift_candidates(cs);
        if (cand.empty()) break;
        int pick = cand.front();
        for (int i : cand) {
          if (std::abs(cs.lambda[i]) < std::abs(cs.lambda[pick])) pick = i;
        }
        bool strict = true;
        for (int i : cand) {
          if (i != pick && std::abs(std::abs(cs.lambda[i]) - std::abs(cs.lambda[pick])) <=
                               1e-9 * std::max(1.0, std::abs(cur.pi0))) {
            strict = false;
          }
        }
        const int d_before = face_dim(points, cur);
        const int z_before = cs.count(SlackClass::kZero);
        const Inequality next = lift_step(cur, pick, cs);
        const int d_after = face_dim(points, next);
        const int z_after = d_slacks(ex.bdd, next).count(SlackClass::kZero);
        const bool last = lift_candidates(d_slacks(ex.bdd, next)).empty();
        if (strict) {
          ++strict_steps;
          growth_exact.expect(d_after == d_before + 1, [&] {
            return tag + ": " + show(cur) + " lifted at " + std::to_string(pick) + ", dim " +
                   std::to_string(d_before) + " -> " + std::to_string(d_after) + ", |S0| " +
                   std::to_string(z_before) + " -> " + std::to_string(z_after);
          });
          growth.expect(z_after == z_before + 1, [&] {
            return tag + ": |S0| " + std::to_string(z_before) + " -> " + std::to_string(z_after);
          });
          if (d_before == z_before) {
            ++full_face_steps;
            growth.expect(d_after == d_before + 1, [&] {
              return tag + ": dim " + std::to_string(d_before) + " -> " + std::to_string(d_after) +
                     " with dim F = |S0|";
            });
          } else {
            growth.expect(d_after >= d_before + 1, [&] { return tag + ": dim did not grow"; });
            if (d_after > d_before + 1) ++dim_jumps;
          }
        } else if (!last) {
          facet_ok = false;
        }
        cur = next;
        ++steps;
      }
      const LiftResult lib = sequential_lift(ex.bdd, start);
      growth.expect(lib.inequality == cur, [&] {
        return tag + ": sequential_lift " + show(lib.inequality) + " vs stepwise " + show(cur);
      });
      if (facet_ok && !any_fixed && steps > 0) {
        ++facet_cases;
        const int final_dim = face_dim(points, cur);
        if (final_dim == hull_dim) ++facet_trivial;
        facet_end.expect(final_dim == hull_dim - 1, [&] {
          return tag + ": " + show(start) + " lifted to " + show(cur) + ", final dim " +
                 std::to_string(final_dim) + ", hull dim " + std::to_string(hull_dim);
        });
      }
    }
  }

  // Hull membership, both directions, over the pool.
  {
    int inside = 0;
    int outside = 0;
    double worst_in = 0.0;
    double worst_out = 0.0;
    std::uniform_int_distribution<std::size_t> pick_case(0, pool.size() - 1);
    int guard = 0;
    while ((inside < scale.membership_points || outside < scale.membership_points) && guard++ < 200000) {
      const ExactCase& ex = pool[pick_case(rng)];
      const int n = ex.bdd.num_vars();
      if (inside < scale.membership_points) {
        std::uniform_int_distribution<std::size_t> pick_point(0, ex.points.size() - 1);
        std::uniform_int_distribution<int> terms(1, 4);
        const int k = terms(rng);
        std::vector<double> w(k);
        double total = 0.0;
        for (double& v : w) total += (v = u01(rng) + 1e-3);
        std::vector<double> x(n, 0.0);
        for (int j = 0; j < k; ++j) {
          const BitVector& p = ex.points[pick_point(rng)];
          for (int i = 0; i < n; ++i) x[i] += w[j] / total * p[i];
        }
        for (double& v : x) v = std::clamp(v, 0.0, 1.0);
        const double z = maxflow_joint(ex.bdd, x).value;
        worst_in = std::max(worst_in, std::abs(z - 1.0));
        membership.expect(std::abs(z - 1.0) <= 1e-7,
                      [&] { return "convex combination with z = " + sci(z); });
        ++inside;
      }
      if (outside < scale.membership_points) {
        const std::vector<double> x = testing::random_point(n, rng);
        const double g = evaluate(ex.constraint, std::span<const double>(x));
        const double margin = 1e-3 * std::max(1.0, std::abs(ex.constraint.b()));
        if (g <= ex.constraint.b() + margin) continue;
        const double z = maxflow_joint(ex.bdd, x).value;
        worst_out = std::max(worst_out, z);
        membership.expect(z < 1.0 - 1e-7, [&] { return "constraint-violating point with z = " + sci(z); });
        ++outside;
      }
    }
    if (inside < scale.membership_points || outside < scale.membership_points) {
      membership.fail("could not sample enough points");
    }
    membership.note(std::to_string(inside) + " inside (max |z-1| " + sci(worst_in) + "), " +
                std::to_string(outside) + " outside (max z " + sci(worst_out) + ")");
  }

  // Min-cut separation of infeasible points and the joint/per-arc dominance.
  int infeasible_points = 0;
  for (const ExactCase& ex : pool) {
    const int n = ex.bdd.num_vars();
    const std::set<BitVector> feasible(ex.points.begin(), ex.points.end());
    for (const BitVector& p : testing::all_points(n)) {
      if (feasible.count(p)) continue;
      ++infeasible_points;
      const std::vector<double> x = to_real(p);
      const double cap = maxflow_cap(ex.bdd, x).value;
      const auto cut = mincut_cut(ex.bdd, x);
      infeasible_cut.expect(cap < 1.0 - 1e-9 && cut.has_value() &&
                       violation(cut_to_inequality(*cut), std::span<const double>(x)) > 1e-6,
                   [&] { return "point " + show(p) + " per-arc value " + sci(cap); });
    }
    for (int k = 0; k < 10; ++k) {
      const auto x = testing::random_point(n, rng);
      const double joint = maxflow_joint(ex.bdd, x).value;
      const double cap = maxflow_cap(ex.bdd, x).value;
      dominance.expect(joint <= cap + 1e-9, [&] { return sci(joint) + " > " + sci(cap); });
    }
  }
  infeasible_cut.note(std::to_string(infeasible_points) + " infeasible integer points");

  // Reduced vs de-reduced twins.
  {
    std::mt19937_64 twin_rng(8102);
    int pairs = 0;
    int strict = 0;
    for (int k = 0; pairs < scale.reduce_pairs; ++k) {
      const Bdd& base = pool[k % pool.size()].bdd;
      const Bdd twin = testing::de_reduce(base, twin_rng, 0.6);
      if (twin.num_nodes() == base.num_nodes()) continue;
      ++pairs;
      reduced_dominance.expect(reduce(twin) == base, [] { return std::string("twin does not reduce back"); });
      for (int j = 0; j < 20; ++j) {
        const auto x = testing::random_point(base.num_vars(), twin_rng);
        const double r = maxflow_cap(base, x).value;
        const double b = maxflow_cap(twin, x).value;
        if (r < b - 1e-9) ++strict;
        reduced_dominance.expect(r <= b + 1e-9, [&] { return sci(r) + " > " + sci(b); });
      }
    }
    reduced_dominance.note(std::to_string(pairs) + " pairs, strictly smaller on reduced in " +
                           std::to_string(strict) + " samples");
  }

  if (facet_cases == 0) facet_end.fail("hypothesis never met");
  if (full_face_steps == 0) growth.fail("hypothesis dim F = |S0| never met");
  single_step.note(std::to_string(violated_checked) + " violated fractional points rechecked");
  growth.note(std::to_string(strict_steps) + " strict steps, " + std::to_string(full_face_steps) +
              " with dim F = |S0|; " + std::to_string(dim_jumps) +
              " steps grew dim by more than one where dim F < |S0|");
  facet_end.note(std::to_string(facet_cases) + " sequences meeting the hypothesis");
  CheckResult literal_result = growth_exact.result();
  literal_result.informational = true;
  if (!literal_result.pass) {
    literal_result.detail = std::to_string(literal_result.failures) + " of " +
                            std::to_string(literal_result.cases) +
                            " strict steps grew dim by more than one, all with dim F < |S0|; first: " +
                            literal_result.detail;
  }
  CheckResult facet_result = facet_end.result();
  facet_result.informational = true;
  if (!facet_result.pass) {
    facet_result.detail = "conclusion failed in " + std::to_string(facet_result.failures) + " of " +
                          std::to_string(facet_cases) + " sequences (" +
                          std::to_string(facet_trivial) +
                          " lifted through a facet to a face spanning the hull); first: " +
                          facet_result.detail;
  }
  return {slack_classes.result(),  dim_bound.result(),      single_step.result(),
          growth.result(),         literal_result,          facet_result,
          membership.result(),     infeasible_cut.result(), dominance.result(),
          reduced_dominance.result()};
}

std::vector<CheckResult> convergence(const Scale& scale) {
  Check check("cglp loop closes single exact BDD");
  const Instance base = generate_soc_cc(10, 1, 3.0, 0.3, 4242);
  const Bdd bdd = build_bdd(base.constraints[0]).bdd;
  const auto truth = brute_feasible(base.constraints[0]);
  const int limit = base.n * bdd.num_arcs();
  std::mt19937_64 rng(4243);
  int max_rounds = 0;
  double worst_gap = 0.0;
  for (int k = 0; k < scale.objectives; ++k) {
    Instance inst = base;
    inst.c = random_integer_vector(inst.n, -20, 60, rng);
    const double opt = testing::overall_max(truth, inst.c);
    LoopConfig cfg;
    cfg.variant = Variant::kCglp;
    cfg.max_rounds = limit;
    const RootReport r = root_loop(inst, {bdd}, cfg);
    const int rounds = static_cast<int>(r.rounds.size()) - 1;
    max_rounds = std::max(max_rounds, rounds);
    const double gap = std::abs(root_gap(r.final_bound, opt));
    worst_gap = std::max(worst_gap, gap);
    check.expect(r.valid && r.converged && gap <= 1e-6 && rounds <= limit, [&] {
      return "objective " + std::to_string(k) + ": bound " + sci(r.final_bound) + " vs " +
             sci(opt) + " after " + std::to_string(rounds) + " rounds" +
             (r.valid ? "" : " (" + r.error + ")");
    });
  }
  check.note("n = 10, |A| = " + std::to_string(bdd.num_arcs()) + ", max rounds " +
             std::to_string(max_rounds) + " (limit " + std::to_string(limit) +
             "), worst relative gap " + sci(worst_gap));
  return {check.result()};
}

std::vector<CheckResult> gap_trend(const Scale& scale) {
  Check flow_vs_none("flow <= no cuts (every instance)");
  Check lift_vs_flow("flow+lift <= flow (every instance, 1e-9)");
  Check cglp_vs_lift("cglp <= flow+lift (>= 80% of instances)");
  Check valid("all bounds >= optimum");
  const double omegas[] = {1.0, 3.0, 5.0};
  const double ts[] = {0.1, 0.2, 0.3};
  double sum[4] = {0, 0, 0, 0};
  int cglp_wins = 0;
  int used = 0;
  std::string lift_losers;
  double lift_fraction = 0.0;
  for (int k = 0; k < scale.trend_instances; ++k) {
    const Instance inst = generate_soc_cc(15, 2, omegas[k % 3], ts[(k / 3) % 3], 1000 + k);
    const OracleResult truth = oracle(inst);
    if (!truth.optimum) continue;
    const auto bdds = compile_instance(inst, BuildConfig{});
    const double opt = *truth.optimum;
    double gap[4];
    bool ok = true;
    int v = 1;
    for (Variant var : {Variant::kFlow, Variant::kFlowLift, Variant::kCglp}) {
      LoopConfig cfg;
      cfg.variant = var;
      const RootReport r = root_loop(inst, bdds, cfg);
      ok &= r.valid;
      if (v == 1) gap[0] = root_gap(r.initial_bound, opt);
      gap[v] = root_gap(r.final_bound, opt);
      if (var == Variant::kFlowLift) lift_fraction += r.lift_fraction;
      ++v;
    }
    ++used;
    for (int j = 0; j < 4; ++j) sum[j] += gap[j];
    const std::string tag = "seed " + std::to_string(1000 + k);
    valid.expect(ok && gap[3] >= -1e-9 && gap[2] >= -1e-9 && gap[1] >= -1e-9,
                 [&] { return tag + ": bound below optimum or LP failure"; });
    flow_vs_none.expect(gap[1] <= gap[0] + 1e-9, [&] { return tag; });
    if (!lift_vs_flow.expect(gap[2] <= gap[1] + 1e-9, [&] {
          return tag + ": flow+lift gap " + sci(gap[2]) + " > flow gap " + sci(gap[1]);
        })) {
      lift_losers += (lift_losers.empty() ? "" : ",") + std::to_string(1000 + k);
    }
    cglp_wins += gap[3] <= gap[2] + 1e-9 ? 1 : 0;
  }
  const double share = used ? static_cast<double>(cglp_wins) / used : 0.0;
  cglp_vs_lift.expect(used > 0 && share >= 0.8, [&] {
    return std::to_string(cglp_wins) + " of " + std::to_string(used) + " instances";
  });
  if (!lift_losers.empty()) {
    CheckResult tmp = lift_vs_flow.result();
    lift_vs_flow.fail(tmp.detail + " [seeds " + lift_losers + "]");
  }
  std::ostringstream avg;
  avg.precision(4);
  avg << "mean gaps: none " << sum[0] / std::max(1, used) << ", flow " << sum[1] / std::max(1, used)
      << ", flow+lift " << sum[2] / std::max(1, used) << ", cglp " << sum[3] / std::max(1, used)
      << "; mean lifted share " << lift_fraction / std::max(1, used);
  flow_vs_none.note(avg.str());
  cglp_vs_lift.note(std::to_string(cglp_wins) + " of " + std::to_string(used));
  lift_vs_flow.note(std::to_string(used) + " instances");
  return {valid.result(), flow_vs_none.result(), lift_vs_flow.result(), cglp_vs_lift.result()};
}

std::vector<CheckResult> kernel_checks(const Scale& scale, const LpAudit& audit) {
  Check flow("max-flow = per-arc LP (1e-8)");
  std::mt19937_64 rng(9301);
  double worst = 0.0;
  for (int k = 0; k < scale.flow_pairs; ++k) {
    const int n = 4 + k % 7;
    const Bdd b =
        k % 2 == 0 ? testing::random_bdd(n, 6, rng) : build_bdd(draw(k % 3, n, rng)).bdd;
    if (b.is_empty()) {
      --k;
      continue;
    }
    const auto x = testing::random_point(n, rng);
    const double comb = maxflow_cap(b, x).value;
    const double lpv = maxflow_cap_lp(b, x);
    worst = std::max(worst, std::abs(comb - lpv));
    flow.expect(std::abs(comb - lpv) <= 1e-8,
                [&] { return "pair " + std::to_string(k) + ": " + sci(comb) + " vs " + sci(lpv); });
  }
  flow.note(std::to_string(scale.flow_pairs) + " pairs, max difference " + sci(worst));

  Check lp_check("LP certificates on every solve");
  lp_check.expect(audit.solves() > 0, [] { return std::string("no LP solves observed"); });
  lp_check.expect(audit.not_optimal() == 0,
                  [&] { return std::to_string(audit.not_optimal()) + " solves not optimal"; });
  lp_check.expect(audit.worst_gap() <= 1e-7, [&] { return "duality gap " + sci(audit.worst_gap()); });
  lp_check.expect(audit.worst_residual() <= 1e-7,
                  [&] { return "residual " + sci(audit.worst_residual()); });
  lp_check.note(std::to_string(audit.solves()) + " solves, worst relative gap " +
                sci(audit.worst_gap()) + ", worst residual " + sci(audit.worst_residual()));
  return {flow.result(), lp_check.result()};
}

}  // namespace bddcut::suites
