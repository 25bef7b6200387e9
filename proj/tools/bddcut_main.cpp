// bddcut: command-line front end.
//
//   bddcut gen      --family soc-cc --n 15 --m 2 --omega 3 --tightness 0.2 --seed 1
//   bddcut build    INSTANCE [--constraint J] [--width W] [--dot] [--oracle]
//   bddcut lift     INSTANCE --pi "1,1,0,0" --rhs 1 [--constraint J] [--oracle]
//   bddcut separate INSTANCE --points FILE | --point "0.4,0.6,0.4,1" [--variant V] [--oracle]
//   bddcut root     INSTANCE [--variant V] [--rounds R] [--tol T] [--width W] [--oracle] [--csv]
//   bddcut verify   INSTANCE --cuts FILE [--tol T]
//
// Cut lists (separate output, root --cuts-out, verify input) hold one cut per
// line: "<family> <bdd> <pi_1> ... <pi_n> <pi0> <violation>", read as
// pi.x <= pi0. Exit status is 1 when any verification fails and 2 on usage
// or input errors.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "bddcut/bdd_io.hpp"
#include "bddcut/compile.hpp"
#include "bddcut/driver.hpp"
#include "bddcut/instance_io.hpp"
#include "bddcut/separation.hpp"

namespace {

using namespace bddcut;

constexpr int kVerifyFailed = 1;
constexpr int kUsageError = 2;

struct Options {
  std::string instance;
  std::string output;
  int constraint = -1;
  int width = kUnboundedWidth;
  std::string variant = "cglp";
  int rounds = 1000;
  double tol = -1.0;  // negative: command default
  std::uint64_t seed = 0;
  bool oracle = false;

  // gen
  std::string family = "soc-cc";
  int n = 15;
  int m = 2;
  double omega = 3.0;
  double tightness = 0.2;

  // build
  bool dot = false;

  // lift
  std::string pi;
  double rhs = 0.0;
  bool has_rhs = false;
  std::string rule = "min-abs";

  // separate / verify / root
  std::string point;
  std::string points_file;
  std::string cuts_file;
  std::string cuts_out;
  bool csv = false;
};

std::vector<double> parse_reals(const std::string& text) {
  std::string copy = text;
  for (char& ch : copy) {
    if (ch == ',' || ch == ';') ch = ' ';
  }
  std::istringstream in(copy);
  std::vector<double> out;
  std::string token;
  while (in >> token) {
    std::size_t used = 0;
    const double v = std::stod(token, &used);
    if (used != token.size()) throw std::invalid_argument("bad number '" + token + "'");
    out.push_back(v);
  }
  return out;
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open instance file '" + path + "'");
  return read_instance(in);
}

// Writes to the -o file when given, otherwise stdout.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw std::runtime_error("cannot write '" + path + "'");
    }
  }
  std::ostream& get() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

BuildConfig build_config(const Options& o) {
  BuildConfig cfg;
  cfg.max_width = o.width;
  return cfg;
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + format_real(v[i]);
  return s;
}

std::string bits(const BitVector& x) {
  std::string s;
  for (std::uint8_t b : x) s += static_cast<char>('0' + b);
  return s;
}

void write_cut(std::ostream& out, const std::string& family, int bdd, const Inequality& ineq,
               double viol) {
  out << family << ' ' << bdd << ' ' << join(ineq.pi) << ' ' << format_real(ineq.pi0) << ' '
      << format_real(viol) << '\n';
}

std::vector<int> constraint_range(const Options& o, const Instance& inst) {
  if (o.constraint >= inst.m()) {
    throw std::invalid_argument("constraint index " + std::to_string(o.constraint) +
                                " out of range (m = " + std::to_string(inst.m()) + ")");
  }
  if (o.constraint >= 0) return {o.constraint};
  std::vector<int> all(static_cast<std::size_t>(inst.m()));
  for (int j = 0; j < inst.m(); ++j) all[j] = j;
  return all;
}

int report_verify(const VerifyReport& r, const std::string& what) {
  std::cout << "# verify " << what << ": " << (r.valid ? "ok" : "FAILED") << ", "
            << r.cuts_checked << " cuts, " << r.points_checked
            << " feasible points, max violation " << format_real(r.max_violation) << '\n';
  if (!r.valid) {
    std::cerr << "verification failed: cut " << r.witness_cut << " violated by feasible point "
              << bits(r.witness_point) << '\n';
    return kVerifyFailed;
  }
  return 0;
}

int cmd_gen(const Options& o) {
  Instance inst;
  if (o.family == "soc-cc") {
    inst = generate_soc_cc(o.n, o.m, o.omega, o.tightness, o.seed);
  } else if (o.family == "soc-k") {
    inst = generate_soc_k(o.n, o.m, o.omega, o.tightness, o.seed);
  } else {
    throw std::invalid_argument("unknown family '" + o.family + "' (soc-cc, soc-k)");
  }
  Output out(o.output);
  write_instance(out.get(), inst);
  return 0;
}

int cmd_build(const Options& o) {
  const Instance inst = load_instance(o.instance);
  const int j = o.constraint < 0 ? 0 : o.constraint;
  if (j >= inst.m()) throw std::invalid_argument("constraint index out of range");
  const BuildResult r = build_bdd(inst.constraints[j], build_config(o));
  Output out(o.output);
  std::ostream& os = out.get();
  os << "# constraint " << j << ": rounds " << r.stats.rounds << ", splits " << r.stats.splits
     << ", filtered arcs " << r.stats.filtered_arcs << ", converged "
     << (r.stats.converged ? "yes" : "no") << ", exact " << (r.stats.exact ? "yes" : "no")
     << '\n';
  if (!r.empty()) {
    os << "# nodes " << r.bdd.num_nodes() << ", arcs " << r.bdd.num_arcs() << ", width "
       << r.bdd.width() << ", paths " << format_real(r.bdd.path_count()) << '\n';
  }
  if (o.dot) {
    os << to_dot(r.bdd);
  } else {
    write_bdd(os, r.bdd);
  }
  if (!o.oracle) return 0;

  Instance one;
  one.n = inst.n;
  one.c = inst.c;
  one.constraints = {inst.constraints[j]};
  const auto feasible = oracle(one).feasible;
  const auto paths = r.empty() ? std::vector<BitVector>{} : enumerate_paths(r.bdd);
  bool ok = std::includes(paths.begin(), paths.end(), feasible.begin(), feasible.end());
  if (r.stats.exact) ok &= paths == feasible;
  std::cerr << "oracle: " << feasible.size() << " feasible points, " << paths.size()
            << " paths, " << (ok ? "ok" : "MISMATCH") << '\n';
  return ok ? 0 : kVerifyFailed;
}

LiftRule parse_rule(const std::string& text) {
  if (text == "min-abs") return LiftRule::kMinAbsSlack;
  if (text == "lowest-index") return LiftRule::kLowestIndex;
  throw std::invalid_argument("unknown lift rule '" + text + "' (min-abs, lowest-index)");
}

int cmd_lift(const Options& o) {
  const Instance inst = load_instance(o.instance);
  const int j = o.constraint < 0 ? 0 : o.constraint;
  if (j >= inst.m()) throw std::invalid_argument("constraint index out of range");
  const std::vector<double> pi = parse_reals(o.pi);
  if (static_cast<int>(pi.size()) != inst.n) {
    throw std::invalid_argument("--pi needs " + std::to_string(inst.n) + " coefficients");
  }
  const Bdd bdd = build_bdd(inst.constraints[j], build_config(o)).bdd;
  if (bdd.is_empty()) throw std::invalid_argument("constraint has no feasible point");
  Inequality in{pi, o.rhs};
  const Inequality tight = tighten_rhs(bdd, in);
  if (!o.has_rhs) in = tight;
  const LiftResult r = sequential_lift(bdd, tight, parse_rule(o.rule));
  const DSlacks s = d_slacks(bdd, tight);

  Output out(o.output);
  std::ostream& os = out.get();
  os << "input " << join(in.pi) << " <= " << format_real(in.pi0) << '\n';
  os << "tightened " << join(tight.pi) << " <= " << format_real(tight.pi0) << '\n';
  os << "slacks";
  for (std::size_t i = 0; i < s.size(); ++i) {
    os << ' ' << (s.cls[i] == SlackClass::kFixed ? "fixed" : format_real(s.lambda[i]));
  }
  os << '\n';
  for (const LiftStepRecord& step : r.report.steps) {
    os << "step " << step.index << ' ' << format_real(step.lambda) << " -> "
       << join(step.result.pi) << " <= " << format_real(step.result.pi0) << '\n';
  }
  if (!r.report.fixed.empty()) {
    os << "fixed";
    for (int i : r.report.fixed) os << ' ' << i;
    os << '\n';
  }
  os << "termination "
     << (r.report.termination == LiftTermination::kAllZero ? "all-zero" : "step-limit") << '\n';
  os << "lifted " << join(r.inequality.pi) << " <= " << format_real(r.inequality.pi0) << '\n';
  if (!o.oracle) return 0;

  Instance one;
  one.n = inst.n;
  one.c = inst.c;
  one.constraints = {inst.constraints[j]};
  const auto feasible = oracle(one).feasible;
  const VerifyReport check = verify_cuts({tight, r.inequality}, feasible);
  const auto points = enumerate_paths(bdd);
  os << "face-dim " << face_dimension(tight_points(points, tight)) << " -> "
     << face_dimension(tight_points(points, r.inequality)) << " (hull "
     << face_dimension(points) << ")\n";
  return report_verify(check, "tightened and lifted inequality");
}

std::vector<std::vector<double>> load_points(const Options& o, int n) {
  std::vector<std::vector<double>> points;
  if (!o.point.empty()) points.push_back(parse_reals(o.point));
  if (!o.points_file.empty()) {
    std::ifstream in(o.points_file);
    if (!in) throw std::runtime_error("cannot open point file '" + o.points_file + "'");
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      points.push_back(parse_reals(line));
    }
  }
  if (points.empty()) throw std::invalid_argument("no points given (--point or --points)");
  for (const auto& p : points) {
    if (static_cast<int>(p.size()) != n) {
      throw std::invalid_argument("point has " + std::to_string(p.size()) + " entries, need " +
                                  std::to_string(n));
    }
  }
  return points;
}

int cmd_separate(const Options& o) {
  const Instance inst = load_instance(o.instance);
  const Variant variant = parse_variant(o.variant);
  const double tol = o.tol < 0 ? kCutViolationThreshold : o.tol;
  const auto points = load_points(o, inst.n);
  const std::vector<int> which = constraint_range(o, inst);
  std::vector<Bdd> bdds;
  for (int j : which) {
    BuildResult r = build_bdd(inst.constraints[j], build_config(o));
    if (r.empty()) throw std::invalid_argument("constraint " + std::to_string(j) + " infeasible");
    bdds.push_back(std::move(r.bdd));
  }
  Output out(o.output);
  std::ostream& os = out.get();
  std::vector<Inequality> emitted;
  for (std::size_t p = 0; p < points.size(); ++p) {
    const std::vector<double>& x = points[p];
    os << "# point " << p << ": " << join(x) << '\n';
    for (std::size_t k = 0; k < which.size(); ++k) {
      const Bdd& bdd = bdds[k];
      std::vector<std::pair<std::string, Inequality>> cuts;
      if (auto c = mincut_cut(bdd, x)) cuts.emplace_back("mincut", cut_to_inequality(*c));
      if (uses_cglp(variant)) {
        if (auto c = cglp_cut(bdd, x)) cuts.emplace_back("cglp", cut_to_inequality(*c));
      }
      for (auto& [family, ineq] : cuts) {
        Inequality cut = tighten_rhs(bdd, ineq);
        if (uses_lifting(variant)) cut = sequential_lift(bdd, cut).inequality;
        const double v = violation(cut, std::span<const double>(x));
        if (v <= tol) continue;
        write_cut(os, family, which[k], cut, v);
        emitted.push_back(cut);
      }
    }
  }
  if (!o.oracle) return 0;
  return report_verify(verify_cuts(emitted, inst), "separated cuts");
}

int cmd_root(const Options& o) {
  const Instance inst = load_instance(o.instance);
  LoopConfig cfg;
  cfg.variant = parse_variant(o.variant);
  cfg.max_rounds = o.rounds;
  if (o.tol >= 0) cfg.violation_tolerance = o.tol;
  cfg.build = build_config(o);
  cfg.seed = o.seed;
  RootReport r = root_loop(inst, cfg);

  std::optional<OracleResult> truth;
  if (o.oracle) {
    truth = oracle(inst);
    if (truth->optimum) {
      r.oracle_optimum = truth->optimum;
      r.root_gap = root_gap(r.final_bound, *truth->optimum);
    }
  }

  Output out(o.output);
  std::ostream& os = out.get();
  if (o.csv) {
    os << "round,bound,mincut_cuts,cglp_cuts\n";
    for (const RoundRecord& rr : r.rounds) {
      os << rr.round << ',' << format_real(rr.bound) << ',' << rr.mincut_cuts << ','
         << rr.cglp_cuts << '\n';
    }
  } else {
    os << "variant " << to_string(r.variant) << '\n';
    os << "valid " << (r.valid ? "yes" : "no") << '\n';
    if (!r.valid) os << "error " << r.error << '\n';
    os << "initial_bound " << format_real(r.initial_bound) << '\n';
    os << "final_bound " << format_real(r.final_bound) << '\n';
    os << "rounds " << (r.rounds.empty() ? 0 : r.rounds.size() - 1) << '\n';
    os << "converged " << (r.converged ? "yes" : "no") << '\n';
    os << "cuts " << r.cuts.size() << " (mincut " << r.mincut_cuts << ", cglp " << r.cglp_cuts
       << ")\n";
    os << "lift_fraction " << format_real(r.lift_fraction) << '\n';
    os << "lp_solves " << r.lp_solves << '\n';
    os << "max_duality_gap " << format_real(r.max_duality_gap) << '\n';
    if (r.oracle_optimum) os << "oracle_optimum " << format_real(*r.oracle_optimum) << '\n';
    if (r.root_gap) os << "root_gap " << format_real(*r.root_gap) << '\n';
    char seconds[32];
    std::snprintf(seconds, sizeof seconds, "%.3f", r.seconds);
    os << "seconds " << seconds << '\n';
  }
  if (!o.cuts_out.empty()) {
    std::ofstream cuts(o.cuts_out);
    if (!cuts) throw std::runtime_error("cannot write '" + o.cuts_out + "'");
    for (const CutRecord& c : r.cuts) {
      write_cut(cuts, to_string(c.family), c.bdd, c.added, c.violation);
    }
  }
  int status = r.valid ? 0 : kVerifyFailed;
  if (truth) {
    std::vector<Inequality> added;
    for (const CutRecord& c : r.cuts) added.push_back(c.added);
    status = std::max(status, report_verify(verify_cuts(added, truth->feasible), "root cuts"));
    if (truth->optimum && r.final_bound < *truth->optimum - 1e-6) {
      std::cerr << "verification failed: bound below the enumerated optimum\n";
      status = kVerifyFailed;
    }
  }
  return status;
}

int cmd_verify(const Options& o) {
  const Instance inst = load_instance(o.instance);
  std::ifstream in(o.cuts_file);
  if (!in) throw std::runtime_error("cannot open cut file '" + o.cuts_file + "'");
  std::vector<Inequality> cuts;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::string family;
    int bdd = 0;
    ss >> family >> bdd;
    std::string rest;
    std::getline(ss, rest);
    const std::vector<double> v = parse_reals(rest);
    if (!ss.eof() && ss.fail()) throw std::runtime_error("line " + std::to_string(line_no));
    if (static_cast<int>(v.size()) != inst.n + 2) {
      throw std::runtime_error("cut file line " + std::to_string(line_no) + ": expected " +
                               std::to_string(inst.n + 2) + " numbers after the family tag");
    }
    cuts.push_back({{v.begin(), v.begin() + inst.n}, v[inst.n]});
  }
  const double tol = o.tol < 0 ? 1e-9 : o.tol;
  return report_verify(verify_cuts(cuts, inst, tol), o.cuts_file);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decision-diagram cutting planes for binary conic constraints"};
  app.require_subcommand(1);
  Options o;

  auto* gen = app.add_subcommand("gen", "generate a random instance");
  gen->add_option("--family", o.family, "soc-cc or soc-k")->capture_default_str();
  gen->add_option("--n", o.n, "variables")->capture_default_str();
  gen->add_option("--m", o.m, "constraints")->capture_default_str();
  gen->add_option("--omega", o.omega, "norm multiplier")->capture_default_str();
  gen->add_option("--tightness", o.tightness, "rhs tightness t")->capture_default_str();

  auto* build = app.add_subcommand("build", "compile one constraint to a BDD dump");
  build->add_flag("--dot", o.dot, "write a graphviz description instead of the dump");

  auto* lift = app.add_subcommand("lift", "tighten and sequentially lift an inequality");
  lift->add_option("--pi", o.pi, "coefficients, comma or space separated")->required();
  lift->add_option("--rhs", o.rhs, "right-hand side (default: tightened)");
  lift->add_option("--rule", o.rule, "min-abs or lowest-index")->capture_default_str();

  auto* separate = app.add_subcommand("separate", "separate points with both cut families");
  separate->add_option("--point", o.point, "one point, comma separated");
  separate->add_option("--points", o.points_file, "file with one point per line");

  auto* root = app.add_subcommand("root", "run the root cutting-plane loop");
  root->add_flag("--csv", o.csv, "per-round bounds as CSV");
  root->add_option("--cuts-out", o.cuts_out, "write the added cuts to this file");

  auto* verify = app.add_subcommand("verify", "check a cut list against enumeration");
  verify->add_option("--cuts", o.cuts_file, "cut list file")->required();

  for (auto* sub : {build, lift, separate, root, verify}) {
    sub->add_option("instance", o.instance, "instance file")->required();
    sub->add_flag("--oracle", o.oracle, "check results against full enumeration");
  }
  for (auto* sub : {build, lift, separate}) {
    sub->add_option("--constraint", o.constraint, "constraint index (default: first / all)");
  }
  for (auto* sub : {build, lift, separate, root}) {
    sub->add_option("--width", o.width, "maximum BDD width (default: exact)");
  }
  for (auto* sub : {separate, root}) {
    sub->add_option("--variant", o.variant, "flow, flow+lift, cglp, cglp+lift")
        ->capture_default_str();
  }
  for (auto* sub : {separate, root, verify}) {
    sub->add_option("--tol", o.tol, "violation tolerance");
  }
  for (auto* sub : {gen, root}) {
    sub->add_option("--seed", o.seed, "random seed")->capture_default_str();
  }
  root->add_option("--rounds", o.rounds, "maximum rounds")->capture_default_str();
  for (auto* sub : {gen, build, lift, separate, root}) {
    sub->add_option("-o,--output", o.output, "output file (default: stdout)");
  }

  CLI11_PARSE(app, argc, argv);
  o.has_rhs = lift->count("--rhs") > 0;

  try {
    if (*gen) return cmd_gen(o);
    if (*build) return cmd_build(o);
    if (*lift) return cmd_lift(o);
    if (*separate) return cmd_separate(o);
    if (*root) return cmd_root(o);
    if (*verify) return cmd_verify(o);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsageError;
  }
  return kUsageError;
}
