#include "bddcut/instance_io.hpp"

#include <charconv>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace bddcut {

std::string format_real(double value) {
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, result.ptr);
}

namespace {

void write_reals(std::ostream& out, const char* key, const std::vector<double>& values) {
  out << key;
  for (double v : values) out << ' ' << format_real(v);
  out << '\n';
}

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  // Next non-blank, non-comment line as tokens; false at end of input.
  bool next(std::vector<std::string>& tokens) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      std::istringstream ss(line);
      tokens.clear();
      std::string tok;
      while (ss >> tok) tokens.push_back(tok);
      if (tokens.empty() || tokens[0][0] == '#') continue;
      return true;
    }
    return false;
  }

  int line() const { return line_no_; }

  [[noreturn]] void fail(const std::string& message) const {
    throw std::runtime_error("instance file, line " + std::to_string(line_no_) + ": " + message);
  }

 private:
  std::istream& in_;
  int line_no_ = 0;
};

double parse_real(const LineReader& reader, const std::string& token) {
  double value = 0.0;
  const char* begin = token.data();
  const char* end = begin + token.size();
  if (!token.empty() && *begin == '+') ++begin;
  const auto result = std::from_chars(begin, end, value);
  if (result.ec != std::errc() || result.ptr != end) {
    reader.fail("expected a number, got '" + token + "'");
  }
  return value;
}

long long parse_int(const LineReader& reader, const std::string& token) {
  long long value = 0;
  const auto result = std::from_chars(token.data(), token.data() + token.size(), value);
  if (result.ec != std::errc() || result.ptr != token.data() + token.size()) {
    reader.fail("expected an integer, got '" + token + "'");
  }
  return value;
}

std::vector<double> parse_reals(const LineReader& reader, const std::vector<std::string>& tokens,
                                std::size_t expected) {
  if (tokens.size() != expected + 1) {
    reader.fail("'" + tokens[0] + "' expects " + std::to_string(expected) + " values, got " +
                std::to_string(tokens.size() - 1));
  }
  std::vector<double> out;
  out.reserve(expected);
  for (std::size_t k = 1; k < tokens.size(); ++k) out.push_back(parse_real(reader, tokens[k]));
  return out;
}

void expect_arity(const LineReader& reader, const std::vector<std::string>& tokens,
                  std::size_t arity) {
  if (tokens.size() != arity + 1) {
    reader.fail("'" + tokens[0] + "' expects " + std::to_string(arity) + " value(s)");
  }
}

SocConstraint read_constraint(LineReader& reader, int index, int n) {
  const std::string where =
      "constraint " + std::to_string(index) + " (starting line " + std::to_string(reader.line()) + ")";
  std::map<std::string, int> seen;
  std::string kind_text;
  std::vector<double> a;
  long long rows = -1;
  std::vector<MatrixEntry> entries;
  std::vector<double> h;
  double omega = 0.0;
  double b = 0.0;
  std::vector<std::string> tokens;
  while (true) {
    if (!reader.next(tokens)) reader.fail(where + ": unexpected end of file (missing 'end')");
    const std::string& key = tokens[0];
    if (key == "end") break;
    if (seen[key]++ > 0) reader.fail(where + ": repeated field '" + key + "'");
    if (key == "kind") {
      expect_arity(reader, tokens, 1);
      kind_text = tokens[1];
    } else if (key == "a") {
      a = parse_reals(reader, tokens, static_cast<std::size_t>(n));
    } else if (key == "rows") {
      expect_arity(reader, tokens, 1);
      rows = parse_int(reader, tokens[1]);
      if (rows < 0) reader.fail(where + ": negative row count");
    } else if (key == "D") {
      expect_arity(reader, tokens, 1);
      const long long count = parse_int(reader, tokens[1]);
      if (count < 0) reader.fail(where + ": negative D entry count");
      for (long long k = 0; k < count; ++k) {
        if (!reader.next(tokens)) reader.fail(where + ": unexpected end of D entries");
        if (tokens.size() != 3) reader.fail(where + ": D entry must be '<row> <col> <value>'");
        entries.push_back({static_cast<int>(parse_int(reader, tokens[0])),
                           static_cast<int>(parse_int(reader, tokens[1])),
                           parse_real(reader, tokens[2])});
      }
    } else if (key == "h") {
      h.clear();
      for (std::size_t k = 1; k < tokens.size(); ++k) h.push_back(parse_real(reader, tokens[k]));
    } else if (key == "omega") {
      expect_arity(reader, tokens, 1);
      omega = parse_real(reader, tokens[1]);
    } else if (key == "b") {
      expect_arity(reader, tokens, 1);
      b = parse_real(reader, tokens[1]);
    } else {
      reader.fail(where + ": unknown field '" + key + "'");
    }
  }

  auto require = [&](const char* field) {
    if (!seen.count(field)) reader.fail(where + ": missing field '" + std::string(field) + "'");
  };
  require("kind");
  require("a");
  require("b");
  ConstraintKind kind;
  try {
    kind = parse_constraint_kind(kind_text);
  } catch (const std::invalid_argument& e) {
    reader.fail(where + ": " + e.what());
  }
  try {
    switch (kind) {
      case ConstraintKind::kLinear:
        for (const char* f : {"rows", "D", "h", "omega"}) {
          if (seen.count(f)) reader.fail(where + ": field '" + f + "' not allowed for linear");
        }
        return SocConstraint::linear(std::move(a), b);
      case ConstraintKind::kDiagonalKnapsack: {
        require("D");
        require("omega");
        for (const char* f : {"rows", "h"}) {
          if (seen.count(f)) {
            reader.fail(where + ": field '" + f + "' not allowed for diagonal-knapsack");
          }
        }
        std::vector<double> diag(static_cast<std::size_t>(n), 0.0);
        for (const MatrixEntry& e : entries) {
          if (e.row != e.col || e.row < 0 || e.row >= n) {
            reader.fail(where + ": diagonal-knapsack D entries must lie on the diagonal");
          }
          diag[e.row] = e.value;
        }
        return SocConstraint::diagonal_knapsack(std::move(a), std::move(diag), omega, b);
      }
      case ConstraintKind::kGeneral:
        require("rows");
        require("D");
        require("h");
        require("omega");
        if (static_cast<long long>(h.size()) != rows) {
          reader.fail(where + ": h must have 'rows' entries");
        }
        return SocConstraint::general(std::move(a), static_cast<int>(rows), std::move(entries),
                                      std::move(h), omega, b);
    }
  } catch (const std::invalid_argument& e) {
    reader.fail(where + ": " + e.what());
  }
  reader.fail(where + ": unreachable");
}

}  // namespace

void write_instance(std::ostream& out, const Instance& instance) {
  out << "n " << instance.n << '\n';
  out << "m " << instance.m() << '\n';
  write_reals(out, "c", instance.c);
  if (instance.metadata) {
    const InstanceMetadata& md = *instance.metadata;
    out << "meta " << md.family << ' ' << md.seed << ' ' << format_real(md.tightness) << ' '
        << format_real(md.omega) << '\n';
  }
  for (int j = 0; j < instance.m(); ++j) {
    const SocConstraint& c = instance.constraints[j];
    out << "constraint " << j << '\n';
    out << "kind " << to_string(c.kind()) << '\n';
    write_reals(out, "a", c.a());
    if (c.kind() == ConstraintKind::kGeneral) out << "rows " << c.num_rows() << '\n';
    if (c.kind() != ConstraintKind::kLinear) {
      const auto nz = c.nonzeros();
      out << "D " << nz.size() << '\n';
      for (const MatrixEntry& e : nz) {
        out << e.row << ' ' << e.col << ' ' << format_real(e.value) << '\n';
      }
    }
    if (c.kind() == ConstraintKind::kGeneral) write_reals(out, "h", c.h());
    if (c.kind() != ConstraintKind::kLinear) out << "omega " << format_real(c.omega()) << '\n';
    out << "b " << format_real(c.b()) << '\n';
    out << "end\n";
  }
}

std::string to_text(const Instance& instance) {
  std::ostringstream out;
  write_instance(out, instance);
  return out.str();
}

Instance read_instance(std::istream& in) {
  LineReader reader(in);
  Instance inst;
  std::vector<std::string> tokens;
  long long m = -1;
  bool have_c = false;
  while (reader.next(tokens)) {
    const std::string& key = tokens[0];
    if (key == "n") {
      expect_arity(reader, tokens, 1);
      const long long n = parse_int(reader, tokens[1]);
      if (n < 1) reader.fail("n must be >= 1");
      inst.n = static_cast<int>(n);
    } else if (key == "m") {
      expect_arity(reader, tokens, 1);
      m = parse_int(reader, tokens[1]);
      if (m < 0) reader.fail("m must be >= 0");
    } else if (key == "c") {
      if (inst.n < 1) reader.fail("'c' before 'n'");
      inst.c = parse_reals(reader, tokens, static_cast<std::size_t>(inst.n));
      have_c = true;
    } else if (key == "meta") {
      expect_arity(reader, tokens, 4);
      InstanceMetadata md;
      md.family = tokens[1];
      const std::string& seed = tokens[2];
      const auto res = std::from_chars(seed.data(), seed.data() + seed.size(), md.seed);
      if (res.ec != std::errc() || res.ptr != seed.data() + seed.size()) {
        reader.fail("expected an unsigned seed, got '" + seed + "'");
      }
      md.tightness = parse_real(reader, tokens[3]);
      md.omega = parse_real(reader, tokens[4]);
      inst.metadata = md;
    } else if (key == "constraint") {
      expect_arity(reader, tokens, 1);
      if (inst.n < 1) reader.fail("'constraint' before 'n'");
      const long long index = parse_int(reader, tokens[1]);
      if (index != inst.m()) {
        reader.fail("expected constraint " + std::to_string(inst.m()) + ", got " + tokens[1]);
      }
      inst.constraints.push_back(read_constraint(reader, static_cast<int>(index), inst.n));
    } else {
      reader.fail("unknown record '" + key + "'");
    }
  }
  if (inst.n < 1) reader.fail("missing 'n'");
  if (!have_c) reader.fail("missing 'c'");
  if (m < 0) reader.fail("missing 'm'");
  if (m != inst.m()) {
    reader.fail("'m' says " + std::to_string(m) + " constraints, file has " +
                std::to_string(inst.m()));
  }
  validate(inst);
  return inst;
}

Instance parse_instance(const std::string& text) {
  std::istringstream in(text);
  return read_instance(in);
}

}  // namespace bddcut
