#include "bddcut/bdd_io.hpp"

#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace bddcut {

namespace {

[[noreturn]] void parse_error(int line, const std::string& message) {
  throw std::runtime_error("bdd dump, line " + std::to_string(line) + ": " + message);
}

// Next non-empty, non-comment line split into a stream.
bool next_record(std::istream& in, int& line_no, std::istringstream& record) {
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    record.clear();
    record.str(line);
    return true;
  }
  return false;
}

}  // namespace

void write_bdd(std::ostream& out, const Bdd& bdd) {
  if (bdd.is_empty()) {
    out << "bdd " << bdd.num_vars() << " 0 0\n";
    return;
  }
  out << "bdd " << bdd.num_vars() << ' ' << bdd.num_nodes() << ' ' << bdd.num_arcs() << '\n';
  for (NodeId u = 0; u < bdd.num_nodes(); ++u) out << bdd.layer_of(u) << ' ' << u << '\n';
  for (const Arc& a : bdd.arcs()) out << a.source << ' ' << a.target << ' ' << a.value << '\n';
}

std::string to_dump(const Bdd& bdd) {
  std::ostringstream out;
  write_bdd(out, bdd);
  return out.str();
}

Bdd read_bdd(std::istream& in) {
  int line_no = 0;
  std::istringstream rec;
  if (!next_record(in, line_no, rec)) parse_error(line_no, "missing header");
  std::string tag;
  int n = 0;
  int num_nodes = 0;
  int num_arcs = 0;
  if (!(rec >> tag >> n >> num_nodes >> num_arcs) || tag != "bdd") {
    parse_error(line_no, "expected 'bdd <n> <nodes> <arcs>'");
  }
  if (n < 1) parse_error(line_no, "variable count must be positive");
  if (num_nodes == 0) {
    if (num_arcs != 0) parse_error(line_no, "empty diagram cannot have arcs");
    return Bdd::empty(n);
  }
  if (num_nodes < 2 || num_arcs < 1) parse_error(line_no, "too few nodes or arcs");

  std::vector<int> layer(static_cast<std::size_t>(num_nodes), -1);
  std::vector<int> index_in_layer(static_cast<std::size_t>(num_nodes), -1);
  LayeredGraph g;
  g.num_vars = n;
  g.layers.resize(static_cast<std::size_t>(n));
  int terminals = 0;
  for (int k = 0; k < num_nodes; ++k) {
    if (!next_record(in, line_no, rec)) parse_error(line_no, "unexpected end of node list");
    int l = 0;
    int id = 0;
    if (!(rec >> l >> id)) parse_error(line_no, "expected '<layer> <id>'");
    if (l < 0 || l > n) parse_error(line_no, "layer out of range");
    if (id < 0 || id >= num_nodes || layer[id] != -1) {
      parse_error(line_no, "node id out of range or repeated");
    }
    layer[id] = l;
    if (l == n) {
      index_in_layer[id] = terminals++;
    } else {
      index_in_layer[id] = static_cast<int>(g.layers[l].size());
      g.layers[l].push_back({kNoNode, kNoNode});
    }
  }
  if (terminals != 1) parse_error(line_no, "exactly one terminal node required");
  if (g.layers[0].size() != 1) parse_error(line_no, "exactly one root node required");

  for (int k = 0; k < num_arcs; ++k) {
    if (!next_record(in, line_no, rec)) parse_error(line_no, "unexpected end of arc list");
    int src = 0;
    int dst = 0;
    int value = 0;
    if (!(rec >> src >> dst >> value)) parse_error(line_no, "expected '<src> <dst> <value>'");
    if (src < 0 || src >= num_nodes || dst < 0 || dst >= num_nodes) {
      parse_error(line_no, "arc endpoint out of range");
    }
    if (value != 0 && value != 1) parse_error(line_no, "arc value must be 0 or 1");
    const int ls = layer[src];
    if (ls == n || layer[dst] != ls + 1) parse_error(line_no, "arc must join consecutive layers");
    int& slot = g.layers[ls][index_in_layer[src]][value];
    if (slot != kNoNode) parse_error(line_no, "duplicate arc value out of a node");
    slot = index_in_layer[dst];
  }
  return Bdd::from_layers(g);
}

Bdd parse_dump(const std::string& text) {
  std::istringstream in(text);
  return read_bdd(in);
}

std::string to_dot(const Bdd& bdd) {
  std::ostringstream out;
  out << "digraph bdd {\n  rankdir=TB;\n  node [shape=circle];\n";
  if (!bdd.is_empty()) {
    for (int i = 0; i <= bdd.num_vars(); ++i) {
      out << "  { rank=same;";
      for (NodeId u = bdd.layer_begin(i); u < bdd.layer_end(i); ++u) out << " n" << u << ';';
      out << " }\n";
    }
    out << "  n" << bdd.root() << " [label=\"r\"];\n";
    out << "  n" << bdd.terminal() << " [label=\"t\"];\n";
    for (const Arc& a : bdd.arcs()) {
      out << "  n" << a.source << " -> n" << a.target
          << (a.value == 0 ? " [style=dashed];\n" : ";\n");
    }
  }
  out << "}\n";
  return out.str();
}

}  // namespace bddcut
