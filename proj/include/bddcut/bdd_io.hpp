#pragma once

// Text serialization of Bdd values.
//
// Dump grammar (whitespace separated, one record per line):
//   bdd <num_vars> <num_nodes> <num_arcs>
//   <layer> <node-id>            repeated num_nodes times, ids 0..N-1
//   <source> <target> <value>    repeated num_arcs times
// Node ids are the library's contiguous layer-ordered ids; an empty diagram
// is written as "bdd <n> 0 0". Lines starting with '#' are ignored.

#include <iosfwd>
#include <string>

#include "bddcut/bdd.hpp"

namespace bddcut {

void write_bdd(std::ostream& out, const Bdd& bdd);
std::string to_dump(const Bdd& bdd);

// Throws std::runtime_error with a line number on malformed input.
Bdd read_bdd(std::istream& in);
Bdd parse_dump(const std::string& text);

// Graphviz description; 0-arcs dashed, 1-arcs solid.
std::string to_dot(const Bdd& bdd);

}  // namespace bddcut
