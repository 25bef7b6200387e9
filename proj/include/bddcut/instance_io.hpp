#pragma once

// Instance file format (UTF-8 text, one keyword record per line, '#' starts
// a comment line). Numbers use the shortest round-trip decimal form, so
// write(parse(text)) reproduces canonical text byte for byte.
//
//   n <int>
//   m <int>
//   c <n reals>
//   meta <family> <seed> <tightness> <omega>        (optional)
//   constraint <index>                              (m blocks, index 0..m-1)
//   kind general | diagonal-knapsack | linear
//   a <n reals>
//   rows <l>                                        (general only)
//   D <count>                                       (general, diagonal-knapsack)
//   <row> <col> <value>                             (count lines, 0-based)
//   h <l reals>                                     (general only)
//   omega <real>                                    (general, diagonal-knapsack)
//   b <real>
//   end
//
// Inside a constraint block the records may appear in any order; the writer
// emits them in the order above. Diagonal-knapsack D entries must satisfy
// row == col and give d_ii (not its square).

#include <iosfwd>
#include <string>

#include "bddcut/model.hpp"

namespace bddcut {

void write_instance(std::ostream& out, const Instance& instance);
std::string to_text(const Instance& instance);

// Throws std::runtime_error naming the line (and constraint index where one
// is known) on malformed input.
Instance read_instance(std::istream& in);
Instance parse_instance(const std::string& text);

std::string format_real(double value);

}  // namespace bddcut
