#pragma once

#include <string>
#include <vector>

#include "tokcol/assignment.hpp"
#include "tokcol/topology.hpp"

namespace tokcol {

struct Instance {
  Topology topo;
  TokenAssignment tokens;
};

// Plain-text instance format:
//   n k L
//   u v pu pv     (one line per edge; ports 1-based; "u v" also accepted,
//                  assigning ports in order of appearance)
//   v: h1 h2 ...  (one line per node; fixed-width hex, ceil(L/4) digits)
// '#' starts a comment.  emit always writes the 4-field edge form, and
// parse(emit(x)) reproduces x exactly, ports included.
std::string emit_instance(const Instance& inst);
Instance parse_instance(const std::string& text);

// Node correspondence for paired instances: one "cover base" line per cover
// node.
std::string emit_correspondence(const std::vector<int>& map_to_base);
std::vector<int> parse_correspondence(const std::string& text);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace tokcol
