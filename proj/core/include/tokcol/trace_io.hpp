#pragma once

#include <string>

#include "tokcol/snapshot.hpp"

namespace tokcol {

// Versioned line format ("tokcol-trace 1"): a fixed header, the per-node
// halt supersteps, then one block per recorded superstep with one line per
// node.  A node line carries the structured checker-visible fields followed
// by " | " and the verbatim state line.  emit/parse round-trip exactly.
std::string emit_trace(const RunTrace& t);
RunTrace parse_trace(const std::string& text);

}  // namespace tokcol
