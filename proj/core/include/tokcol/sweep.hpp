#pragma once

#include <string>
#include <vector>

#include "tokcol/experiment.hpp"
#include "tokcol/snapshot.hpp"

namespace tokcol {

struct SweepResult {
  ExperimentSpec spec;
  int index = 0;  // repetition within the cell
  RunMetrics metrics;
  Verdict oracle = Verdict::AllDistinct;
};

// Sweep config: experiment keys, where the grid keys may carry a comma list
// ("n 8,16,32").  Cells expand in canonical key order, first key slowest.
std::vector<ExperimentSpec> parse_sweep(const std::string& text);

// Run every cell and repetition.  Work is spread over TOKCOL_WORKERS threads
// (default: hardware concurrency); results come back ordered by (cell,
// repetition) no matter how the threads were scheduled.
std::vector<SweepResult> run_sweep(const std::vector<ExperimentSpec>& cells);

std::string sweep_csv(const std::vector<SweepResult>& results);

struct LinearFit {
  double a = 0;
  double C = 0;
};

// Least squares of observed rounds against the work term D + k*ceil(L/B).
LinearFit fit_rounds(const std::vector<SweepResult>& results);

}  // namespace tokcol
