#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tokcol/instance_io.hpp"
#include "tokcol/run_config.hpp"

namespace tokcol {

// One experiment: a seeded instance family plus a run configuration,
// written as "key value" lines ('#' comments).  Unknown or repeated keys are
// parse errors.  emit_experiment prints the canonical form (every key, fixed
// order), which also feeds the config hash.
struct ExperimentSpec {
  std::string topology = "ring";  // ring | path | random | dumbbell | file
  int n = 8;                      // dumbbell: clique size (total 2n + bridge)
  int bridge = 1;                 // dumbbell bridge length
  double edge_prob = 0.25;        // random: extra edge probability
  std::string instance_file;      // topology file: instance path
  int k = -1;                     // -1 means n
  int L = 8;
  int dup_pairs = 0;
  bool adversarial = false;       // place the minimum token far away
  int repeat = 1;
  std::uint64_t seed = 1;
  RunConfig run;
};

ExperimentSpec parse_experiment(const std::string& text);
std::string emit_experiment(const ExperimentSpec& spec);

// Recognized keys in canonical order, and the subset that may take a comma
// list in a sweep grid.
const std::vector<std::string>& experiment_keys();
bool experiment_key_listable(const std::string& key);

// FNV-1a over the canonical form, folded to eight hex digits.
std::string config_hash8(const ExperimentSpec& spec);

// "<hash8>-NNN", numbering repetitions from zero.
std::string run_id(const ExperimentSpec& spec, int index);

// Repetition `index` gets its own derived seed for topology ports, token
// placement, and the run itself; a file-backed instance is reused as is.
struct MaterializedRun {
  Instance inst;
  RunConfig cfg;
};
MaterializedRun materialize_run(const ExperimentSpec& spec, int index);

}  // namespace tokcol
