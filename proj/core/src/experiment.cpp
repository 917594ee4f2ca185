#include "tokcol/experiment.hpp"

#include <cstdio>
#include <map>
#include <sstream>

#include "tokcol/assignment.hpp"
#include "tokcol/errors.hpp"
#include "tokcol/rng.hpp"

namespace tokcol {

namespace {

bool known_key(const std::string& k) {
  for (const std::string& s : experiment_keys())
    if (k == s) return true;
  return false;
}

long long to_ll(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    long long r = std::stoll(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return r;
  } catch (const std::exception&) {
    throw ParseError("bad integer for '" + key + "': " + v);
  }
}

double to_dbl(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    double r = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return r;
  } catch (const std::exception&) {
    throw ParseError("bad number for '" + key + "': " + v);
  }
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "0") return false;
  if (v == "1") return true;
  throw ParseError("bad flag for '" + key + "': " + v + " (use 0 or 1)");
}

std::string dbl_str(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

}  // namespace

const std::vector<std::string>& experiment_keys() {
  static const std::vector<std::string> keys = {
      "topology",    "n",      "bridge",      "edge_prob", "instance",
      "k",           "L",      "dup_pairs",   "adversarial", "repeat",
      "seed",        "algorithm", "knowledge", "B",         "round_limit",
      "packing",     "rand_c", "rand_beta",   "trace"};
  return keys;
}

bool experiment_key_listable(const std::string& key) {
  static const std::vector<std::string> listable = {
      "topology", "algorithm", "knowledge", "n", "k",
      "L",        "B",         "dup_pairs", "packing", "seed"};
  for (const std::string& s : listable)
    if (key == s) return true;
  return false;
}

ExperimentSpec parse_experiment(const std::string& text) {
  ExperimentSpec spec;
  std::istringstream in(text);
  std::string line;
  std::map<std::string, bool> seen;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::string key, value, extra;
    if (!(ls >> key)) continue;
    if (!(ls >> value) || (ls >> extra))
      throw ParseError("line " + std::to_string(lineno) + ": expected 'key value'");
    if (!known_key(key))
      throw ParseError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    if (seen[key])
      throw ParseError("line " + std::to_string(lineno) + ": repeated key '" + key + "'");
    seen[key] = true;

    if (key == "topology") {
      if (value != "ring" && value != "path" && value != "random" &&
          value != "dumbbell" && value != "file")
        throw ParseError("unknown topology '" + value + "'");
      spec.topology = value;
    } else if (key == "n") {
      spec.n = static_cast<int>(to_ll(key, value));
    } else if (key == "bridge") {
      spec.bridge = static_cast<int>(to_ll(key, value));
    } else if (key == "edge_prob") {
      spec.edge_prob = to_dbl(key, value);
    } else if (key == "instance") {
      spec.instance_file = value == "-" ? "" : value;
    } else if (key == "k") {
      spec.k = static_cast<int>(to_ll(key, value));
    } else if (key == "L") {
      spec.L = static_cast<int>(to_ll(key, value));
    } else if (key == "dup_pairs") {
      spec.dup_pairs = static_cast<int>(to_ll(key, value));
    } else if (key == "adversarial") {
      spec.adversarial = to_bool(key, value);
    } else if (key == "repeat") {
      spec.repeat = static_cast<int>(to_ll(key, value));
    } else if (key == "seed") {
      spec.seed = static_cast<std::uint64_t>(to_ll(key, value));
    } else if (key == "algorithm") {
      auto a = algorithm_from_string(value);
      if (!a) throw ParseError("unknown algorithm '" + value + "'");
      spec.run.algorithm = *a;
    } else if (key == "knowledge") {
      auto k = knowledge_from_string(value);
      if (!k) throw ParseError("unknown knowledge mode '" + value + "'");
      spec.run.knowledge = *k;
    } else if (key == "B") {
      spec.run.bandwidth_B = static_cast<int>(to_ll(key, value));
    } else if (key == "round_limit") {
      spec.run.round_limit = to_ll(key, value);
    } else if (key == "packing") {
      spec.run.packing = to_bool(key, value);
    } else if (key == "rand_c") {
      spec.run.rand_c = static_cast<int>(to_ll(key, value));
    } else if (key == "rand_beta") {
      spec.run.rand_beta = static_cast<int>(to_ll(key, value));
    } else if (key == "trace") {
      if (value == "none") spec.run.trace_level = TraceLevel::Metrics;
      else if (value == "full") spec.run.trace_level = TraceLevel::Full;
      else throw ParseError("bad trace level '" + value + "' (none or full)");
    }
  }
  return spec;
}

std::string emit_experiment(const ExperimentSpec& spec) {
  std::ostringstream os;
  os << "topology " << spec.topology << "\n";
  os << "n " << spec.n << "\n";
  os << "bridge " << spec.bridge << "\n";
  os << "edge_prob " << dbl_str(spec.edge_prob) << "\n";
  os << "instance " << (spec.instance_file.empty() ? "-" : spec.instance_file) << "\n";
  os << "k " << spec.k << "\n";
  os << "L " << spec.L << "\n";
  os << "dup_pairs " << spec.dup_pairs << "\n";
  os << "adversarial " << (spec.adversarial ? 1 : 0) << "\n";
  os << "repeat " << spec.repeat << "\n";
  os << "seed " << spec.seed << "\n";
  os << "algorithm " << to_string(spec.run.algorithm) << "\n";
  os << "knowledge " << to_string(spec.run.knowledge) << "\n";
  os << "B " << spec.run.bandwidth_B << "\n";
  os << "round_limit " << spec.run.round_limit << "\n";
  os << "packing " << (spec.run.packing ? 1 : 0) << "\n";
  os << "rand_c " << spec.run.rand_c << "\n";
  os << "rand_beta " << spec.run.rand_beta << "\n";
  os << "trace " << (spec.run.trace_level == TraceLevel::Full ? "full" : "none") << "\n";
  return os.str();
}

std::string config_hash8(const ExperimentSpec& spec) {
  std::string canon = emit_experiment(spec);
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : canon) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  std::uint32_t folded = static_cast<std::uint32_t>(h ^ (h >> 32));
  char buf[16];
  std::snprintf(buf, sizeof buf, "%08x", folded);
  return buf;
}

std::string run_id(const ExperimentSpec& spec, int index) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "-%03d", index);
  return config_hash8(spec) + buf;
}

MaterializedRun materialize_run(const ExperimentSpec& spec, int index) {
  if (spec.repeat < 1) throw InvalidParameterError("repeat must be at least 1");
  if (index < 0 || index >= spec.repeat)
    throw InvalidParameterError("repetition index out of range");
  std::uint64_t rep_seed = Rng(spec.seed).derive(0x726570, index).next_u64();

  MaterializedRun out;
  if (spec.topology == "file") {
    if (spec.instance_file.empty())
      throw InvalidParameterError("topology 'file' needs an instance path");
    out.inst = parse_instance(read_text_file(spec.instance_file));
  } else {
    if (spec.topology == "ring") out.inst.topo = make_ring(spec.n, rep_seed);
    else if (spec.topology == "path") out.inst.topo = make_path(spec.n, rep_seed);
    else if (spec.topology == "random")
      out.inst.topo = make_random_connected(spec.n, spec.edge_prob, rep_seed);
    else out.inst.topo = make_dumbbell(spec.n, spec.bridge, rep_seed);
    int k = spec.k < 0 ? spec.n : spec.k;
    AssignMode mode = AssignMode::Distinct;
    if (spec.dup_pairs > 0) mode = AssignMode::WithDuplicates;
    if (spec.adversarial) {
      if (spec.dup_pairs > 0)
        throw InvalidParameterError("adversarial placement needs distinct tokens");
      mode = AssignMode::AdversarialMinFar;
    }
    out.inst.tokens = assign_tokens(out.inst.topo, k, spec.L, mode, spec.dup_pairs,
                                    rep_seed);
  }
  out.cfg = spec.run;
  out.cfg.seed = rep_seed;
  return out;
}

}  // namespace tokcol
