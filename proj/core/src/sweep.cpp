#include "tokcol/sweep.hpp"

#include <atomic>
#include <cstdlib>
#include <exception>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "tokcol/engine.hpp"
#include "tokcol/errors.hpp"
#include "tokcol/verify.hpp"

namespace tokcol {

namespace {

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::size_t a = 0;
  while (a <= s.size()) {
    std::size_t b = s.find(',', a);
    if (b == std::string::npos) b = s.size();
    out.push_back(s.substr(a, b - a));
    a = b + 1;
  }
  return out;
}

}  // namespace

std::vector<ExperimentSpec> parse_sweep(const std::string& text) {
  std::map<std::string, std::vector<std::string>> values;
  std::istringstream in(text);
  std::string line;
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
    bool known = false;
    for (const std::string& k : experiment_keys()) known = known || k == key;
    if (!known)
      throw ParseError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    if (values.count(key))
      throw ParseError("line " + std::to_string(lineno) + ": repeated key '" + key + "'");
    std::vector<std::string> vs = split_list(value);
    if (vs.size() > 1 && !experiment_key_listable(key))
      throw ParseError("line " + std::to_string(lineno) + ": key '" + key +
                       "' takes a single value");
    for (const std::string& v : vs)
      if (v.empty())
        throw ParseError("line " + std::to_string(lineno) + ": empty value in list");
    values[key] = vs;
  }

  std::vector<std::string> combos = {""};
  for (const std::string& key : experiment_keys()) {
    auto it = values.find(key);
    if (it == values.end()) continue;
    std::vector<std::string> next;
    next.reserve(combos.size() * it->second.size());
    for (const std::string& base : combos)
      for (const std::string& v : it->second)
        next.push_back(base + key + " " + v + "\n");
    combos = std::move(next);
  }

  std::vector<ExperimentSpec> cells;
  cells.reserve(combos.size());
  for (const std::string& c : combos) cells.push_back(parse_experiment(c));
  return cells;
}

std::vector<SweepResult> run_sweep(const std::vector<ExperimentSpec>& cells) {
  struct Job {
    const ExperimentSpec* spec;
    int index;
  };
  std::vector<Job> jobs;
  for (const ExperimentSpec& cell : cells) {
    if (cell.repeat < 1) throw InvalidParameterError("repeat must be at least 1");
    for (int i = 0; i < cell.repeat; ++i) jobs.push_back({&cell, i});
  }
  std::vector<SweepResult> results(jobs.size());

  unsigned workers = std::thread::hardware_concurrency();
  if (const char* env = std::getenv("TOKCOL_WORKERS")) {
    long w = std::strtol(env, nullptr, 10);
    if (w >= 1) workers = static_cast<unsigned>(w);
  }
  if (workers < 1) workers = 1;
  if (workers > jobs.size()) workers = static_cast<unsigned>(jobs.size());

  std::atomic<std::size_t> cursor{0};
  std::exception_ptr first_error;
  std::mutex error_mu;
  auto work = [&] {
    for (;;) {
      std::size_t i = cursor.fetch_add(1);
      if (i >= jobs.size()) return;
      try {
        MaterializedRun mr = materialize_run(*jobs[i].spec, jobs[i].index);
        RunResult rr = run_instance(mr.inst.topo, mr.inst.tokens, mr.cfg);
        results[i].spec = *jobs[i].spec;
        results[i].index = jobs[i].index;
        results[i].metrics = rr.metrics;
        results[i].oracle = oracle_collision(mr.inst.tokens);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!first_error) first_error = std::current_exception();
        cursor.store(jobs.size());
        return;
      }
    }
  };

  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (std::thread& th : pool) th.join();
  }
  if (first_error) std::rethrow_exception(first_error);
  return results;
}

std::string sweep_csv(const std::vector<SweepResult>& results) {
  bool rand_phases = false;
  for (const SweepResult& r : results)
    rand_phases = rand_phases || r.metrics.algorithm == Algorithm::Rand;
  std::string out = metrics_header(rand_phases) + "\n";
  for (const SweepResult& r : results)
    out += metrics_record(run_id(r.spec, r.index), r.metrics, r.oracle, rand_phases) + "\n";
  return out;
}

LinearFit fit_rounds(const std::vector<SweepResult>& results) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  double m = 0;
  for (const SweepResult& r : results) {
    const RunMetrics& me = r.metrics;
    double x = me.D + static_cast<double>(me.k) * ((me.L + me.B - 1) / me.B);
    double y = static_cast<double>(me.rounds);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    m += 1;
  }
  LinearFit fit;
  if (m < 1) return fit;
  double den = m * sxx - sx * sx;
  if (den <= 1e-12 && den >= -1e-12) {
    fit.a = sy / m;
    fit.C = 0;
    return fit;
  }
  fit.C = (m * sxy - sx * sy) / den;
  fit.a = (sy - fit.C * sx) / m;
  return fit;
}

}  // namespace tokcol
