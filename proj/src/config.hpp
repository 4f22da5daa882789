#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "data.hpp"
#include "sim.hpp"

namespace dane {

inline constexpr const char* kToolName = "danebench";
inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr const char* kEnvPrefix = "DANEBENCH_";

/* One experiment file, fully resolved.  `problem` describes the data,
 * `runs` the algorithm executions against it. */
struct ResolvedRun {
  std::string name;
  RunConfig cfg;
  Index t_requested = 0;        // T before any budget equalization
  bool equalize_budget = false; // halve SVRG's T so one round costs like SGD's
};

struct ResolvedExperiment {
  SyntheticSpec synth;     // includes problem.seed; w_star is all-ones
  int machines = 4;
  double reg = 0.005;
  Index holdout_size = 100000;
  double target_log_subopt = -2.5;
  int threads = 1;
  std::vector<ResolvedRun> runs;
};

/* Flat "key = value" configuration with dotted keys:
 *
 *   problem.d = 500            # data generator and loss
 *   eval.holdout_size = 100000 # metric settings
 *   threads = 1                # worker threads (never changes results)
 *   run.<name>.algorithm = DaneSvrg
 *   run.<name>.T = 2n          # counts may be given in units of shard size
 *
 * '#' starts a comment, blank lines are skipped, later assignments win.
 * Unknown keys are rejected.  Environment variables DANEBENCH_* override
 * file values: strip the prefix, lowercase, and turn '__' into '.', e.g.
 * DANEBENCH_PROBLEM__N_TOTAL -> problem.n_total. */
class ExperimentConfig {
 public:
  ExperimentConfig() = default;
  static ExperimentConfig from_file(const std::string& path);
  static ExperimentConfig from_string(const std::string& text);

  // Throws ConfigError for syntactically unknown keys; values are checked
  // at resolve time.
  void set(const std::string& key, const std::string& value);
  void apply_env();

  ResolvedExperiment resolve() const;  // full validation, defaults applied
  std::string get(const std::string& key) const;  // resolved value as text

  // Resolved snapshot of the whole experiment for the output manifest:
  // tool version, metric conventions, every default made explicit and one
  // entry per run including its CSV file name.
  std::string manifest_json() const;

 private:
  const std::string* find(const std::string& key) const;
  std::vector<std::pair<std::string, std::string>> entries_;
};

// "2n" / "0.5n" / "1500" -> step count relative to shard size n.
Index parse_step_count(const std::string& text, Index shard_size, const std::string& key);

}  // namespace dane
