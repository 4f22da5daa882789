#pragma once

#include <cstdint>
#include <vector>

#include "data.hpp"
#include "metrics.hpp"
#include "objective.hpp"
#include "schedule.hpp"
#include "trace.hpp"

namespace dane {

enum class AccessMode { kFull, kFixedSubset, kSubsampledGradient };

std::string access_mode_name(AccessMode mode);
AccessMode parse_access_mode(const std::string& name);  // ConfigError on unknown

struct RunConfig {
  Algorithm algorithm = Algorithm::kDaneSvrg;
  int machines = 4;
  int rounds = 20;
  Index inner_steps = 1500;  // T
  double eta = 1.0;
  double mu = 0.0;
  Schedule schedule;       // Sgd / DistSgd / DaneSgd step sizes
  double svrg_alpha = 0.05;
  AccessMode access_mode = AccessMode::kFull;
  double access_fraction = 1.0;
  std::uint64_t seed = 0;
  int threads = 1;

  // Throws ConfigError naming the offending field; n_total is the dataset
  // size the run will execute against.
  void validate(Index n_total) const;
};

struct RunOutput {
  Trace trace;
  CostLedger ledger;
  // Iterate after every recorded round (index = round number).  Small
  // (rounds x d doubles) and lets callers verify the averaging pipeline
  // against external references without re-running anything.
  std::vector<Eigen::VectorXd> iterates;
};

/* Executes one algorithm against a prepared problem.  The caller supplies
 * the dataset, its shards (machine order fixes the reduction order), the
 * loss and the evaluation context.  Output is bit-reproducible for a given
 * config: every random draw comes from a stream keyed by (seed, purpose,
 * machine, round), so the worker thread count never changes the numbers.
 *
 * Round accounting: one DANE round broadcasts gradients and averages
 * iterates (2 communication rounds, each moving 2*m*d floats); distributed
 * SGD averages once per round; single-machine runs never communicate.
 * Iterates start at w = 0 and the trace carries a round-0 point for it. */
RunOutput run(const RunConfig& cfg, const Dataset& data, const std::vector<Shard>& shards,
              const Loss& loss, const EvalContext& ctx);

}  // namespace dane
