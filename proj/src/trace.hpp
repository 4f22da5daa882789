#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace dane {

enum class Algorithm { kSgd, kIdealDistSgd, kDistSgd, kDaneExact, kDaneSgd, kDaneSvrg };

std::string algorithm_name(Algorithm a);
Algorithm parse_algorithm(const std::string& name);  // ConfigError on unknown

/* Cost model.  Per-sample gradient evaluations are tracked per machine
 * (metric evaluation is never charged).  A gradient broadcast or an iterate
 * averaging step each count as one communication round moving 2*m*d floats
 * (all-reduce: every machine sends and receives d doubles). */
struct CostLedger {
  std::vector<std::uint64_t> grads_per_machine;
  std::uint64_t comm_rounds = 0;
  std::uint64_t floats_communicated = 0;
  std::uint64_t exact_solve_events = 0;

  std::uint64_t max_grads() const;
};

struct TracePoint {
  int round = 0;
  // max over machines of cumulative gradient evaluations; fractional after
  // the ideal single-machine rescaling, hence a double
  double max_grads_per_machine = 0.0;
  std::uint64_t comm_rounds = 0;
  std::uint64_t floats_communicated = 0;
  double train_subopt = 0.0;
  double log10_subopt = 0.0;
  double pop_error = 0.0;
};

struct Trace {
  Algorithm algorithm = Algorithm::kSgd;
  std::vector<TracePoint> points;
};

}  // namespace dane
