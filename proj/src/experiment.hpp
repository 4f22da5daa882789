#pragma once

#include <memory>

#include "config.hpp"
#include "metrics.hpp"
#include "objective.hpp"
#include "sim.hpp"

namespace dane {

/* One problem instance held together: generated data, the loss and the
 * evaluation state.  Heap-allocated because EvalContext keeps pointers into
 * the other members. */
struct PreparedProblem {
  Dataset data;
  RidgeLoss loss;
  EvalContext eval;

  PreparedProblem(Dataset d, double reg) : data(std::move(d)), loss(reg) {}
};

std::unique_ptr<PreparedProblem> prepare_problem(const ResolvedExperiment& exp);

// Partitions with the run's machine count (seeded by the problem seed, so
// same-sized runs share shards) and executes.
RunOutput execute_run(const PreparedProblem& prob, const ResolvedExperiment& exp,
                      const ResolvedRun& run);

}  // namespace dane
