#pragma once

#include <Eigen/Dense>
#include <optional>

#include "data.hpp"
#include "objective.hpp"
#include "trace.hpp"

namespace dane {

// Suboptimality below this floor is reported as the floor; keeps log plots
// finite once a run reaches machine precision.
inline constexpr double kSuboptFloor = 1e-16;
// Tiny negative suboptimality is numerical noise; anything below this bound
// means the reference optimum is wrong and the run fails.
inline constexpr double kSuboptSlack = -1e-9;

/* Minimizer of the training objective via the normal equations
 *   ((2/N) X'X + 2*reg*I) w = (2/N) X'y
 * (stationarity of the mean ridge loss).  Verified to relative residual
 * 1e-10; throws NumericError otherwise. */
struct Optimum {
  Eigen::VectorXd w;
  double value = 0.0;
};
Optimum solve_optimum(const Dataset& data, const Loss& loss);

/* Fixed evaluation state for one problem instance: the empirical optimum and
 * a freshly drawn holdout set from the same generator (independent seed,
 * derived from the generator seed).  Metric evaluation is never charged to
 * the cost ledger. */
struct EvalContext {
  const Dataset* train = nullptr;
  const Loss* loss = nullptr;
  Eigen::VectorXd w_opt;
  double f_opt = 0.0;
  Dataset holdout;
};

EvalContext make_eval_context(const Dataset& train, const Loss& loss,
                              const SyntheticSpec& generator, Index holdout_size);

double suboptimality(const EvalContext& ctx, const ConstVecRef& w);
double log10_suboptimality(double subopt);
double population_error(const EvalContext& ctx, const ConstVecRef& w);

// First round whose logged suboptimality is <= target; nullopt when the
// trace never gets there.
std::optional<int> rounds_to_target(const Trace& trace, double target_log10);

}  // namespace dane
