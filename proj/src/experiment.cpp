#include "experiment.hpp"

namespace dane {

std::unique_ptr<PreparedProblem> prepare_problem(const ResolvedExperiment& exp) {
  auto prob = std::make_unique<PreparedProblem>(generate_synthetic(exp.synth), exp.reg);
  prob->eval = make_eval_context(prob->data, prob->loss, exp.synth, exp.holdout_size);
  return prob;
}

RunOutput execute_run(const PreparedProblem& prob, const ResolvedExperiment& exp,
                      const ResolvedRun& run) {
  const std::vector<Shard> shards =
      partition(prob.data, run.cfg.machines, exp.synth.seed);
  return dane::run(run.cfg, prob.data, shards, prob.loss, prob.eval);
}

}  // namespace dane
