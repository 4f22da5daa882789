#include "metrics.hpp"

#include <Eigen/Cholesky>
#include <cmath>

#include "errors.hpp"
#include "rng.hpp"

namespace dane {

Optimum solve_optimum(const Dataset& data, const Loss& loss) {
  if (!loss.quadratic())
    throw UnsupportedError("solve_optimum: requires a quadratic loss");
  const DataView view = DataView::whole(data);
  const Index d = data.dim();

  Eigen::MatrixXd H = loss.hessian(view);
  Eigen::VectorXd b = -full_grad(loss, view, Eigen::VectorXd::Zero(d), nullptr);

  Eigen::LLT<Eigen::MatrixXd> llt(H);
  if (llt.info() != Eigen::Success)
    throw NumericError("solve_optimum: normal equations are singular or indefinite");
  Eigen::VectorXd w = llt.solve(b);
  w += llt.solve(b - H * w);
  const double rel = (H * w - b).norm() / std::max(b.norm(), 1e-300);
  if (!(rel <= 1e-10))
    throw NumericError("solve_optimum: residual " + std::to_string(rel) +
                       " exceeds tolerance 1e-10");

  const double value = empirical_risk(loss, data, w);
  return Optimum{std::move(w), value};
}

EvalContext make_eval_context(const Dataset& train, const Loss& loss,
                              const SyntheticSpec& generator, Index holdout_size) {
  if (holdout_size < 1) throw ConfigError("eval.holdout_size: must be >= 1");
  EvalContext ctx;
  ctx.train = &train;
  ctx.loss = &loss;

  Optimum opt = solve_optimum(train, loss);
  ctx.w_opt = std::move(opt.w);
  ctx.f_opt = opt.value;

  // Stationarity guard on the claimed optimum.
  const DataView view = DataView::whole(train);
  const double g_opt = full_grad(loss, view, ctx.w_opt, nullptr).norm();
  const double g_zero =
      full_grad(loss, view, Eigen::VectorXd::Zero(train.dim()), nullptr).norm();
  if (!(g_opt <= 1e-8 * std::max(1.0, g_zero)))
    throw NumericError("make_eval_context: optimum fails the stationarity check");

  SyntheticSpec holdout_spec = generator;
  holdout_spec.n_total = holdout_size;
  holdout_spec.seed = Rng::stream(generator.seed, Rng::Purpose::kHoldout, 0, 0).next_u64();
  ctx.holdout = generate_synthetic(holdout_spec);
  return ctx;
}

double suboptimality(const EvalContext& ctx, const ConstVecRef& w) {
  return empirical_risk(*ctx.loss, *ctx.train, w) - ctx.f_opt;
}

double log10_suboptimality(double subopt) {
  return std::log10(std::max(subopt, kSuboptFloor));
}

double population_error(const EvalContext& ctx, const ConstVecRef& w) {
  return empirical_risk(*ctx.loss, ctx.holdout, w);
}

std::optional<int> rounds_to_target(const Trace& trace, double target_log10) {
  for (const TracePoint& p : trace.points)
    if (p.log10_subopt <= target_log10) return p.round;
  return std::nullopt;
}

}  // namespace dane
