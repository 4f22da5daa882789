#include "solvers.hpp"

#include "errors.hpp"

namespace dane {

Eigen::VectorXd sgd_run(const Loss& loss, const DataView& view, const Schedule& schedule,
                        Index steps, const Eigen::VectorXd& w0, Rng& rng, std::int64_t k0,
                        int t, std::uint64_t* grad_counter) {
  if (view.size() == 0) throw ContractViolation("sgd_run: empty view");
  if (steps < 0) throw ContractViolation("sgd_run: negative step count");
  const auto n = static_cast<std::size_t>(view.size());
  Eigen::VectorXd w = w0;
  Eigen::VectorXd g(w.size());
  for (Index s = 0; s < steps; ++s) {
    const auto k = static_cast<Index>(rng.next_index(n));
    const double alpha = step_size(schedule, k0 + s, t);
    loss.grad(view.x(k), view.y(k), w, g);
    w -= alpha * g;
  }
  if (grad_counter) *grad_counter += static_cast<std::uint64_t>(steps);
  return w;
}

Eigen::VectorXd local_solve_sgd(const SubproblemSpec& sub, const Loss& loss,
                                const DataView& view, Index T, const Schedule& schedule,
                                Rng& rng, int t, std::uint64_t* grad_counter) {
  if (view.size() == 0) throw ContractViolation("local_solve_sgd: empty view");
  if (T < 0) throw ContractViolation("local_solve_sgd: negative step count");
  const auto n = static_cast<std::size_t>(view.size());
  const Eigen::VectorXd eta_g = sub.eta * sub.global_grad;
  Eigen::VectorXd w = sub.anchor;
  Eigen::VectorXd g(w.size());
  Eigen::VectorXd dir(w.size());
  for (Index s = 0; s < T; ++s) {
    const auto k = static_cast<Index>(rng.next_index(n));
    const double alpha = step_size(schedule, s, t);
    loss.grad(view.x(k), view.y(k), w, g);
    dir = (g - sub.local_grad) + eta_g;
    if (sub.mu != 0.0) dir += sub.mu * (w - sub.anchor);
    w -= alpha * dir;
  }
  if (grad_counter) *grad_counter += static_cast<std::uint64_t>(T);
  return w;
}

Eigen::VectorXd local_solve_svrg(const SubproblemSpec& sub, const Loss& loss,
                                 const DataView& view, Index T, double alpha, Rng& rng,
                                 std::uint64_t* grad_counter) {
  if (view.size() == 0) throw ContractViolation("local_solve_svrg: empty view");
  if (T < 0) throw ContractViolation("local_solve_svrg: negative step count");
  const auto n = static_cast<std::size_t>(view.size());
  const Eigen::VectorXd eta_g = sub.eta * sub.global_grad;
  Eigen::VectorXd w = sub.anchor;
  Eigen::VectorXd g_cur(w.size());
  Eigen::VectorXd g_anchor(w.size());
  Eigen::VectorXd dir(w.size());
  for (Index s = 0; s < T; ++s) {
    const auto k = static_cast<Index>(rng.next_index(n));
    loss.grad(view.x(k), view.y(k), w, g_cur);
    loss.grad(view.x(k), view.y(k), sub.anchor, g_anchor);
    dir = (g_cur - g_anchor) + eta_g;
    if (sub.mu != 0.0) dir += sub.mu * (w - sub.anchor);
    w -= alpha * dir;
  }
  if (grad_counter) *grad_counter += 2 * static_cast<std::uint64_t>(T);
  return w;
}

Trace ideal_dist_sgd(const Trace& trace, int machines) {
  if (machines < 1) throw ContractViolation("ideal_dist_sgd: machines must be >= 1");
  Trace out = trace;
  out.algorithm = Algorithm::kIdealDistSgd;
  for (TracePoint& p : out.points)
    p.max_grads_per_machine /= static_cast<double>(machines);
  return out;
}

}  // namespace dane
