#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "data.hpp"
#include "objective.hpp"
#include "rng.hpp"
#include "schedule.hpp"
#include "trace.hpp"

namespace dane {

/* Plain SGD:  w <- w - alpha_k * grad f(w, z_k),  z_k sampled uniformly with
 * replacement from the view.  k starts at k0 and never resets across calls,
 * so callers running round after round keep a global step count.  Charges
 * `steps` gradient evaluations. */
Eigen::VectorXd sgd_run(const Loss& loss, const DataView& view, const Schedule& schedule,
                        Index steps, const Eigen::VectorXd& w0, Rng& rng, std::int64_t k0,
                        int t, std::uint64_t* grad_counter = nullptr);

/* Stochastic local solve of the round subproblem, started at the anchor:
 *   w <- w - alpha_k * (grad f(w,z_k) - G_i + eta*G + mu*(w - anchor))
 * The proximal term uses the current inner iterate.  k resets to 0 every
 * round.  Charges T gradient evaluations. */
Eigen::VectorXd local_solve_sgd(const SubproblemSpec& sub, const Loss& loss,
                                const DataView& view, Index T, const Schedule& schedule,
                                Rng& rng, int t, std::uint64_t* grad_counter = nullptr);

/* Single-stage variance-reduced local solve, anchored at w~ = sub.anchor:
 *   w <- w - alpha * (grad f(w,z_k) - grad f(w~,z_k) + eta*G + mu*(w - w~))
 * Fixed step size; each step evaluates two per-sample gradients, so T steps
 * charge 2*T evaluations.  With eta=1, mu=0 the direction reduces to the
 * classic control-variate form grad f(w,z) - grad f(w~,z) + G. */
Eigen::VectorXd local_solve_svrg(const SubproblemSpec& sub, const Loss& loss,
                                 const DataView& view, Index T, double alpha, Rng& rng,
                                 std::uint64_t* grad_counter = nullptr);

/* Rescales a single-machine SGD trace into the zero-communication ideal:
 * the same iterates with per-machine gradient counts divided by m. */
Trace ideal_dist_sgd(const Trace& trace, int machines);

}  // namespace dane
