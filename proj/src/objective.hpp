#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "data.hpp"

namespace dane {

using ConstVecRef = Eigen::Ref<const Eigen::VectorXd>;

/* Per-sample loss f(w, z) with z = (x, y).  The local objective on a view of
 * n examples is phi(w) = (1/n) sum_z f(w, z); any regularizer is folded into
 * the per-sample term.  Quadratic losses additionally expose their curvature
 * so local subproblems can be minimized directly. */
class Loss {
 public:
  virtual ~Loss() = default;

  virtual double value(const ConstVecRef& x, double y, const ConstVecRef& w) const = 0;
  virtual void grad(const ConstVecRef& x, double y, const ConstVecRef& w,
                    Eigen::VectorXd& out) const = 0;
  virtual bool quadratic() const = 0;

  // Hessian of phi over the view (constant in w for quadratic losses).
  // Default implementations reject non-quadratic losses.
  virtual Eigen::MatrixXd hessian(const DataView& view) const;
  virtual Eigen::VectorXd hessian_apply(const DataView& view, const ConstVecRef& v) const;
};

// f(w, z) = (<x,w> - y)^2 + reg * |w|^2
class RidgeLoss final : public Loss {
 public:
  explicit RidgeLoss(double reg);
  double reg() const { return reg_; }

  double value(const ConstVecRef& x, double y, const ConstVecRef& w) const override;
  void grad(const ConstVecRef& x, double y, const ConstVecRef& w,
            Eigen::VectorXd& out) const override;
  bool quadratic() const override { return true; }
  Eigen::MatrixXd hessian(const DataView& view) const override;
  Eigen::VectorXd hessian_apply(const DataView& view, const ConstVecRef& v) const override;

 private:
  double reg_;
};

double loss_sample(const Loss& loss, const ConstVecRef& w, const Example& z);
Eigen::VectorXd grad_sample(const Loss& loss, const ConstVecRef& w, const Example& z);

// Mean loss over a view / whole dataset.  Metric-side helper: never metered.
double empirical_risk(const Loss& loss, const DataView& view, const ConstVecRef& w);
double empirical_risk(const Loss& loss, const Dataset& data, const ConstVecRef& w);

// Mean gradient over a view.  When grad_counter is given it is advanced by
// the number of per-sample gradient evaluations (view.size()).
Eigen::VectorXd full_grad(const Loss& loss, const DataView& view, const ConstVecRef& w,
                          std::uint64_t* grad_counter = nullptr);

/* Local model for one machine and one round:
 *   h(w) = phi_i(w) - (G_i - eta*G)' w + (mu/2) |w - anchor|^2
 * where G_i is the machine's gradient at the anchor and G the global mean
 * gradient.  By construction grad h(anchor) = eta*G. */
struct SubproblemSpec {
  Eigen::VectorXd anchor;
  Eigen::VectorXd local_grad;   // G_i
  Eigen::VectorXd global_grad;  // G
  double eta = 1.0;
  double mu = 0.0;
};

SubproblemSpec build_subproblem(Eigen::VectorXd anchor, Eigen::VectorXd local_grad,
                                Eigen::VectorXd global_grad, double eta, double mu);

// Per-sample value/gradient of the local model, with phi_i replaced by f(.,z):
//   f*(w,z)      = f(w,z) - (G_i - eta*G)' w + (mu/2) |w - anchor|^2
//   grad f*(w,z) = grad f(w,z) - G_i + eta*G + mu*(w - anchor)
double subproblem_value_sample(const SubproblemSpec& sub, const Loss& loss,
                               const ConstVecRef& w, const ConstVecRef& x, double y);
Eigen::VectorXd subproblem_grad_sample(const SubproblemSpec& sub, const Loss& loss,
                                       const ConstVecRef& w, const ConstVecRef& x, double y);

// Analytic grad h(w) over a view (exact mean, unmetered).
Eigen::VectorXd subproblem_grad(const SubproblemSpec& sub, const Loss& loss,
                                const DataView& view, const ConstVecRef& w);

/* Direct minimizer of h over the view.  Solves
 *   (H + mu*I) w = -grad phi_i(0) + (G_i - eta*G) + mu*anchor
 * with H the view Hessian; dense Cholesky for d <= 2000, conjugate gradients
 * above.  Relative residual tolerance 1e-10, one refinement pass.  Charges
 * view.size() gradient-equivalent evaluations plus one solve event. */
Eigen::VectorXd exact_minimize(const SubproblemSpec& sub, const Loss& loss,
                               const DataView& view, std::uint64_t* grad_counter = nullptr,
                               std::uint64_t* solve_events = nullptr);

// Diagnostic only: lambda_max / lambda_min of the view Hessian.
double hessian_condition_estimate(const Loss& loss, const DataView& view);

}  // namespace dane
