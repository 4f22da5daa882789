#include "objective.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>
#include <string>

#include "errors.hpp"

namespace dane {

namespace {
constexpr Index kDenseSolveLimit = 2000;
constexpr double kSolveTol = 1e-10;
}  // namespace

Eigen::MatrixXd Loss::hessian(const DataView&) const {
  throw UnsupportedError("Loss::hessian: loss is not quadratic");
}

Eigen::VectorXd Loss::hessian_apply(const DataView&, const ConstVecRef&) const {
  throw UnsupportedError("Loss::hessian_apply: loss is not quadratic");
}

RidgeLoss::RidgeLoss(double reg) : reg_(reg) {
  if (!(reg >= 0.0) || !std::isfinite(reg))
    throw ConfigError("RidgeLoss.reg: must be finite and >= 0");
}

double RidgeLoss::value(const ConstVecRef& x, double y, const ConstVecRef& w) const {
  if (x.size() != w.size()) throw ContractViolation("RidgeLoss::value: dimension mismatch");
  const double r = x.dot(w) - y;
  return r * r + reg_ * w.squaredNorm();
}

void RidgeLoss::grad(const ConstVecRef& x, double y, const ConstVecRef& w,
                     Eigen::VectorXd& out) const {
  if (x.size() != w.size()) throw ContractViolation("RidgeLoss::grad: dimension mismatch");
  const double r = x.dot(w) - y;
  out = (2.0 * r) * x + (2.0 * reg_) * w;
}

Eigen::MatrixXd RidgeLoss::hessian(const DataView& view) const {
  if (view.size() == 0) throw ContractViolation("RidgeLoss::hessian: empty view");
  const Index d = view.dataset().dim();
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(d, d);
  for (Index k = 0; k < view.size(); ++k) {
    const auto xk = view.x(k);
    H.selfadjointView<Eigen::Lower>().rankUpdate(xk, 1.0);
  }
  H.triangularView<Eigen::StrictlyUpper>() = H.transpose().triangularView<Eigen::StrictlyUpper>();
  H *= 2.0 / static_cast<double>(view.size());
  H.diagonal().array() += 2.0 * reg_;
  return H;
}

Eigen::VectorXd RidgeLoss::hessian_apply(const DataView& view, const ConstVecRef& v) const {
  if (view.size() == 0) throw ContractViolation("RidgeLoss::hessian_apply: empty view");
  if (v.size() != view.dataset().dim())
    throw ContractViolation("RidgeLoss::hessian_apply: dimension mismatch");
  Eigen::VectorXd out = Eigen::VectorXd::Zero(v.size());
  for (Index k = 0; k < view.size(); ++k) {
    const auto xk = view.x(k);
    out += xk * xk.dot(v);
  }
  out *= 2.0 / static_cast<double>(view.size());
  out += (2.0 * reg_) * v;
  return out;
}

double loss_sample(const Loss& loss, const ConstVecRef& w, const Example& z) {
  return loss.value(z.x, z.y, w);
}

Eigen::VectorXd grad_sample(const Loss& loss, const ConstVecRef& w, const Example& z) {
  Eigen::VectorXd g;
  loss.grad(z.x, z.y, w, g);
  return g;
}

double empirical_risk(const Loss& loss, const DataView& view, const ConstVecRef& w) {
  if (view.size() == 0) throw ContractViolation("empirical_risk: empty view");
  double acc = 0.0;
  for (Index k = 0; k < view.size(); ++k) acc += loss.value(view.x(k), view.y(k), w);
  return acc / static_cast<double>(view.size());
}

double empirical_risk(const Loss& loss, const Dataset& data, const ConstVecRef& w) {
  return empirical_risk(loss, DataView::whole(data), w);
}

Eigen::VectorXd full_grad(const Loss& loss, const DataView& view, const ConstVecRef& w,
                          std::uint64_t* grad_counter) {
  if (view.size() == 0) throw ContractViolation("full_grad: empty view");
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(w.size());
  Eigen::VectorXd g(w.size());
  for (Index k = 0; k < view.size(); ++k) {
    loss.grad(view.x(k), view.y(k), w, g);
    acc += g;
  }
  acc /= static_cast<double>(view.size());
  if (grad_counter) *grad_counter += static_cast<std::uint64_t>(view.size());
  return acc;
}

SubproblemSpec build_subproblem(Eigen::VectorXd anchor, Eigen::VectorXd local_grad,
                                Eigen::VectorXd global_grad, double eta, double mu) {
  const Index d = anchor.size();
  if (local_grad.size() != d || global_grad.size() != d)
    throw ContractViolation("build_subproblem: gradient dimensions must match the anchor");
  if (!(eta > 0.0) || !std::isfinite(eta))
    throw ConfigError("SubproblemSpec.eta: must be finite and > 0");
  if (!(mu >= 0.0) || !std::isfinite(mu))
    throw ConfigError("SubproblemSpec.mu: must be finite and >= 0");
  return SubproblemSpec{std::move(anchor), std::move(local_grad), std::move(global_grad),
                        eta, mu};
}

double subproblem_value_sample(const SubproblemSpec& sub, const Loss& loss,
                               const ConstVecRef& w, const ConstVecRef& x, double y) {
  double v = loss.value(x, y, w);
  v -= (sub.local_grad - sub.eta * sub.global_grad).dot(w);
  if (sub.mu != 0.0) v += 0.5 * sub.mu * (w - sub.anchor).squaredNorm();
  return v;
}

Eigen::VectorXd subproblem_grad_sample(const SubproblemSpec& sub, const Loss& loss,
                                       const ConstVecRef& w, const ConstVecRef& x, double y) {
  Eigen::VectorXd g;
  loss.grad(x, y, w, g);
  g = (g - sub.local_grad) + sub.eta * sub.global_grad;
  if (sub.mu != 0.0) g += sub.mu * (w - sub.anchor);
  return g;
}

Eigen::VectorXd subproblem_grad(const SubproblemSpec& sub, const Loss& loss,
                                const DataView& view, const ConstVecRef& w) {
  Eigen::VectorXd g = full_grad(loss, view, w, nullptr);
  g = (g - sub.local_grad) + sub.eta * sub.global_grad;
  if (sub.mu != 0.0) g += sub.mu * (w - sub.anchor);
  return g;
}

namespace {

// Conjugate gradients on (H + mu*I) w = rhs with H applied matrix-free.
Eigen::VectorXd cg_solve(const SubproblemSpec& sub, const Loss& loss, const DataView& view,
                         const Eigen::VectorXd& rhs) {
  const Index d = rhs.size();
  Eigen::VectorXd w = Eigen::VectorXd::Zero(d);
  Eigen::VectorXd r = rhs;
  Eigen::VectorXd p = r;
  const double rhs_norm = rhs.norm();
  if (rhs_norm == 0.0) return w;
  double rr = r.squaredNorm();
  const Index max_iter = 20 * d;
  for (Index it = 0; it < max_iter; ++it) {
    if (std::sqrt(rr) <= kSolveTol * rhs_norm) return w;
    Eigen::VectorXd Hp = loss.hessian_apply(view, p);
    if (sub.mu != 0.0) Hp += sub.mu * p;
    const double pHp = p.dot(Hp);
    if (!(pHp > 0.0))
      throw NumericError(
          "exact local solve: system is not positive definite; increase mu");
    const double alpha = rr / pHp;
    w += alpha * p;
    r -= alpha * Hp;
    const double rr_next = r.squaredNorm();
    p = r + (rr_next / rr) * p;
    rr = rr_next;
  }
  throw NumericError("exact local solve: conjugate gradients failed to reach tolerance " +
                     std::to_string(kSolveTol) + "; increase mu or check conditioning");
}

}  // namespace

Eigen::VectorXd exact_minimize(const SubproblemSpec& sub, const Loss& loss,
                               const DataView& view, std::uint64_t* grad_counter,
                               std::uint64_t* solve_events) {
  if (!loss.quadratic())
    throw UnsupportedError("exact_minimize: direct solve requires a quadratic loss");
  if (view.size() == 0) throw ContractViolation("exact_minimize: empty view");
  const Index d = sub.anchor.size();
  if (view.dataset().dim() != d)
    throw ContractViolation("exact_minimize: view dimension does not match the anchor");

  // Stationarity of h:  (H + mu*I) w = -grad phi_i(0) + (G_i - eta*G) + mu*anchor.
  Eigen::VectorXd rhs = -full_grad(loss, view, Eigen::VectorXd::Zero(d), nullptr);
  rhs += sub.local_grad - sub.eta * sub.global_grad;
  if (sub.mu != 0.0) rhs += sub.mu * sub.anchor;

  Eigen::VectorXd w;
  if (d <= kDenseSolveLimit) {
    Eigen::MatrixXd H = loss.hessian(view);
    if (sub.mu != 0.0) H.diagonal().array() += sub.mu;
    Eigen::LLT<Eigen::MatrixXd> llt(H);
    if (llt.info() != Eigen::Success)
      throw NumericError(
          "exact local solve: Cholesky factorization failed (system is singular or "
          "indefinite); increase mu");
    w = llt.solve(rhs);
    w += llt.solve(rhs - H * w);  // one refinement pass
    const double rel = (H * w - rhs).norm() / std::max(rhs.norm(), 1e-300);
    if (!(rel <= kSolveTol))
      throw NumericError("exact local solve: residual " + std::to_string(rel) +
                         " exceeds tolerance; increase mu or check conditioning");
  } else {
    w = cg_solve(sub, loss, view, rhs);
  }

  if (grad_counter) *grad_counter += static_cast<std::uint64_t>(view.size());
  if (solve_events) *solve_events += 1;
  return w;
}

double hessian_condition_estimate(const Loss& loss, const DataView& view) {
  const Eigen::MatrixXd H = loss.hessian(view);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  if (!(lo > 0.0)) return std::numeric_limits<double>::infinity();
  return hi / lo;
}

}  // namespace dane
