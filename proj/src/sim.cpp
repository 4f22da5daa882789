#include "sim.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <thread>

#include "errors.hpp"
#include "rng.hpp"
#include "solvers.hpp"

namespace dane {

std::string access_mode_name(AccessMode mode) {
  switch (mode) {
    case AccessMode::kFull: return "Full";
    case AccessMode::kFixedSubset: return "FixedSubset";
    case AccessMode::kSubsampledGradient: return "SubsampledGradient";
  }
  throw ContractViolation("access_mode_name: unknown access mode");
}

AccessMode parse_access_mode(const std::string& name) {
  if (name == "Full") return AccessMode::kFull;
  if (name == "FixedSubset") return AccessMode::kFixedSubset;
  if (name == "SubsampledGradient") return AccessMode::kSubsampledGradient;
  throw ConfigError("access_mode: unknown value '" + name +
                    "' (expected Full, FixedSubset or SubsampledGradient)");
}

void RunConfig::validate(Index n_total) const {
  if (machines < 1) throw ConfigError("machines: must be >= 1");
  if (n_total < 1 || n_total % machines != 0)
    throw ConfigError("machines: must divide the number of examples (" +
                      std::to_string(n_total) + " % " + std::to_string(machines) + " != 0)");
  if (rounds < 1) throw ConfigError("rounds: must be >= 1");
  if (!(eta > 0.0) || !std::isfinite(eta)) throw ConfigError("eta: must be finite and > 0");
  if (!(mu >= 0.0) || !std::isfinite(mu)) throw ConfigError("mu: must be finite and >= 0");
  if (threads < 1) throw ConfigError("threads: must be >= 1");

  const bool stochastic = algorithm != Algorithm::kDaneExact;
  if (stochastic && inner_steps < 1) throw ConfigError("T: must be >= 1");
  if (algorithm == Algorithm::kDaneSvrg && !(svrg_alpha > 0.0 && std::isfinite(svrg_alpha)))
    throw ConfigError("svrg_alpha: must be finite and > 0");

  if (access_mode != AccessMode::kFull) {
    if (algorithm != Algorithm::kDaneExact && algorithm != Algorithm::kDaneSgd &&
        algorithm != Algorithm::kDaneSvrg)
      throw ConfigError("access_mode: " + access_mode_name(access_mode) +
                        " applies only to DANE algorithms");
    if (!(access_fraction > 0.0 && access_fraction <= 1.0))
      throw ConfigError("access_fraction: must lie in (0,1]");
    const Index shard_n = n_total / machines;
    if (static_cast<Index>(std::floor(access_fraction * static_cast<double>(shard_n))) < 1)
      throw ConfigError("access_fraction: selects no examples on shards of size " +
                        std::to_string(shard_n));
    if (algorithm == Algorithm::kDaneExact && access_mode == AccessMode::kFixedSubset)
      throw ConfigError(
          "access_mode: unsupported combination, the exact local solver requires "
          "Full or SubsampledGradient access");
  }
}

namespace {

/* Runs fn(0..m-1), possibly on several threads.  Machine work only reads
 * shared state and writes its own slots, so scheduling cannot change any
 * result.  Exceptions are collected and the lowest machine id wins, which
 * keeps failure reports deterministic too. */
void for_each_machine(int threads, int m, const std::function<void(int)>& fn) {
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(m));
  if (threads <= 1 || m <= 1) {
    for (int i = 0; i < m; ++i) {
      try {
        fn(i);
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
        break;  // remaining machines are moot, the run is abandoned
      }
    }
  } else {
    std::atomic<int> next{0};
    auto worker = [&] {
      for (int i = next.fetch_add(1); i < m; i = next.fetch_add(1)) {
        try {
          fn(i);
        } catch (...) {
          errors[static_cast<std::size_t>(i)] = std::current_exception();
        }
      }
    };
    std::vector<std::thread> pool;
    const int count = std::min(threads, m);
    pool.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();
  }
  for (const std::exception_ptr& e : errors)
    if (e) std::rethrow_exception(e);
}

struct Recorder {
  const EvalContext* ctx;
  Trace* trace;
  const CostLedger* ledger;
  std::vector<Eigen::VectorXd>* iterates;

  void operator()(int round, const Eigen::VectorXd& w) const {
    TracePoint p;
    p.round = round;
    p.max_grads_per_machine = static_cast<double>(ledger->max_grads());
    p.comm_rounds = ledger->comm_rounds;
    p.floats_communicated = ledger->floats_communicated;
    p.train_subopt = suboptimality(*ctx, w);
    if (p.train_subopt < kSuboptSlack)
      throw NumericError("round " + std::to_string(round) +
                         ": suboptimality fell below the numerical floor, the reference "
                         "optimum is inconsistent");
    p.log10_subopt = log10_suboptimality(p.train_subopt);
    p.pop_error = population_error(*ctx, w);
    trace->points.push_back(p);
    iterates->push_back(w);
  }
};

// Mean of the machine iterates, accumulated in machine order.
Eigen::VectorXd average_in_order(const std::vector<Eigen::VectorXd>& locals) {
  Eigen::VectorXd acc = locals.front();
  for (std::size_t i = 1; i < locals.size(); ++i) acc += locals[i];
  acc /= static_cast<double>(locals.size());
  return acc;
}

RunOutput run_single_sgd(const RunConfig& cfg, const Dataset& data, const Loss& loss,
                         const EvalContext& ctx) {
  RunOutput out;
  out.trace.algorithm = Algorithm::kSgd;
  out.ledger.grads_per_machine.assign(1, 0);
  Recorder record{&ctx, &out.trace, &out.ledger, &out.iterates};

  const DataView view = DataView::whole(data);
  Eigen::VectorXd w = Eigen::VectorXd::Zero(data.dim());
  record(0, w);
  for (int t = 1; t <= cfg.rounds; ++t) {
    Rng rng = Rng::stream(cfg.seed, Rng::Purpose::kLocalStep, 0,
                          static_cast<std::uint64_t>(t));
    const std::int64_t k0 = static_cast<std::int64_t>(t - 1) * cfg.inner_steps;
    w = sgd_run(loss, view, cfg.schedule, cfg.inner_steps, w, rng, k0, t,
                &out.ledger.grads_per_machine[0]);
    if (!w.allFinite())
      throw NumericError("round " + std::to_string(t) +
                         ", machine 0: iterate diverged (non-finite values); reduce "
                         "the step size");
    record(t, w);
  }
  return out;
}

RunOutput run_dist_sgd(const RunConfig& cfg, const Dataset& data,
                       const std::vector<Shard>& shards, const Loss& loss,
                       const EvalContext& ctx) {
  const int m = cfg.machines;
  const Index d = data.dim();
  RunOutput out;
  out.trace.algorithm = Algorithm::kDistSgd;
  out.ledger.grads_per_machine.assign(static_cast<std::size_t>(m), 0);
  Recorder record{&ctx, &out.trace, &out.ledger, &out.iterates};

  std::vector<DataView> views;
  views.reserve(static_cast<std::size_t>(m));
  for (const Shard& s : shards) views.emplace_back(data, s.indices);

  Eigen::VectorXd w = Eigen::VectorXd::Zero(d);
  std::vector<Eigen::VectorXd> locals(static_cast<std::size_t>(m));
  record(0, w);
  for (int t = 1; t <= cfg.rounds; ++t) {
    for_each_machine(cfg.threads, m, [&](int i) {
      const auto ui = static_cast<std::size_t>(i);
      Rng rng = Rng::stream(cfg.seed, Rng::Purpose::kLocalStep,
                            static_cast<std::uint64_t>(shards[ui].machine_id),
                            static_cast<std::uint64_t>(t));
      const std::int64_t k0 = static_cast<std::int64_t>(t - 1) * cfg.inner_steps;
      locals[ui] = sgd_run(loss, views[ui], cfg.schedule, cfg.inner_steps, w, rng, k0, t,
                           &out.ledger.grads_per_machine[ui]);
      if (!locals[ui].allFinite())
        throw NumericError("round " + std::to_string(t) + ", machine " +
                           std::to_string(shards[ui].machine_id) +
                           ": iterate diverged (non-finite values); reduce the step size");
    });
    w = average_in_order(locals);
    out.ledger.comm_rounds += 1;
    out.ledger.floats_communicated +=
        2ull * static_cast<std::uint64_t>(m) * static_cast<std::uint64_t>(d);
    record(t, w);
  }
  return out;
}

RunOutput run_dane(const RunConfig& cfg, const Dataset& data,
                   const std::vector<Shard>& shards, const Loss& loss,
                   const EvalContext& ctx) {
  const int m = cfg.machines;
  const Index d = data.dim();
  RunOutput out;
  out.trace.algorithm = cfg.algorithm;
  out.ledger.grads_per_machine.assign(static_cast<std::size_t>(m), 0);
  std::vector<std::uint64_t> solve_events(static_cast<std::size_t>(m), 0);
  Recorder record{&ctx, &out.trace, &out.ledger, &out.iterates};

  std::vector<DataView> shard_views;
  shard_views.reserve(static_cast<std::size_t>(m));
  for (const Shard& s : shards) shard_views.emplace_back(data, s.indices);

  const std::uint64_t floats_per_comm =
      2ull * static_cast<std::uint64_t>(m) * static_cast<std::uint64_t>(d);

  Eigen::VectorXd w = Eigen::VectorXd::Zero(d);
  std::vector<Eigen::VectorXd> local_grads(static_cast<std::size_t>(m));
  std::vector<Eigen::VectorXd> locals(static_cast<std::size_t>(m));
  std::vector<std::vector<Index>> subsets(static_cast<std::size_t>(m));

  record(0, w);
  double prev_subopt = out.trace.points.back().train_subopt;

  for (int t = 1; t <= cfg.rounds; ++t) {
    // Gradient phase.  Limited access modes compute G_i on a per-round
    // subset; the fixed-subset mode reuses that subset for the inner steps.
    for_each_machine(cfg.threads, m, [&](int i) {
      const auto ui = static_cast<std::size_t>(i);
      if (cfg.access_mode != AccessMode::kFull)
        subsets[ui] = sample_subset(shards[ui], cfg.access_fraction, cfg.seed, t);
      const DataView gview = cfg.access_mode == AccessMode::kFull
                                 ? shard_views[ui]
                                 : DataView(data, subsets[ui]);
      local_grads[ui] = full_grad(loss, gview, w, &out.ledger.grads_per_machine[ui]);
    });
    const Eigen::VectorXd global_grad = average_in_order(local_grads);
    out.ledger.comm_rounds += 1;
    out.ledger.floats_communicated += floats_per_comm;

    // Local phase.
    for_each_machine(cfg.threads, m, [&](int i) {
      const auto ui = static_cast<std::size_t>(i);
      const DataView lview = cfg.access_mode == AccessMode::kFixedSubset
                                 ? DataView(data, subsets[ui])
                                 : shard_views[ui];
      SubproblemSpec sub =
          build_subproblem(w, local_grads[ui], global_grad, cfg.eta, cfg.mu);
      try {
        switch (cfg.algorithm) {
          case Algorithm::kDaneExact:
            locals[ui] = exact_minimize(sub, loss, lview,
                                        &out.ledger.grads_per_machine[ui],
                                        &solve_events[ui]);
            break;
          case Algorithm::kDaneSgd: {
            Rng rng = Rng::stream(cfg.seed, Rng::Purpose::kLocalStep,
                                  static_cast<std::uint64_t>(shards[ui].machine_id),
                                  static_cast<std::uint64_t>(t));
            locals[ui] = local_solve_sgd(sub, loss, lview, cfg.inner_steps, cfg.schedule,
                                         rng, t, &out.ledger.grads_per_machine[ui]);
            break;
          }
          case Algorithm::kDaneSvrg: {
            Rng rng = Rng::stream(cfg.seed, Rng::Purpose::kLocalStep,
                                  static_cast<std::uint64_t>(shards[ui].machine_id),
                                  static_cast<std::uint64_t>(t));
            locals[ui] = local_solve_svrg(sub, loss, lview, cfg.inner_steps, cfg.svrg_alpha,
                                          rng, &out.ledger.grads_per_machine[ui]);
            break;
          }
          default:
            throw ContractViolation("run_dane: not a DANE algorithm");
        }
      } catch (const NumericError& e) {
        throw NumericError("round " + std::to_string(t) + ", machine " +
                           std::to_string(shards[ui].machine_id) + ": " + e.what());
      }
      if (!locals[ui].allFinite())
        throw NumericError("round " + std::to_string(t) + ", machine " +
                           std::to_string(shards[ui].machine_id) +
                           ": local iterate diverged (non-finite values)");
    });
    w = average_in_order(locals);
    out.ledger.comm_rounds += 1;
    out.ledger.floats_communicated += floats_per_comm;

    record(t, w);
    const double subopt = out.trace.points.back().train_subopt;
    if (cfg.algorithm == Algorithm::kDaneExact && subopt > prev_subopt + 1e-9)
      throw NumericError("round " + std::to_string(t) +
                         ": exact local solves must not increase the objective "
                         "(suboptimality rose from " +
                         std::to_string(prev_subopt) + " to " + std::to_string(subopt) + ")");
    prev_subopt = subopt;
  }

  for (std::uint64_t e : solve_events) out.ledger.exact_solve_events += e;
  return out;
}

}  // namespace

RunOutput run(const RunConfig& cfg, const Dataset& data, const std::vector<Shard>& shards,
              const Loss& loss, const EvalContext& ctx) {
  cfg.validate(data.size());
  if (cfg.algorithm != Algorithm::kSgd && cfg.algorithm != Algorithm::kIdealDistSgd &&
      static_cast<int>(shards.size()) != cfg.machines)
    throw ContractViolation("run: shard count does not match the machine count");

  switch (cfg.algorithm) {
    case Algorithm::kSgd:
      return run_single_sgd(cfg, data, loss, ctx);
    case Algorithm::kIdealDistSgd: {
      RunOutput out = run_single_sgd(cfg, data, loss, ctx);
      out.trace = ideal_dist_sgd(out.trace, cfg.machines);
      return out;
    }
    case Algorithm::kDistSgd:
      return run_dist_sgd(cfg, data, shards, loss, ctx);
    case Algorithm::kDaneExact:
    case Algorithm::kDaneSgd:
    case Algorithm::kDaneSvrg:
      return run_dane(cfg, data, shards, loss, ctx);
  }
  throw ContractViolation("run: unknown algorithm");
}

}  // namespace dane
