#include "danebench.h"

#include <cstring>
#include <new>
#include <string>

#include "config.hpp"
#include "csvio.hpp"
#include "errors.hpp"
#include "experiment.hpp"
#include "metrics.hpp"
#include "objective.hpp"
#include "sim.hpp"

using dane::ConfigError;
using dane::NumericError;

struct db_config {
  dane::ExperimentConfig cfg;
};

struct db_result {
  dane::Trace trace;
  dane::CostLedger ledger;
  bool has_ledger = false;
  std::string algorithm;
};

namespace {

thread_local std::string g_last_error = "ok";

db_status fail(db_status status, const char* message) {
  g_last_error = message;
  return status;
}

// Runs fn, translating exceptions into status codes + db_last_error().
template <typename Fn>
db_status guarded(Fn&& fn) {
  try {
    fn();
    return DB_OK;
  } catch (const ConfigError& e) {
    return fail(DB_ERROR_CONFIG, e.what());
  } catch (const dane::UnsupportedError& e) {
    return fail(DB_ERROR_CONFIG, e.what());
  } catch (const NumericError& e) {
    return fail(DB_ERROR_NUMERIC, e.what());
  } catch (const dane::ContractViolation& e) {
    return fail(DB_ERROR_USAGE, e.what());
  } catch (const std::bad_alloc&) {
    return fail(DB_ERROR_IO, "out of memory");
  } catch (const std::exception& e) {
    return fail(DB_ERROR_IO, e.what());
  }
}

db_status copy_out(const std::string& value, char* buf, size_t buf_len) {
  if (buf == nullptr || buf_len == 0)
    return fail(DB_ERROR_USAGE, "output buffer is null or empty");
  if (value.size() + 1 > buf_len) {
    g_last_error = "output buffer too small, need " + std::to_string(value.size() + 1) +
                   " bytes";
    return DB_ERROR_USAGE;
  }
  std::memcpy(buf, value.c_str(), value.size() + 1);
  return DB_OK;
}

}  // namespace

extern "C" {

const char* db_version(void) { return dane::kToolVersion; }

const char* db_last_error(void) { return g_last_error.c_str(); }

db_config* db_config_new(void) { return new (std::nothrow) db_config(); }

db_config* db_config_load(const char* path) {
  if (path == nullptr) {
    fail(DB_ERROR_USAGE, "path is null");
    return nullptr;
  }
  db_config* out = nullptr;
  const db_status st = guarded([&] {
    auto* handle = new db_config();
    try {
      handle->cfg = dane::ExperimentConfig::from_file(path);
    } catch (...) {
      delete handle;
      throw;
    }
    out = handle;
  });
  return st == DB_OK ? out : nullptr;
}

db_config* db_config_clone(const db_config* cfg) {
  if (cfg == nullptr) {
    fail(DB_ERROR_USAGE, "config handle is null");
    return nullptr;
  }
  return new (std::nothrow) db_config(*cfg);
}

void db_config_free(db_config* cfg) { delete cfg; }

db_status db_config_set(db_config* cfg, const char* key, const char* value) {
  if (cfg == nullptr || key == nullptr || value == nullptr)
    return fail(DB_ERROR_USAGE, "config handle, key and value must be non-null");
  return guarded([&] { cfg->cfg.set(key, value); });
}

db_status db_config_get(const db_config* cfg, const char* key, char* buf, size_t buf_len) {
  if (cfg == nullptr || key == nullptr)
    return fail(DB_ERROR_USAGE, "config handle and key must be non-null");
  std::string value;
  const db_status st = guarded([&] { value = cfg->cfg.get(key); });
  if (st != DB_OK) return st;
  return copy_out(value, buf, buf_len);
}

db_status db_config_apply_env(db_config* cfg) {
  if (cfg == nullptr) return fail(DB_ERROR_USAGE, "config handle is null");
  return guarded([&] { cfg->cfg.apply_env(); });
}

db_status db_config_validate(const db_config* cfg) {
  if (cfg == nullptr) return fail(DB_ERROR_USAGE, "config handle is null");
  return guarded([&] { (void)cfg->cfg.resolve(); });
}

int db_config_run_count(const db_config* cfg) {
  if (cfg == nullptr) {
    fail(DB_ERROR_USAGE, "config handle is null");
    return -1;
  }
  int count = -1;
  const db_status st =
      guarded([&] { count = static_cast<int>(cfg->cfg.resolve().runs.size()); });
  return st == DB_OK ? count : -1;
}

db_status db_config_run_name(const db_config* cfg, int index, char* buf, size_t buf_len) {
  if (cfg == nullptr) return fail(DB_ERROR_USAGE, "config handle is null");
  std::string name;
  const db_status st = guarded([&] {
    const auto resolved = cfg->cfg.resolve();
    if (index < 0 || static_cast<size_t>(index) >= resolved.runs.size())
      throw dane::ContractViolation("run index out of range");
    name = resolved.runs[static_cast<size_t>(index)].name;
  });
  if (st != DB_OK) return st;
  return copy_out(name, buf, buf_len);
}

char* db_config_manifest_json(const db_config* cfg) {
  if (cfg == nullptr) {
    fail(DB_ERROR_USAGE, "config handle is null");
    return nullptr;
  }
  char* out = nullptr;
  const db_status st = guarded([&] {
    const std::string json = cfg->cfg.manifest_json();
    out = new char[json.size() + 1];
    std::memcpy(out, json.c_str(), json.size() + 1);
  });
  return st == DB_OK ? out : nullptr;
}

void db_string_free(char* s) { delete[] s; }

db_status db_execute(const db_config* cfg, const char* run_name, db_result** out) {
  if (cfg == nullptr || run_name == nullptr || out == nullptr)
    return fail(DB_ERROR_USAGE, "config handle, run name and output must be non-null");
  *out = nullptr;
  return guarded([&] {
    const dane::ResolvedExperiment exp = cfg->cfg.resolve();
    const dane::ResolvedRun* run = nullptr;
    for (const auto& rr : exp.runs)
      if (rr.name == run_name) run = &rr;
    if (run == nullptr)
      throw ConfigError("config: no run named '" + std::string(run_name) + "'");
    const auto prob = dane::prepare_problem(exp);
    dane::RunOutput result = dane::execute_run(*prob, exp, *run);
    auto* handle = new db_result();
    handle->trace = std::move(result.trace);
    handle->ledger = std::move(result.ledger);
    handle->has_ledger = true;
    handle->algorithm = dane::algorithm_name(handle->trace.algorithm);
    *out = handle;
  });
}

db_status db_condition_estimate(const db_config* cfg, double* out) {
  if (cfg == nullptr || out == nullptr)
    return fail(DB_ERROR_USAGE, "config handle and output must be non-null");
  return guarded([&] {
    const dane::ResolvedExperiment exp = cfg->cfg.resolve();
    const dane::Dataset data = dane::generate_synthetic(exp.synth);
    const dane::RidgeLoss loss(exp.reg);
    *out = dane::hessian_condition_estimate(loss, dane::DataView::whole(data));
  });
}

db_status db_dataset_write_csv(const db_config* cfg, const char* path) {
  if (cfg == nullptr || path == nullptr)
    return fail(DB_ERROR_USAGE, "config handle and path must be non-null");
  return guarded([&] {
    const dane::ResolvedExperiment exp = cfg->cfg.resolve();
    dane::write_dataset_csv_file(path, dane::generate_synthetic(exp.synth));
  });
}

size_t db_result_trace_size(const db_result* res) {
  return res == nullptr ? 0 : res->trace.points.size();
}

db_status db_result_trace_point(const db_result* res, size_t index, db_trace_point* out) {
  if (res == nullptr || out == nullptr)
    return fail(DB_ERROR_USAGE, "result handle and output must be non-null");
  if (index >= res->trace.points.size())
    return fail(DB_ERROR_USAGE, "trace index out of range");
  const dane::TracePoint& p = res->trace.points[index];
  out->round = p.round;
  out->max_grads_per_machine = p.max_grads_per_machine;
  out->comm_rounds = p.comm_rounds;
  out->floats_communicated = p.floats_communicated;
  out->train_subopt = p.train_subopt;
  out->log10_subopt = p.log10_subopt;
  out->pop_error = p.pop_error;
  return DB_OK;
}

const char* db_result_algorithm(const db_result* res) {
  if (res == nullptr) {
    fail(DB_ERROR_USAGE, "result handle is null");
    return nullptr;
  }
  return res->algorithm.c_str();
}

db_status db_result_cost_summary(const db_result* res, db_cost_summary* out) {
  if (res == nullptr || out == nullptr)
    return fail(DB_ERROR_USAGE, "result handle and output must be non-null");
  if (!res->has_ledger)
    return fail(DB_ERROR_USAGE, "result was parsed from CSV and carries no cost ledger");
  out->max_grads_per_machine = res->ledger.max_grads();
  out->comm_rounds = res->ledger.comm_rounds;
  out->floats_communicated = res->ledger.floats_communicated;
  out->exact_solve_events = res->ledger.exact_solve_events;
  return DB_OK;
}

db_status db_result_rounds_to_target(const db_result* res, double target_log10,
                                     int64_t* out_round) {
  if (res == nullptr || out_round == nullptr)
    return fail(DB_ERROR_USAGE, "result handle and output must be non-null");
  const auto round = dane::rounds_to_target(res->trace, target_log10);
  *out_round = round.has_value() ? static_cast<int64_t>(*round) : -1;
  return DB_OK;
}

db_status db_result_write_csv(const db_result* res, const char* path) {
  if (res == nullptr || path == nullptr)
    return fail(DB_ERROR_USAGE, "result handle and path must be non-null");
  return guarded([&] { dane::write_trace_csv_file(path, res->trace); });
}

void db_result_free(db_result* res) { delete res; }

db_status db_trace_read_csv(const char* path, db_result** out) {
  if (path == nullptr || out == nullptr)
    return fail(DB_ERROR_USAGE, "path and output must be non-null");
  *out = nullptr;
  return guarded([&] {
    auto* handle = new db_result();
    try {
      handle->trace = dane::read_trace_csv_file(path);
      handle->algorithm = dane::algorithm_name(handle->trace.algorithm);
    } catch (...) {
      delete handle;
      throw;
    }
    *out = handle;
  });
}

}  // extern "C"
