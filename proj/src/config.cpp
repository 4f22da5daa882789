#include "config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "errors.hpp"

extern char** environ;

namespace dane {

namespace {

const std::set<std::string> kProblemKeys = {"d",         "n_total",      "machines",
                                            "noise_std", "cov_exponent", "reg",
                                            "seed"};
const std::set<std::string> kEvalKeys = {"holdout_size", "target_log_subopt"};
const std::set<std::string> kRunKeys = {
    "algorithm",    "machines",        "rounds",     "T",
    "eta",          "mu",              "schedule.kind", "schedule.a0",
    "schedule.decay", "schedule.c",    "svrg_alpha", "access_mode",
    "access_fraction", "seed",         "equalize_budget"};

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

double parse_double(const std::string& value, const std::string& key) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || ptr != value.data() + value.size() || !std::isfinite(v))
    throw ConfigError(key + ": expected a finite number, got '" + value + "'");
  return v;
}

std::int64_t parse_int(const std::string& value, const std::string& key) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || ptr != value.data() + value.size())
    throw ConfigError(key + ": expected an integer, got '" + value + "'");
  return v;
}

std::uint64_t parse_u64(const std::string& value, const std::string& key) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || ptr != value.data() + value.size())
    throw ConfigError(key + ": expected a non-negative integer, got '" + value + "'");
  return v;
}

bool parse_bool(const std::string& value, const std::string& key) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw ConfigError(key + ": expected true/false, got '" + value + "'");
}

// run.<name>.<field> -> (name, field); field may itself be dotted.
bool split_run_key(const std::string& key, std::string& name, std::string& field) {
  if (key.rfind("run.", 0) != 0) return false;
  const std::size_t name_end = key.find('.', 4);
  if (name_end == std::string::npos || name_end == 4) return false;
  name = key.substr(4, name_end - 4);
  field = key.substr(name_end + 1);
  return !field.empty();
}

bool valid_run_name(const std::string& name) {
  if (name.empty()) return false;
  return std::all_of(name.begin(), name.end(), [](unsigned char c) {
    return std::isalnum(c) || c == '_' || c == '-';
  });
}

}  // namespace

Index parse_step_count(const std::string& text, Index shard_size, const std::string& key) {
  std::string body = text;
  bool in_units_of_n = false;
  if (!body.empty() && body.back() == 'n') {
    in_units_of_n = true;
    body.pop_back();
    if (body.empty()) body = "1";
  }
  if (in_units_of_n) {
    const double factor = parse_double(body, key);
    if (!(factor > 0.0)) throw ConfigError(key + ": step factor must be > 0");
    const auto steps =
        static_cast<Index>(std::floor(factor * static_cast<double>(shard_size)));
    if (steps < 1)
      throw ConfigError(key + ": '" + text + "' selects no steps on shards of size " +
                        std::to_string(shard_size));
    return steps;
  }
  const std::int64_t steps = parse_int(body, key);
  if (steps < 1) throw ConfigError(key + ": must be >= 1");
  return static_cast<Index>(steps);
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return from_string(text.str());
}

ExperimentConfig ExperimentConfig::from_string(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": expected 'key = value', got '" + stripped + "'");
    cfg.set(trim(stripped.substr(0, eq)), trim(stripped.substr(eq + 1)));
  }
  return cfg;
}

void ExperimentConfig::set(const std::string& key, const std::string& value) {
  bool known = false;
  if (key == "threads") {
    known = true;
  } else if (key.rfind("problem.", 0) == 0) {
    known = kProblemKeys.count(key.substr(8)) > 0;
  } else if (key.rfind("eval.", 0) == 0) {
    known = kEvalKeys.count(key.substr(5)) > 0;
  } else {
    std::string name, field;
    if (split_run_key(key, name, field)) {
      if (!valid_run_name(name))
        throw ConfigError("config: bad run name in key '" + key + "'");
      known = kRunKeys.count(field) > 0;
    }
  }
  if (!known) throw ConfigError("config: unknown key '" + key + "'");

  for (auto& [k, v] : entries_)
    if (k == key) {
      v = value;
      return;
    }
  entries_.emplace_back(key, value);
}

void ExperimentConfig::apply_env() {
  for (char** env = environ; *env != nullptr; ++env) {
    const std::string_view entry(*env);
    if (entry.rfind(kEnvPrefix, 0) != 0) continue;
    const std::size_t eq = entry.find('=');
    if (eq == std::string_view::npos) continue;
    std::string raw(entry.substr(std::string_view(kEnvPrefix).size(),
                                 eq - std::string_view(kEnvPrefix).size()));
    // Double underscore separates key path segments; single ones are kept.
    std::string key;
    for (std::size_t i = 0; i < raw.size(); ++i) {
      if (raw[i] == '_' && i + 1 < raw.size() && raw[i + 1] == '_') {
        key += '.';
        ++i;
      } else {
        key += static_cast<char>(std::tolower(static_cast<unsigned char>(raw[i])));
      }
    }
    set(key, std::string(entry.substr(eq + 1)));
  }
}

const std::string* ExperimentConfig::find(const std::string& key) const {
  for (const auto& [k, v] : entries_)
    if (k == key) return &v;
  return nullptr;
}

ResolvedExperiment ExperimentConfig::resolve() const {
  ResolvedExperiment out;

  // problem block
  out.synth.d = 500;
  out.synth.n_total = 6000;
  out.synth.noise_std = 1.0;
  out.synth.cov_exponent = 1.2;
  out.synth.seed = 42;
  out.machines = 4;
  out.reg = 0.005;
  if (const auto* v = find("problem.d")) {
    const std::int64_t d = parse_int(*v, "problem.d");
    if (d < 1) throw ConfigError("problem.d: must be >= 1");
    out.synth.d = static_cast<Index>(d);
  }
  if (const auto* v = find("problem.n_total")) {
    const std::int64_t n = parse_int(*v, "problem.n_total");
    if (n < 1) throw ConfigError("problem.n_total: must be >= 1");
    out.synth.n_total = static_cast<Index>(n);
  }
  if (const auto* v = find("problem.machines")) {
    const std::int64_t m = parse_int(*v, "problem.machines");
    if (m < 1) throw ConfigError("problem.machines: must be >= 1");
    out.machines = static_cast<int>(m);
  }
  if (const auto* v = find("problem.noise_std")) {
    out.synth.noise_std = parse_double(*v, "problem.noise_std");
    if (out.synth.noise_std < 0.0) throw ConfigError("problem.noise_std: must be >= 0");
  }
  if (const auto* v = find("problem.cov_exponent")) {
    out.synth.cov_exponent = parse_double(*v, "problem.cov_exponent");
    if (out.synth.cov_exponent < 0.0)
      throw ConfigError("problem.cov_exponent: must be >= 0");
  }
  if (const auto* v = find("problem.reg")) {
    out.reg = parse_double(*v, "problem.reg");
    if (out.reg < 0.0) throw ConfigError("problem.reg: must be >= 0");
  }
  if (const auto* v = find("problem.seed")) out.synth.seed = parse_u64(*v, "problem.seed");
  out.synth.w_star = Eigen::VectorXd::Ones(out.synth.d);

  // eval block
  if (const auto* v = find("eval.holdout_size")) {
    const std::int64_t h = parse_int(*v, "eval.holdout_size");
    if (h < 1) throw ConfigError("eval.holdout_size: must be >= 1");
    out.holdout_size = static_cast<Index>(h);
  }
  if (const auto* v = find("eval.target_log_subopt"))
    out.target_log_subopt = parse_double(*v, "eval.target_log_subopt");

  if (const auto* v = find("threads")) {
    const std::int64_t n = parse_int(*v, "threads");
    if (n < 1) throw ConfigError("threads: must be >= 1");
    out.threads = static_cast<int>(n);
  }

  // run blocks, in first-appearance order
  std::vector<std::string> names;
  for (const auto& [k, v] : entries_) {
    std::string name, field;
    if (split_run_key(k, name, field) &&
        std::find(names.begin(), names.end(), name) == names.end())
      names.push_back(name);
  }
  if (names.empty())
    throw ConfigError("config: no run blocks (add run.<name>.algorithm = ...)");

  for (const std::string& name : names) {
    const std::string prefix = "run." + name + ".";
    auto run_key = [&](const char* field) { return prefix + field; };
    auto lookup = [&](const char* field) { return find(run_key(field)); };

    ResolvedRun rr;
    rr.name = name;
    RunConfig& cfg = rr.cfg;

    const auto* alg = lookup("algorithm");
    if (!alg) throw ConfigError(run_key("algorithm") + ": required");
    try {
      cfg.algorithm = parse_algorithm(*alg);
    } catch (const ConfigError& e) {
      throw ConfigError(run_key("algorithm") + ": " + e.what());
    }

    cfg.machines = out.machines;
    if (const auto* v = lookup("machines")) {
      const std::int64_t m = parse_int(*v, run_key("machines"));
      if (m < 1) throw ConfigError(run_key("machines") + ": must be >= 1");
      cfg.machines = static_cast<int>(m);
    }
    if (out.synth.n_total % cfg.machines != 0)
      throw ConfigError(run_key("machines") + ": must divide problem.n_total (" +
                        std::to_string(out.synth.n_total) + " % " +
                        std::to_string(cfg.machines) + " != 0)");
    const Index shard_n = out.synth.n_total / cfg.machines;

    cfg.rounds = 20;
    if (const auto* v = lookup("rounds")) {
      const std::int64_t r = parse_int(*v, run_key("rounds"));
      if (r < 1) throw ConfigError(run_key("rounds") + ": must be >= 1");
      cfg.rounds = static_cast<int>(r);
    }

    cfg.inner_steps = shard_n;  // T defaults to one pass worth of steps
    if (const auto* v = lookup("T"))
      cfg.inner_steps = parse_step_count(*v, shard_n, run_key("T"));
    rr.t_requested = cfg.inner_steps;

    if (const auto* v = lookup("equalize_budget"))
      rr.equalize_budget = parse_bool(*v, run_key("equalize_budget"));
    if (rr.equalize_budget && cfg.algorithm == Algorithm::kDaneSvrg)
      cfg.inner_steps = std::max<Index>(1, cfg.inner_steps / 2);

    cfg.eta = 1.0;
    cfg.mu = 0.0;
    if (const auto* v = lookup("eta")) cfg.eta = parse_double(*v, run_key("eta"));
    if (const auto* v = lookup("mu")) cfg.mu = parse_double(*v, run_key("mu"));

    // Step-size defaults: inverse decay for the SGD family, an extra
    // exponential round factor for the DANE local SGD solver.
    cfg.schedule.a0 = 0.05;
    cfg.schedule.decay = 1e-3;
    if (cfg.algorithm == Algorithm::kDaneSgd) {
      cfg.schedule.kind = ScheduleKind::kDaneExpDecay;
      cfg.schedule.c = 0.5;
    } else {
      cfg.schedule.kind = ScheduleKind::kInverseDecay;
      cfg.schedule.c = 0.0;
    }
    if (const auto* v = lookup("schedule.kind"))
      cfg.schedule.kind = parse_schedule_kind(*v);
    if (const auto* v = lookup("schedule.a0")) {
      cfg.schedule.a0 = parse_double(*v, run_key("schedule.a0"));
      if (!(cfg.schedule.a0 > 0.0)) throw ConfigError(run_key("schedule.a0") + ": must be > 0");
    }
    if (const auto* v = lookup("schedule.decay")) {
      cfg.schedule.decay = parse_double(*v, run_key("schedule.decay"));
      if (cfg.schedule.decay < 0.0)
        throw ConfigError(run_key("schedule.decay") + ": must be >= 0");
    }
    if (const auto* v = lookup("schedule.c")) {
      cfg.schedule.c = parse_double(*v, run_key("schedule.c"));
      if (cfg.schedule.c < 0.0) throw ConfigError(run_key("schedule.c") + ": must be >= 0");
    }

    cfg.svrg_alpha = 0.05;
    if (const auto* v = lookup("svrg_alpha")) {
      cfg.svrg_alpha = parse_double(*v, run_key("svrg_alpha"));
      if (!(cfg.svrg_alpha > 0.0)) throw ConfigError(run_key("svrg_alpha") + ": must be > 0");
    }

    cfg.access_mode = AccessMode::kFull;
    cfg.access_fraction = 1.0;
    if (const auto* v = lookup("access_mode")) {
      try {
        cfg.access_mode = parse_access_mode(*v);
      } catch (const ConfigError& e) {
        throw ConfigError(run_key("access_mode") + ": " + e.what());
      }
    }
    if (const auto* v = lookup("access_fraction")) {
      if (cfg.access_mode == AccessMode::kFull)
        throw ConfigError(run_key("access_fraction") +
                          ": set together with access_mode=Full; pick FixedSubset or "
                          "SubsampledGradient");
      cfg.access_fraction = parse_double(*v, run_key("access_fraction"));
    }

    cfg.seed = out.synth.seed;
    if (const auto* v = lookup("seed")) cfg.seed = parse_u64(*v, run_key("seed"));
    cfg.threads = out.threads;

    try {
      cfg.validate(out.synth.n_total);
    } catch (const ConfigError& e) {
      throw ConfigError("run." + name + ": " + e.what());
    }
    out.runs.push_back(std::move(rr));
  }
  return out;
}

std::string ExperimentConfig::get(const std::string& key) const {
  const ResolvedExperiment r = resolve();
  auto fmt_double = [](double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
  };

  if (key == "problem.d") return std::to_string(r.synth.d);
  if (key == "problem.n_total") return std::to_string(r.synth.n_total);
  if (key == "problem.machines") return std::to_string(r.machines);
  if (key == "problem.noise_std") return fmt_double(r.synth.noise_std);
  if (key == "problem.cov_exponent") return fmt_double(r.synth.cov_exponent);
  if (key == "problem.reg") return fmt_double(r.reg);
  if (key == "problem.seed") return std::to_string(r.synth.seed);
  if (key == "eval.holdout_size") return std::to_string(r.holdout_size);
  if (key == "eval.target_log_subopt") return fmt_double(r.target_log_subopt);
  if (key == "threads") return std::to_string(r.threads);

  std::string name, field;
  if (split_run_key(key, name, field)) {
    for (const ResolvedRun& rr : r.runs) {
      if (rr.name != name) continue;
      const RunConfig& cfg = rr.cfg;
      if (field == "algorithm") return algorithm_name(cfg.algorithm);
      if (field == "machines") return std::to_string(cfg.machines);
      if (field == "rounds") return std::to_string(cfg.rounds);
      if (field == "T") return std::to_string(cfg.inner_steps);
      if (field == "eta") return fmt_double(cfg.eta);
      if (field == "mu") return fmt_double(cfg.mu);
      if (field == "schedule.kind") return schedule_kind_name(cfg.schedule.kind);
      if (field == "schedule.a0") return fmt_double(cfg.schedule.a0);
      if (field == "schedule.decay") return fmt_double(cfg.schedule.decay);
      if (field == "schedule.c") return fmt_double(cfg.schedule.c);
      if (field == "svrg_alpha") return fmt_double(cfg.svrg_alpha);
      if (field == "access_mode") return access_mode_name(cfg.access_mode);
      if (field == "access_fraction") return fmt_double(cfg.access_fraction);
      if (field == "seed") return std::to_string(cfg.seed);
      if (field == "equalize_budget") return rr.equalize_budget ? "true" : "false";
      throw ConfigError("config get: unknown run field '" + field + "'");
    }
    throw ConfigError("config get: no run named '" + name + "'");
  }
  throw ConfigError("config get: unknown key '" + key + "'");
}

std::string ExperimentConfig::manifest_json() const {
  const ResolvedExperiment r = resolve();
  nlohmann::ordered_json j;
  j["tool"] = kToolName;
  j["version"] = kToolVersion;
  j["conventions"] = {
      {"log_base", 10},
      {"subopt_floor", kSuboptFloor},
      {"dane_comm_rounds_per_round", 2},
      {"floats_per_comm_round", "2*m*d"},
      {"grads_axis", "max over machines of cumulative per-sample gradient evaluations"},
  };
  j["problem"] = {
      {"d", r.synth.d},           {"n_total", r.synth.n_total},
      {"machines", r.machines},   {"noise_std", r.synth.noise_std},
      {"cov_exponent", r.synth.cov_exponent},
      {"reg", r.reg},             {"seed", r.synth.seed},
      {"w_star", "ones"},
  };
  j["eval"] = {
      {"holdout_size", r.holdout_size},
      {"target_log_subopt", r.target_log_subopt},
  };
  j["threads"] = r.threads;
  j["runs"] = nlohmann::ordered_json::array();
  for (const ResolvedRun& rr : r.runs) {
    const RunConfig& cfg = rr.cfg;
    nlohmann::ordered_json run;
    run["name"] = rr.name;
    run["csv"] = rr.name + ".csv";
    run["algorithm"] = algorithm_name(cfg.algorithm);
    run["machines"] = cfg.machines;
    run["rounds"] = cfg.rounds;
    run["T"] = cfg.inner_steps;
    run["T_requested"] = rr.t_requested;
    run["equalize_budget"] = rr.equalize_budget;
    run["eta"] = cfg.eta;
    run["mu"] = cfg.mu;
    run["schedule"] = {
        {"kind", schedule_kind_name(cfg.schedule.kind)},
        {"a0", cfg.schedule.a0},
        {"decay", cfg.schedule.decay},
        {"c", cfg.schedule.c},
    };
    run["svrg_alpha"] = cfg.svrg_alpha;
    run["access_mode"] = access_mode_name(cfg.access_mode);
    run["access_fraction"] = cfg.access_fraction;
    run["seed"] = cfg.seed;
    j["runs"].push_back(std::move(run));
  }
  return j.dump(2) + "\n";
}

}  // namespace dane
