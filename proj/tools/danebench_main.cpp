// danebench command line: run experiment files, sweep one axis of a single
// run block, and plot trace CSVs as SVG.  Talks to the engine exclusively
// through the C API.
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "danebench.h"
#include "json.hpp"
#include "svg_chart.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

struct ConfigDeleter {
  void operator()(db_config* c) const { db_config_free(c); }
};
struct ResultDeleter {
  void operator()(db_result* r) const { db_result_free(r); }
};
using ConfigPtr = std::unique_ptr<db_config, ConfigDeleter>;
using ResultPtr = std::unique_ptr<db_result, ResultDeleter>;

// Everything that is not a numerical failure maps to the config exit code.
int exit_code_for(db_status st) {
  return st == DB_ERROR_NUMERIC ? kExitNumeric : kExitConfig;
}

int report(db_status st) {
  std::cerr << "danebench: " << db_last_error() << '\n';
  return exit_code_for(st);
}

std::string get_value(const db_config* cfg, const std::string& key) {
  char buf[256];
  if (db_config_get(cfg, key.c_str(), buf, sizeof(buf)) != DB_OK)
    throw std::runtime_error(db_last_error());
  return buf;
}

ConfigPtr load_config(const std::string& path, bool seed_set, std::int64_t seed,
                      int& exit_out) {
  ConfigPtr cfg(db_config_load(path.c_str()));
  if (!cfg) {
    exit_out = report(DB_ERROR_CONFIG);
    return nullptr;
  }
  if (db_status st = db_config_apply_env(cfg.get()); st != DB_OK) {
    exit_out = report(st);
    return nullptr;
  }
  if (seed_set) {
    const std::string v = std::to_string(seed);
    if (db_status st = db_config_set(cfg.get(), "problem.seed", v.c_str()); st != DB_OK) {
      exit_out = report(st);
      return nullptr;
    }
  }
  if (db_status st = db_config_validate(cfg.get()); st != DB_OK) {
    exit_out = report(st);
    return nullptr;
  }
  exit_out = kExitOk;
  return cfg;
}

bool ensure_out_dir(const fs::path& dir, int& exit_out) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    std::cerr << "danebench: cannot create output directory '" << dir.string()
              << "': " << ec.message() << '\n';
    exit_out = kExitConfig;
    return false;
  }
  return true;
}

bool write_manifest(const db_config* cfg, const fs::path& dir, int& exit_out) {
  char* manifest = db_config_manifest_json(const_cast<db_config*>(cfg));
  if (manifest == nullptr) {
    exit_out = report(DB_ERROR_CONFIG);
    return false;
  }
  const fs::path path = dir / "manifest.json";
  std::ofstream out(path);
  out << manifest << '\n';
  db_string_free(manifest);
  if (!out) {
    std::cerr << "danebench: cannot write '" << path.string() << "'\n";
    exit_out = kExitConfig;
    return false;
  }
  return true;
}

std::vector<std::string> run_names(const db_config* cfg, int& exit_out) {
  const int count = db_config_run_count(cfg);
  if (count < 0) {
    exit_out = report(DB_ERROR_CONFIG);
    return {};
  }
  std::vector<std::string> names;
  char buf[256];
  for (int i = 0; i < count; ++i) {
    if (db_status st = db_config_run_name(cfg, i, buf, sizeof(buf)); st != DB_OK) {
      exit_out = report(st);
      return {};
    }
    names.emplace_back(buf);
  }
  exit_out = kExitOk;
  return names;
}

int execute_to_csv(const db_config* cfg, const std::string& name, const fs::path& csv,
                   ResultPtr* keep = nullptr) {
  db_result* raw = nullptr;
  if (db_status st = db_execute(cfg, name.c_str(), &raw); st != DB_OK) return report(st);
  ResultPtr res(raw);
  if (db_status st = db_result_write_csv(res.get(), csv.string().c_str()); st != DB_OK)
    return report(st);
  std::cout << name << " -> " << csv.string() << '\n';
  if (keep != nullptr) *keep = std::move(res);
  return kExitOk;
}

int cmd_run(const std::string& config_path, const std::string& out_dir, bool seed_set,
            std::int64_t seed) {
  int code = kExitOk;
  ConfigPtr cfg = load_config(config_path, seed_set, seed, code);
  if (!cfg) return code;
  const fs::path dir(out_dir);
  if (!ensure_out_dir(dir, code)) return code;
  if (!write_manifest(cfg.get(), dir, code)) return code;
  const std::vector<std::string> names = run_names(cfg.get(), code);
  if (code != kExitOk) return code;
  for (const std::string& name : names)
    if (int rc = execute_to_csv(cfg.get(), name, dir / (name + ".csv")); rc != kExitOk)
      return rc;
  return kExitOk;
}

int cmd_sweep(const std::string& config_path, const std::string& axis,
              std::vector<std::string> values, const std::string& out_dir, bool seed_set,
              std::int64_t seed) {
  int code = kExitOk;
  ConfigPtr cfg = load_config(config_path, seed_set, seed, code);
  if (!cfg) return code;
  const std::vector<std::string> names = run_names(cfg.get(), code);
  if (code != kExitOk) return code;
  if (names.size() != 1) {
    std::cerr << "danebench: sweep requires exactly one run block, config has "
              << names.size() << '\n';
    return kExitConfig;
  }
  const std::string& name = names.front();
  const std::string key =
      "run." + name + (axis == "T" ? ".T" : ".access_fraction");
  if (values.empty())
    values = axis == "T" ? std::vector<std::string>{"0.5n", "n", "2n", "4n", "6n"}
                         : std::vector<std::string>{"1.0", "0.5", "0.25"};

  const fs::path dir(out_dir);
  if (!ensure_out_dir(dir, code)) return code;
  if (!write_manifest(cfg.get(), dir, code)) return code;

  double target = 0;
  try {
    target = std::stod(get_value(cfg.get(), "eval.target_log_subopt"));
  } catch (const std::exception& e) {
    std::cerr << "danebench: " << e.what() << '\n';
    return kExitConfig;
  }

  std::string summary = "axis,value,rounds_to_target\n";
  for (const std::string& v : values) {
    ConfigPtr variant(db_config_clone(cfg.get()));
    if (!variant) return report(DB_ERROR_CONFIG);
    if (db_status st = db_config_set(variant.get(), key.c_str(), v.c_str()); st != DB_OK)
      return report(st);
    if (db_status st = db_config_validate(variant.get()); st != DB_OK) return report(st);
    ResultPtr res;
    const fs::path csv = dir / (name + "_" + axis + "_" + v + ".csv");
    if (int rc = execute_to_csv(variant.get(), name, csv, &res); rc != kExitOk) return rc;
    std::int64_t rounds = -1;
    if (db_status st = db_result_rounds_to_target(res.get(), target, &rounds);
        st != DB_OK)
      return report(st);
    summary += axis + "," + v + "," + std::to_string(rounds) + "\n";
  }
  const fs::path summary_path = dir / "summary.csv";
  std::ofstream out(summary_path);
  out << summary;
  if (!out) {
    std::cerr << "danebench: cannot write '" << summary_path.string() << "'\n";
    return kExitConfig;
  }
  std::cout << "summary -> " << summary_path.string() << '\n';
  return kExitOk;
}

// Legend label for a trace: the run name recorded in a manifest.json sitting
// next to the CSV, else the file stem.
std::string legend_label(const fs::path& csv) {
  const fs::path manifest = csv.parent_path() / "manifest.json";
  std::ifstream in(manifest);
  if (in) {
    try {
      const nlohmann::json j = nlohmann::json::parse(in);
      for (const auto& run : j.at("runs"))
        if (run.at("csv").get<std::string>() == csv.filename().string())
          return run.at("name").get<std::string>();
    } catch (const std::exception&) {
      // fall through to the stem
    }
  }
  return csv.stem().string();
}

int cmd_plot(const std::vector<std::string>& csv_paths, const std::string& out_svg,
             const std::string& x_axis, const std::string& y_axis) {
  svgchart::ChartSpec spec;
  spec.x_label = x_axis == "grads"
                     ? "gradient evaluations per machine (max, cumulative)"
                     : "round";
  spec.y_label = y_axis == "log10_subopt" ? "log10 suboptimality" : "population error";
  spec.title = spec.y_label + " vs " + spec.x_label;

  for (const std::string& path : csv_paths) {
    db_result* raw = nullptr;
    if (db_status st = db_trace_read_csv(path.c_str(), &raw); st != DB_OK)
      return report(st);
    ResultPtr res(raw);
    svgchart::Series series;
    series.label = legend_label(fs::path(path));
    const size_t n = db_result_trace_size(res.get());
    for (size_t i = 0; i < n; ++i) {
      db_trace_point p{};
      if (db_status st = db_result_trace_point(res.get(), i, &p); st != DB_OK)
        return report(st);
      series.x.push_back(x_axis == "grads" ? p.max_grads_per_machine
                                           : static_cast<double>(p.round));
      series.y.push_back(y_axis == "log10_subopt" ? p.log10_subopt : p.pop_error);
    }
    spec.series.push_back(std::move(series));
  }

  std::ofstream out(out_svg);
  out << svgchart::render_line_chart(spec);
  if (!out) {
    std::cerr << "danebench: cannot write '" << out_svg << "'\n";
    return kExitConfig;
  }
  std::cout << "chart -> " << out_svg << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string("danebench ") + db_version() +
               ": distributed approximate-Newton benchmark"};
  app.require_subcommand(1);

  std::string config_path, out_dir = ".";
  std::int64_t seed = 0;
  std::string axis = "T";
  std::vector<std::string> values;
  std::vector<std::string> csv_paths;
  std::string out_svg = "chart.svg";
  std::string x_axis = "grads", y_axis = "log10_subopt";

  CLI::App* run = app.add_subcommand("run", "Execute every run block in a config file");
  run->add_option("--config", config_path, "experiment config file")->required();
  run->add_option("--out", out_dir, "output directory (default .)");
  run->add_option("--seed", seed, "override problem.seed");

  CLI::App* sweep =
      app.add_subcommand("sweep", "Vary one axis of a single-run config");
  sweep->add_option("--config", config_path, "experiment config file")->required();
  sweep->add_option("--axis", axis, "T or fraction")
      ->check(CLI::IsMember({"T", "fraction"}));
  sweep->add_option("--values", values,
                    "comma-separated axis values (defaults per axis)")
      ->delimiter(',');
  sweep->add_option("--out", out_dir, "output directory (default .)");
  sweep->add_option("--seed", seed, "override problem.seed");

  CLI::App* plot = app.add_subcommand("plot", "Render trace CSVs as one SVG chart");
  plot->add_option("csv", csv_paths, "trace CSV files")->required();
  plot->add_option("--out", out_svg, "output SVG path (default chart.svg)");
  plot->add_option("--x", x_axis, "x axis: grads or rounds")
      ->check(CLI::IsMember({"grads", "rounds"}));
  plot->add_option("--y", y_axis, "y axis: log10_subopt or pop_error")
      ->check(CLI::IsMember({"log10_subopt", "pop_error"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);  // prints the message
    return kExitConfig;
  }

  if (run->parsed())
    return cmd_run(config_path, out_dir, run->count("--seed") > 0, seed);
  if (sweep->parsed())
    return cmd_sweep(config_path, axis, values, out_dir, sweep->count("--seed") > 0,
                     seed);
  return cmd_plot(csv_paths, out_svg, x_axis, y_axis);
}
