// Command-line front end. Talks to the library only through the C API.
#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "adaptseg/adaptseg.h"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

struct Failure {
  int code;
  std::string message;
};

int exit_code_for(adaptseg_status s) {
  switch (s) {
    case ADAPTSEG_OK: return 0;
    case ADAPTSEG_ERR_INVALID_ARGUMENT:
    case ADAPTSEG_ERR_CONFIG:
    case ADAPTSEG_ERR_IO: return kExitConfig;
    case ADAPTSEG_ERR_NUMERIC:
    case ADAPTSEG_ERR_INTERNAL: return kExitNumeric;
  }
  return kExitNumeric;
}

void check(adaptseg_status s) {
  if (s != ADAPTSEG_OK) throw Failure{exit_code_for(s), std::string(adaptseg_status_name(s)) + ": " + adaptseg_last_error()};
}

struct ConfigDeleter {
  void operator()(adaptseg_config* p) const { adaptseg_config_free(p); }
};
struct DatasetDeleter {
  void operator()(adaptseg_dataset* p) const { adaptseg_dataset_free(p); }
};
struct ResultDeleter {
  void operator()(adaptseg_result* p) const { adaptseg_result_free(p); }
};
using ConfigPtr = std::unique_ptr<adaptseg_config, ConfigDeleter>;
using DatasetPtr = std::unique_ptr<adaptseg_dataset, DatasetDeleter>;
using ResultPtr = std::unique_ptr<adaptseg_result, ResultDeleter>;

std::string take_string(char* s) {
  std::string out(s);
  adaptseg_string_free(s);
  return out;
}

/// Options shared by run, dump and sweep.
struct Common {
  std::string case_name;
  std::string data_path;
  std::string config_path;
  std::vector<std::pair<std::string, std::string>> overrides;
  std::vector<std::string> raw_sets;

  void add(CLI::App* app) {
    app->add_option("--case", case_name, "Benchmark case f1, f2, f3 or f4");
    app->add_option("--data", data_path, "Input CSV with header and x,y,f rows");
    app->add_option("--config", config_path, "JSON config file; flags override it");
    app->add_option("--set", raw_sets, "Override any config key, key=value (repeatable)");
    flag_option(app, "--kernel", "kernel", "Kernel family: imq or gaussian");
    flag_option(app, "--delta", "delta", "Kernel shape parameter");
    flag_option(app, "--n", "n_neighbors", "Neighborhood size n");
    flag_option(app, "--m", "m_candidates", "Candidate classes per unsure point");
    flag_option(app, "--threshold", "threshold_factor", "Good-point threshold factor on the median");
    flag_option(app, "--min-component", "min_component_size", "Smallest kept component (0 = auto)");
    flag_option(app, "--blowup", "blowup_mode", "fixpoint or single-pass");
    flag_option(app, "--grid-step", "grid_step", "Evaluation grid step");
    flag_option(app, "--seed", "seed", "Site generator seed");
    flag_option(app, "--N", "N", "Number of synthesized sites (perfect square)");
    flag_option(app, "--margin", "margin", "Domain extension around [0,1]^2");
    flag_option(app, "--target-q", "target_q", "Target separation distance");
    flag_option(app, "--jitter", "jitter", "Jitter as a fraction of the grid spacing");
    flag_option(app, "--workers", "workers", "Worker threads (0 = all cores)");
    app->add_flag_callback("--skip-phase3", [this] { overrides.emplace_back("skip_phase3", "true"); },
                           "Leave unsure points unlabeled");
  }

  void flag_option(CLI::App* app, const std::string& flag, std::string key, const std::string& help) {
    app->add_option_function<std::string>(
        flag, [this, key](const std::string& v) { overrides.emplace_back(key, v); }, help);
  }

  ConfigPtr make_config() const {
    adaptseg_config* raw = nullptr;
    check(adaptseg_config_new(&raw));
    ConfigPtr cfg(raw);
    if (!config_path.empty()) check(adaptseg_config_load_file(cfg.get(), config_path.c_str()));
    for (const auto& [k, v] : overrides) check(adaptseg_config_set(cfg.get(), k.c_str(), v.c_str()));
    for (const std::string& kv : raw_sets) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw Failure{kExitConfig, "--set expects key=value, got '" + kv + "'"};
      check(adaptseg_config_set(cfg.get(), kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str()));
    }
    return cfg;
  }

  DatasetPtr make_dataset(const adaptseg_config* cfg) const {
    if (case_name.empty() == data_path.empty()) throw Failure{kExitConfig, "exactly one of --case or --data is required"};
    adaptseg_dataset* raw = nullptr;
    if (!case_name.empty()) {
      check(adaptseg_dataset_from_case(case_name.c_str(), cfg, &raw));
    } else {
      check(adaptseg_dataset_from_csv(data_path.c_str(), &raw));
    }
    return DatasetPtr(raw);
  }
};

ResultPtr run(const adaptseg_config* cfg, const adaptseg_dataset* data) {
  adaptseg_result* raw = nullptr;
  check(adaptseg_run(cfg, data, &raw));
  return ResultPtr(raw);
}

std::string artifact(const adaptseg_result* res, const char* name) {
  char* s = nullptr;
  check(adaptseg_result_artifact(res, name, &s));
  return take_string(s);
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Failure{kExitConfig, "cannot write " + path};
  out << text;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string json_number(const nlohmann::json& v) {
  if (v.is_null()) return "";
  if (v.is_number_float()) {
    std::ostringstream os;
    os.precision(6);
    os << std::scientific << v.get<double>();
    return os.str();
  }
  return v.dump();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive piecewise kernel approximation of data with discontinuities"};
  app.require_subcommand(1);

  Common run_opts;
  std::string out_dir = ".";
  bool quiet = false;
  auto* run_cmd = app.add_subcommand("run", "Run all phases and write report.json, classes.csv, sigma.csv, grid_errors.csv");
  run_opts.add(run_cmd);
  run_cmd->add_option("--out", out_dir, "Output directory");
  run_cmd->add_flag("--quiet", quiet, "Do not print the report");

  Common dump_opts;
  std::string dump_what;
  std::string dump_out;
  auto* dump_cmd = app.add_subcommand("dump", "Print one phase artifact");
  dump_opts.add(dump_cmd);
  dump_cmd->add_option("artifact", dump_what, "sigma, seeds, blowup-trace, classes, grid-errors, report or case")
      ->required()
      ->check(CLI::IsMember({"sigma", "seeds", "blowup-trace", "classes", "grid-errors", "report", "case"}));
  dump_cmd->add_option("--out", dump_out, "Output file (default stdout)");

  Common case_opts;
  std::string case_out;
  auto* case_cmd = app.add_subcommand("dump-case", "Write x,y,f,true_class for a benchmark case");
  case_opts.add(case_cmd);
  case_cmd->add_option("--out", case_out, "Output file (default stdout)");

  Common sweep_opts;
  std::string sweep_n = "12", sweep_delta = "0.35", sweep_threshold = "2";
  std::string sweep_out;
  auto* sweep_cmd = app.add_subcommand("sweep", "Grid over n, delta and threshold factor; one CSV row per run");
  sweep_opts.add(sweep_cmd);
  sweep_cmd->add_option("--n-list", sweep_n, "Comma-separated neighborhood sizes");
  sweep_cmd->add_option("--delta-list", sweep_delta, "Comma-separated kernel shape parameters");
  sweep_cmd->add_option("--threshold-list", sweep_threshold, "Comma-separated threshold factors");
  sweep_cmd->add_option("--out", sweep_out, "Output CSV (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    if (run_cmd->parsed()) {
      ConfigPtr cfg = run_opts.make_config();
      DatasetPtr data = run_opts.make_dataset(cfg.get());
      ResultPtr res = run(cfg.get(), data.get());
      std::filesystem::create_directories(out_dir);
      const std::filesystem::path dir(out_dir);
      check(adaptseg_result_write(res.get(), "report", (dir / "report.json").c_str()));
      check(adaptseg_result_write(res.get(), "classes", (dir / "classes.csv").c_str()));
      check(adaptseg_result_write(res.get(), "sigma", (dir / "sigma.csv").c_str()));
      if (!run_opts.case_name.empty()) {
        check(adaptseg_result_write(res.get(), "grid-errors", (dir / "grid_errors.csv").c_str()));
      }
      if (!quiet) std::cout << artifact(res.get(), "report");
    } else if (dump_cmd->parsed()) {
      ConfigPtr cfg = dump_opts.make_config();
      DatasetPtr data = dump_opts.make_dataset(cfg.get());
      if (dump_what == "case") {
        char* s = nullptr;
        check(adaptseg_dataset_case_csv(data.get(), &s));
        write_text(dump_out, take_string(s));
      } else {
        ResultPtr res = run(cfg.get(), data.get());
        write_text(dump_out, artifact(res.get(), dump_what.c_str()));
      }
    } else if (case_cmd->parsed()) {
      ConfigPtr cfg = case_opts.make_config();
      DatasetPtr data = case_opts.make_dataset(cfg.get());
      char* s = nullptr;
      check(adaptseg_dataset_case_csv(data.get(), &s));
      write_text(case_out, take_string(s));
    } else if (sweep_cmd->parsed()) {
      std::string table =
          "n,delta,threshold_factor,classes,classified_after_blowup,misclassified,"
          "linf_safe_segmented,linf_segmented,linf_safe_global,linf_global\n";
      for (const std::string& n : split_list(sweep_n)) {
        for (const std::string& delta : split_list(sweep_delta)) {
          for (const std::string& thr : split_list(sweep_threshold)) {
            ConfigPtr cfg = sweep_opts.make_config();
            check(adaptseg_config_set(cfg.get(), "n_neighbors", n.c_str()));
            check(adaptseg_config_set(cfg.get(), "delta", delta.c_str()));
            check(adaptseg_config_set(cfg.get(), "threshold_factor", thr.c_str()));
            DatasetPtr data = sweep_opts.make_dataset(cfg.get());
            ResultPtr res = run(cfg.get(), data.get());
            const auto report = nlohmann::json::parse(artifact(res.get(), "report"));
            const auto& err = report["errors"];
            table += n + "," + delta + "," + thr + "," + report["classes"].dump() + "," +
                     report["blowup"]["classified"].dump() + "," + json_number(report["assignment"]["misclassified"]) +
                     "," + json_number(err["linf_safe_segmented"]) + "," + json_number(err["linf_segmented"]) + "," +
                     json_number(err["linf_safe_global"]) + "," + json_number(err["linf_global"]) + "\n";
          }
        }
      }
      write_text(sweep_out, table);
    }
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << "\n";
    return f.code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
  return 0;
}
