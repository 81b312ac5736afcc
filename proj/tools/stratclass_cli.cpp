// Command-line front end: simulate, sweep, certify, reproduce-example,
// solve-margin and gen-data. Exit codes: 0 ok, 1 regression, 2 usage.

#include "stratclass/harness.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>

namespace sc = stratclass;

namespace {

constexpr int kOk = 0;
constexpr int kRegression = 1;
constexpr int kUsage = 2;

std::vector<double> to_std(const sc::Vector& v) { return {v.data(), v.data() + v.size()}; }

int cmd_simulate(const std::string& config, const std::string& out, bool quiet) {
  sc::RunConfig cfg = sc::read_config(config);
  sc::Dataset ds = sc::load_dataset(cfg.dataset);
  sc::CostModel m = sc::make_cost_model(cfg, ds);
  sc::RunMetrics metrics = sc::run_online(cfg, ds, m);
  sc::write_metrics(metrics, out);
  if (!quiet) {
    std::cout << "rows=" << metrics.rows.size() << " mistakes=" << metrics.mistakes
              << " manipulations=" << metrics.manipulations << " (+1: " << metrics.manipulations_pos
              << ", -1: " << metrics.manipulations_neg << ") init_rounds=" << metrics.init_rounds
              << " wall_s=" << metrics.wall_seconds << "\n";
    for (const auto& e : metrics.events) std::cout << "event " << e << "\n";
  }
  return kOk;
}

int cmd_sweep(const std::string& dir, unsigned workers) {
  auto results = sc::sweep(dir, workers);
  int code = kOk;
  for (const auto& r : results) {
    if (!r.ran) {
      std::cout << r.config_path << ": error: " << r.error << "\n";
      code = kRegression;
      continue;
    }
    std::cout << r.config_path << ": mistakes=" << r.metrics.mistakes << " manipulations=" << r.metrics.manipulations
              << " wall_s=" << r.metrics.wall_seconds;
    if (!r.report.rows.empty()) std::cout << (r.report.ok ? " certify=ok" : " certify=FAILED");
    std::cout << "\n";
    if (!r.report.ok) code = kRegression;
  }
  if (results.empty()) std::cout << "no .cfg files in " << dir << "\n";
  return code;
}

int cmd_certify(const std::string& config, const std::string& metrics_path) {
  sc::RunConfig cfg = sc::read_config(config);
  std::optional<sc::RunMetrics> metrics;
  if (!metrics_path.empty()) metrics = sc::read_metrics(metrics_path, cfg.learner.algorithm == "smm");
  sc::CertifyReport rep = sc::certify(cfg, metrics ? &*metrics : nullptr);
  std::cout << rep.text();
  return rep.ok ? kOk : kRegression;
}

int cmd_reproduce(const std::string& name, int visits) {
  std::vector<std::string> names = name == "all" ? sc::example_names() : std::vector<std::string>{name};
  bool ok = true;
  for (const auto& n : names) {
    sc::ExampleReport rep = sc::reproduce_example(n, visits);
    std::cout << rep.text();
    ok = ok && rep.passed;
  }
  return ok ? kOk : kRegression;
}

int cmd_solve_margin(const std::string& points, const std::string& norm, double tol) {
  sc::Dataset ds = sc::load_csv(points);
  if (ds.agents.empty()) throw sc::InvalidArgument(points + ": no points");
  sc::CostModel m(sc::NormKind::parse(norm), 1.0, ds.dim());
  sc::SolverOptions opts;
  opts.tol = tol;
  sc::PointSetPair sets = ds.point_sets();
  if (sets.positives.empty() || sets.negatives.empty()) throw sc::InvalidArgument(points + ": both labels are needed");
  sc::MarginSolution sol = sc::solve_max_margin(sets, m, opts);
  nlohmann::json j = {{"norm", norm},
                      {"separable", sol.separable},
                      {"y", to_std(sol.y)},
                      {"b", sol.b},
                      {"d", sol.d},
                      {"x_plus", to_std(sol.x_plus)},
                      {"x_minus", to_std(sol.x_minus)}};
  std::cout << j.dump(2) << "\n";
  return kOk;
}

int cmd_gen_data(const std::string& config, const std::string& out) {
  sc::RunConfig cfg = sc::read_config(config);
  sc::Dataset ds = sc::load_dataset(cfg.dataset);
  sc::write_csv(ds, out);
  std::ofstream desc(out + ".json");
  if (!desc) throw sc::InvalidArgument("cannot write '" + out + ".json'");
  desc << sc::dataset_descriptor(ds) << "\n";
  std::cout << "wrote " << ds.agents.size() << " agents to " << out << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Online strategic classification simulator"};
  app.require_subcommand(1);

  std::string config, out, metrics_path, configs_dir, example, points, norm = "l2";
  unsigned workers = 0;
  int visits = 500;
  double tol = 1e-10;
  bool quiet = false;

  auto* simulate = app.add_subcommand("simulate", "Run one configuration and write per-iteration metrics");
  simulate->add_option("--config", config, "Run configuration file")->required()->check(CLI::ExistingFile);
  simulate->add_option("--out", out, "Metrics CSV to write")->required();
  simulate->add_flag("--quiet", quiet, "Suppress the summary line");

  auto* sweep = app.add_subcommand("sweep", "Run every *.cfg in a directory");
  sweep->add_option("--configs", configs_dir, "Directory of run configurations")->required()->check(CLI::ExistingDirectory);
  sweep->add_option("--workers", workers, "Worker threads (0 = hardware concurrency)");

  auto* certify = app.add_subcommand("certify", "Print dataset constants and applicable bounds");
  certify->add_option("--config", config, "Run configuration file")->required()->check(CLI::ExistingFile);
  certify->add_option("--metrics", metrics_path, "Metrics CSV of a finished run")->check(CLI::ExistingFile);

  auto* reproduce = app.add_subcommand("reproduce-example", "Replay a worked example and check its claims");
  reproduce->add_option("name", example, "Example name or 'all'")->required();
  reproduce->add_option("--visits", visits, "Visits per point")->check(CLI::Range(3, 1000000));

  auto* solve = app.add_subcommand("solve-margin", "Max-margin separator of a labeled point CSV");
  solve->add_option("--points", points, "CSV with header f1,...,fd,label")->required()->check(CLI::ExistingFile);
  solve->add_option("--norm", norm, "Cost norm token: l2, l1, linf, lp:<p>, wl1:<w,...>");
  solve->add_option("--tol", tol, "Solver tolerance")->check(CLI::PositiveNumber);

  auto* gen = app.add_subcommand("gen-data", "Materialize the configured dataset as CSV plus a JSON descriptor");
  gen->add_option("--config", config, "Run configuration file")->required()->check(CLI::ExistingFile);
  gen->add_option("--out", out, "CSV to write")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*simulate) return cmd_simulate(config, out, quiet);
    if (*sweep) return cmd_sweep(configs_dir, workers);
    if (*certify) return cmd_certify(config, metrics_path);
    if (*reproduce) return cmd_reproduce(example, visits);
    if (*solve) return cmd_solve_margin(points, norm, tol);
    if (*gen) return cmd_gen_data(config, out);
  } catch (const sc::InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRegression;
  }
  return kUsage;
}
