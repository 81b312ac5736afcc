#pragma once

#include "stratclass/algorithms.hpp"
#include "stratclass/bounds.hpp"
#include "stratclass/data.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace stratclass {

struct DatasetSource {
  enum class Kind { Synthetic, Clusters, Csv };
  Kind kind = Kind::Synthetic;
  SynthConfig synth;
  ClusterConfig clusters;
  std::string csv_path;
  /// Optional margin trimming applied after loading.
  std::optional<double> trim_rho;
};

struct RunConfig {
  DatasetSource dataset;
  LearnerConfig learner;
  std::string norm = "l2";
  /// Exactly one of c, budget (= 2/c) or budget_of_margin (2/c as a fraction of d_star).
  std::optional<double> c;
  std::optional<double> budget;
  std::optional<double> budget_of_margin;
  double sigma = 0.0;
  /// Horizon; unset means rounds * dataset size (stream mode only).
  std::optional<long> T;
  std::uint64_t seed = 1;
  int rounds = 1;
  /// "iid" (uniform with replacement) or "stream" (seeded shuffle, replayed `rounds` times).
  std::string order = "iid";
};

/// Parses flat `key = value` text; '#' starts a comment.
RunConfig parse_config(const std::string& text);
RunConfig read_config(const std::string& path);
std::string format_config(const RunConfig& cfg);

Dataset load_dataset(const DatasetSource& src, const CostModel* trim_model = nullptr);
/// Cost model for the run; needs the dataset when 2/c is tied to its margin.
CostModel make_cost_model(const RunConfig& cfg, const Dataset& ds);

struct IterationRecord {
  long t = 0;
  bool mistake = false;
  bool manipulated = false;
  int label = 1;
  bool init = false;  // initialization round
  std::optional<double> d_t;
  std::optional<double> distance;
  std::optional<double> margin_gap;
};

struct RunMetrics {
  std::vector<IterationRecord> rows;
  long mistakes = 0;
  long manipulations = 0;
  long manipulations_pos = 0;
  long manipulations_neg = 0;
  /// Counts restricted to rounds after initialization.
  long main_mistakes = 0;
  long main_manipulations_pos = 0;
  long main_manipulations_neg = 0;
  long init_rounds = 0;
  double wall_seconds = 0.0;
  std::vector<std::string> events;
  Classifier final_classifier;

  /// Recomputes every counter from the rows.
  void recount();
};

/// ||(y,b)/||y||_2 - (y*,b*)/||y*||_2||_2; empty when y = 0.
std::optional<double> classifier_distance(const Classifier& cl, const Benchmark& bench);

RunMetrics run_online(const RunConfig& cfg);
RunMetrics run_online(const RunConfig& cfg, const Dataset& ds, const CostModel& m);

/// Header `t,mistake,manipulated,label,d_t,distance,margin_gap`; undefined values are empty.
void write_metrics(const RunMetrics& metrics, const std::string& path);
/// Init rows cannot be told apart in the file except for smm, where d_t is empty during initialization.
RunMetrics read_metrics(const std::string& path, bool smm_init_from_empty_margin = true);

struct CertifyRow {
  std::string name;
  Certificate bound;
  std::optional<long> observed;
  /// "pass", "fail", "vacuous" (unbounded) or "n/a".
  std::string verdict;
};

struct CertifyReport {
  DatasetConstants constants;
  Benchmark benchmark;
  std::vector<CertifyRow> rows;
  bool ok = true;
  std::string text() const;
};

CertifyReport certify(const RunConfig& cfg, const Dataset& ds, const CostModel& m,
                      const RunMetrics* metrics = nullptr);
CertifyReport certify(const RunConfig& cfg, const RunMetrics* metrics = nullptr);

struct ExampleReport {
  std::string name;
  bool passed = true;
  std::vector<std::string> checks;
  std::string text() const;
};

/// truthful-max-margin, smm-stuck, perceptron-margin or l1-counterexample.
ExampleReport reproduce_example(const std::string& name, int visits = 500);
std::vector<std::string> example_names();

struct SweepResult {
  std::string config_path;
  bool ran = false;
  std::string error;
  RunMetrics metrics;
  CertifyReport report;
};

/// Runs every *.cfg file in the directory on a worker pool; metrics are
/// written next to each config as <name>.metrics.csv.
std::vector<SweepResult> sweep(const std::string& dir, unsigned workers = 0);

}  // namespace stratclass
