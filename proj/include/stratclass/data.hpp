#pragma once

#include "stratclass/bounds.hpp"
#include "stratclass/rng.hpp"
#include "stratclass/strategic_model.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace stratclass {

struct Dataset {
  std::vector<Agent> agents;
  std::optional<Benchmark> benchmark;
  /// JSON text recording how the data were produced.
  std::string provenance;

  int dim() const;
  double positive_fraction() const;
  PointSetPair point_sets() const;
};

/// Truncated Gaussian features labeled by the all-ones classifier.
struct SynthConfig {
  std::uint64_t seed = 1;
  int n = 2000;
  int d = 6;
  double rho = 0.02;
  double radius = 0.4472135954999579;  // 1/sqrt(5)
  double variance = 0.04;
};

/// Two compact clusters on opposite sides of a random hyperplane.
struct ClusterConfig {
  std::uint64_t seed = 1;
  int per_class = 10;
  int d = 2;
  /// Distance of each cluster center from the separating hyperplane.
  double separation = 1.0;
  /// Cluster radius; points are uniform in a ball of this radius.
  double spread = 0.5;
};

/// Gaussian(0, variance I) conditioned on ||x||_2 <= radius, by rejection.
Vector sample_truncated_normal(Rng& rng, const SynthConfig& cfg);

/// Samples, labels by sign(1'x), drops points within rho of that hyperplane,
/// then translates so the benchmark intercept is zero.
Dataset generate_synthetic(const SynthConfig& cfg);

Dataset generate_clusters(const ClusterConfig& cfg);

/// Header `f1,...,fd,label`; labels -1, 1 or 0 (read as -1).
Dataset load_csv(const std::string& path);
void write_csv(const Dataset& ds, const std::string& path);

/// Drops agents misclassified by a reference separator or within rho of it,
/// then recomputes the benchmark, so the result has d_star >= rho.
Dataset trim_margin(const Dataset& ds, double rho, const CostModel& m);

/// Provenance plus benchmark and label balance, as JSON text.
std::string dataset_descriptor(const Dataset& ds);

}  // namespace stratclass
