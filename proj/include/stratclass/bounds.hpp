#pragma once

#include "stratclass/algorithms.hpp"
#include "stratclass/maxmargin.hpp"
#include "stratclass/strategic_model.hpp"

#include <string>
#include <vector>

namespace stratclass {

/// Radii of the agent set and of its proxy envelope (tilde versions add (2/c) C).
struct DatasetConstants {
  double D = 0.0;
  double D_pm = 0.0;
  double D_plus = 0.0;
  double D_minus = 0.0;
  double D_tilde = 0.0;
  double D_tilde_pm = 0.0;
  double D_tilde_plus = 0.0;
  double D_tilde_minus = 0.0;
  double D_bar = 0.0;
  double C = 0.0;
};

/// Best separator of the true features: lbl (y'A + b)/||y||_* >= d_star for every agent.
struct Benchmark {
  Vector y_star;
  double b_star = 0.0;
  double d_star = 0.0;
};

/// A bound value, or a marker that it is infinite or that its hypotheses fail.
struct Certificate {
  enum class Kind { Finite, Unbounded, NotApplicable };
  Kind kind = Kind::NotApplicable;
  double value = 0.0;
  std::string reason;

  static Certificate finite(double v);
  static Certificate unbounded(std::string why);
  static Certificate not_applicable(std::string why);

  /// Finite bounds admit counts <= value; unbounded admits everything.
  bool admits(long observed) const;
  std::string str() const;
};

DatasetConstants dataset_constants(const std::vector<Agent>& agents, const CostModel& m);

/// Max-margin separator of the agents under m; throws if they are not separable.
Benchmark compute_benchmark(const std::vector<Agent>& agents, const CostModel& m, const SolverOptions& opts = {});

/// Closed-form upper bound on kappa(a, d_star, D_bar) for l2 costs.
double kappa_l2_upper(double a, double d_star, double D_bar);

/// Mistakes of the smm learner after initialization.
Certificate smm_mistake_bound(const Benchmark& bench, const DatasetConstants& k, const CostModel& m);

struct ManipulationBounds {
  Certificate negative;
  Certificate positive;
};

/// Manipulations of the smm learner split by true label.
ManipulationBounds smm_manipulation_bounds(const Benchmark& bench, const DatasetConstants& k, const CostModel& m);

/// Mistakes of the perceptron with gamma = 1 (any gamma gives the same run up to scale).
Certificate perceptron_mistake_bound(const Benchmark& bench, const DatasetConstants& k, const CostModel& m,
                                     ConeKind cone);

}  // namespace stratclass
