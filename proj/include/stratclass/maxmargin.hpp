#pragma once

#include "stratclass/norms.hpp"

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

namespace stratclass {

/// Raised when an iterative solver hits its iteration cap.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Labeled point pools; both lists nonempty and of one dimension when solved.
struct PointSetPair {
  std::vector<Vector> positives;
  std::vector<Vector> negatives;

  int dim() const;
  void add(const Vector& x, int label);
};

/// Convex weights of the nearest-point solution: weight[k] on positives[pos[k]]
/// minus negatives[neg[k]]. Reusable as a warm start while the pools only grow.
struct Corral {
  std::vector<std::size_t> pos;
  std::vector<std::size_t> neg;
  std::vector<double> weight;
};

struct NearestPoints {
  Vector x_plus;
  Vector x_minus;
  /// Certified distance gap: ||x+ - x-|| minus the lower bound from the last
  /// linear minimization step.
  double gap = 0.0;
  int iterations = 0;
  Corral corral;
};

struct MarginSolution {
  Vector y;
  double b = 0.0;
  double d = 0.0;
  Vector x_plus;
  Vector x_minus;
  bool separable = false;
  /// L2 solver state for warm starts; empty for other norms.
  Corral corral;
};

/// min{ min_{x in P}(y'x + b), min_{x in N}(-y'x - b) }.
double margin_h(const Vector& y, double b, const PointSetPair& sets);

/// Alternate form 0.5(min_P y'x - max_N y'x) - |b + 0.5(min_P y'x + max_N y'x)|.
double margin_h_alternate(const Vector& y, double b, const PointSetPair& sets);

/// Intercept maximizing margin_h for a fixed y.
double best_intercept(const Vector& y, const PointSetPair& sets);

/// Nearest points of conv(P) and conv(N) in l2, by Wolfe's min-norm-point
/// iteration over the Minkowski difference P - N. Stops when the certified
/// distance gap is <= tol or the distance itself is <= tol.
NearestPoints nearest_points_convex_hulls(const PointSetPair& sets, double tol,
                                          const Corral* warm_start = nullptr,
                                          int max_iterations = 100000);

struct SolverOptions {
  double tol = 1e-10;
  int max_iterations = 100000;
  /// Supergradient runs stop after this many iterations without improving by tol.
  int patience = 2000;
};

/// Maximizes h(y, b) over ||y||_* <= 1. Exact route for L2, projected
/// supergradient ascent otherwise. Returns y = 0, b = 0 when d <= 10 tol.
MarginSolution solve_max_margin(const PointSetPair& sets, const CostModel& m,
                                const SolverOptions& opts = {},
                                const Corral* warm_start = nullptr);

/// True when the cached solution still attains its margin on the new point.
bool incremental_check(const MarginSolution& sol, const Vector& new_point, int new_label);

/// Euclidean projection onto the unit ball of the dual norm of m.
Vector project_dual_ball(const CostModel& m, const Vector& y);

}  // namespace stratclass
