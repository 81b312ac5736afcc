#include "stratclass/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace stratclass {

namespace {

constexpr double kHypothesisTol = 1e-8;

double half_diameter(const std::vector<const Vector*>& pts) {
  double best = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) best = std::max(best, (*pts[i] - *pts[j]).squaredNorm());
  }
  return 0.5 * std::sqrt(best);
}

void check_benchmark(const Benchmark& bench) {
  if (!(bench.d_star > 0.0)) throw InvalidArgument("benchmark margin d_star must be positive");
}

double log_ratio_bound(double D_tilde_pm, double d_star, double kappa) {
  if (D_tilde_pm <= d_star) return 0.0;
  return std::log(D_tilde_pm / d_star) / std::log(1.0 / kappa);
}

}  // namespace

Certificate Certificate::finite(double v) { return {Kind::Finite, v, ""}; }
Certificate Certificate::unbounded(std::string why) { return {Kind::Unbounded, 0.0, std::move(why)}; }
Certificate Certificate::not_applicable(std::string why) { return {Kind::NotApplicable, 0.0, std::move(why)}; }

bool Certificate::admits(long observed) const {
  switch (kind) {
    case Kind::Finite: return static_cast<double>(observed) <= value;
    case Kind::Unbounded: return true;
    case Kind::NotApplicable: return true;
  }
  return true;
}

std::string Certificate::str() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::Finite: os.precision(10); os << value; break;
    case Kind::Unbounded: os << "unbounded (" << reason << ")"; break;
    case Kind::NotApplicable: os << "not applicable (" << reason << ")"; break;
  }
  return os.str();
}

DatasetConstants dataset_constants(const std::vector<Agent>& agents, const CostModel& m) {
  if (agents.empty()) throw InvalidArgument("dataset_constants needs at least one agent");
  std::vector<const Vector*> all, pos, neg;
  DatasetConstants k;
  for (const Agent& a : agents) {
    m.check_dim(a.features);
    all.push_back(&a.features);
    (a.label == 1 ? pos : neg).push_back(&a.features);
    k.D = std::max(k.D, a.features.norm());
  }
  k.D_pm = half_diameter(all);
  k.D_plus = half_diameter(pos);
  k.D_minus = half_diameter(neg);
  k.C = m.l2_envelope_constant();
  const double shift = m.budget() * k.C;
  k.D_tilde = k.D + shift;
  k.D_tilde_pm = k.D_pm + shift;
  k.D_tilde_plus = k.D_plus + shift;
  k.D_tilde_minus = k.D_minus + shift;
  k.D_bar = std::max(k.D_tilde_plus, k.D_tilde_minus);
  return k;
}

Benchmark compute_benchmark(const std::vector<Agent>& agents, const CostModel& m, const SolverOptions& opts) {
  PointSetPair sets;
  for (const Agent& a : agents) sets.add(a.features, a.label);
  if (sets.positives.empty() || sets.negatives.empty()) {
    throw InvalidArgument("benchmark needs agents of both labels");
  }
  MarginSolution sol = solve_max_margin(sets, m, opts);
  if (!sol.separable) throw InvalidArgument("agents are not linearly separable");
  return {sol.y, sol.b, sol.d};
}

double kappa_l2_upper(double a, double d_star, double D_bar) {
  if (!(a >= 0.0) || !(a < d_star)) throw InvalidArgument("kappa_l2_upper requires 0 <= a < d_star");
  if (!(D_bar > 0.0)) throw InvalidArgument("kappa_l2_upper requires D_bar > 0");
  double first = 1.0 - (d_star - a) * (d_star - a) / (4.0 * D_bar * D_bar);
  double second = (d_star + a) / (2.0 * d_star);
  return std::sqrt(std::max(first, second));
}

Certificate smm_mistake_bound(const Benchmark& bench, const DatasetConstants& k, const CostModel& m) {
  check_benchmark(bench);
  if (m.norm_kind().type() != NormType::L2) return Certificate::not_applicable("kappa bound needs an l2 cost");
  return Certificate::finite(log_ratio_bound(k.D_tilde_pm, bench.d_star, kappa_l2_upper(0.0, bench.d_star, k.D_bar)));
}

ManipulationBounds smm_manipulation_bounds(const Benchmark& bench, const DatasetConstants& k, const CostModel& m) {
  check_benchmark(bench);
  ManipulationBounds out;
  if (m.norm_kind().type() != NormType::L2) {
    out.negative = out.positive = Certificate::not_applicable("kappa bound needs an l2 cost");
    return out;
  }
  out.negative = smm_mistake_bound(bench, k, m);
  if (bench.d_star > m.budget()) {
    out.positive = Certificate::finite(
        log_ratio_bound(k.D_tilde_pm, bench.d_star, kappa_l2_upper(m.budget(), bench.d_star, k.D_bar)));
  } else {
    out.positive = Certificate::unbounded("d_star <= 2/c");
  }
  return out;
}

Certificate perceptron_mistake_bound(const Benchmark& bench, const DatasetConstants& k, const CostModel& m,
                                     ConeKind cone) {
  check_benchmark(bench);
  const double yd = m.dual_norm(bench.y_star);
  const double scale = (bench.y_star.squaredNorm() + bench.b_star * bench.b_star) / (yd * yd);
  const double dt2 = k.D_tilde * k.D_tilde + 1.0;
  switch (cone) {
    case ConeKind::FullSpace: {
      double slack = bench.d_star - m.budget();
      if (slack <= 0.0) return Certificate::unbounded("d_star <= 2/c");
      return Certificate::finite(scale * dt2 / (slack * slack));
    }
    case ConeKind::ZeroIntercept: {
      if (m.norm_kind().type() != NormType::L2) return Certificate::not_applicable("zero-intercept bound needs an l2 cost");
      if (std::abs(bench.b_star) / bench.y_star.norm() > kHypothesisTol) {
        return Certificate::not_applicable("benchmark intercept is not zero");
      }
      return Certificate::finite(dt2 / (bench.d_star * bench.d_star));
    }
    case ConeKind::NonnegWeights: {
      if (bench.y_star.minCoeff() < -kHypothesisTol * bench.y_star.norm()) {
        return Certificate::not_applicable("benchmark weights are not nonnegative");
      }
      // Every supported norm maps y >= 0 to v(y) >= 0, so only y_star needs checking.
      return Certificate::finite(scale * dt2 / (bench.d_star * bench.d_star));
    }
  }
  return Certificate::not_applicable("unknown cone");
}

}  // namespace stratclass
