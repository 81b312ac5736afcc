#include "stratclass/maxmargin.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace stratclass {

namespace {

struct Extremes {
  double min_pos;
  double max_neg;
  std::size_t argmin_pos;
  std::size_t argmax_neg;
};

void check_nonempty(const PointSetPair& sets) {
  if (sets.positives.empty() || sets.negatives.empty()) {
    throw InvalidArgument("both point sets must be nonempty");
  }
}

// First index wins ties.
Extremes extremes(const Vector& y, const PointSetPair& sets) {
  Extremes e{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(), 0, 0};
  for (std::size_t i = 0; i < sets.positives.size(); ++i) {
    double v = y.dot(sets.positives[i]);
    if (v < e.min_pos) {
      e.min_pos = v;
      e.argmin_pos = i;
    }
  }
  for (std::size_t j = 0; j < sets.negatives.size(); ++j) {
    double v = y.dot(sets.negatives[j]);
    if (v > e.max_neg) {
      e.max_neg = v;
      e.argmax_neg = j;
    }
  }
  return e;
}

Vector vertex(const PointSetPair& sets, std::size_t i, std::size_t j) {
  return sets.positives[i] - sets.negatives[j];
}

Vector combine(const PointSetPair& sets, const Corral& c, Vector* xp, Vector* xm) {
  const int dim = sets.dim();
  Vector p = Vector::Zero(dim), n = Vector::Zero(dim);
  for (std::size_t k = 0; k < c.weight.size(); ++k) {
    p += c.weight[k] * sets.positives[c.pos[k]];
    n += c.weight[k] * sets.negatives[c.neg[k]];
  }
  if (xp) *xp = p;
  if (xm) *xm = n;
  return p - n;
}

// Affine minimizer: weights summing to one minimizing ||sum a_k s_k||.
std::vector<double> affine_minimizer(const std::vector<Vector>& s) {
  const std::size_t m = s.size();
  if (m == 1) return {1.0};
  Eigen::MatrixXd B(s[0].size(), static_cast<Eigen::Index>(m - 1));
  for (std::size_t k = 1; k < m; ++k) B.col(static_cast<Eigen::Index>(k - 1)) = s[k] - s[0];
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(B);
  Vector beta = cod.solve(-s[0]);
  std::vector<double> a(m);
  a[0] = 1.0 - beta.sum();
  for (std::size_t k = 1; k < m; ++k) a[k] = beta[static_cast<Eigen::Index>(k - 1)];
  return a;
}

void drop_zero_weights(Corral& c, std::vector<Vector>& s, double floor) {
  std::size_t w = 0;
  for (std::size_t k = 0; k < c.weight.size(); ++k) {
    if (c.weight[k] > floor) {
      c.pos[w] = c.pos[k];
      c.neg[w] = c.neg[k];
      c.weight[w] = c.weight[k];
      s[w] = s[k];
      ++w;
    }
  }
  c.pos.resize(w);
  c.neg.resize(w);
  c.weight.resize(w);
  s.resize(w);
  double total = 0.0;
  for (double x : c.weight) total += x;
  for (double& x : c.weight) x /= total;
}

Corral initial_corral(const PointSetPair& sets, const Corral* warm) {
  Corral c;
  if (warm) {
    for (std::size_t k = 0; k < warm->weight.size(); ++k) {
      if (warm->pos[k] < sets.positives.size() && warm->neg[k] < sets.negatives.size() &&
          warm->weight[k] > 0.0) {
        c.pos.push_back(warm->pos[k]);
        c.neg.push_back(warm->neg[k]);
        c.weight.push_back(warm->weight[k]);
      }
    }
    double total = 0.0;
    for (double x : c.weight) total += x;
    if (total > 0.0) {
      for (double& x : c.weight) x /= total;
      return c;
    }
    c = Corral{};
  }
  // Cold start: the vertex picked by the linear step along the centroid difference.
  Vector cp = Vector::Zero(sets.dim()), cn = Vector::Zero(sets.dim());
  for (const auto& p : sets.positives) cp += p;
  for (const auto& n : sets.negatives) cn += n;
  Vector dir = cp / static_cast<double>(sets.positives.size()) - cn / static_cast<double>(sets.negatives.size());
  Extremes e = extremes(dir, sets);
  c.pos.push_back(e.argmin_pos);
  c.neg.push_back(e.argmax_neg);
  c.weight.push_back(1.0);
  return c;
}

// Euclidean projection onto {x : sum |x_i|^q <= 1}.
Vector project_lq_ball(const Vector& z, double q) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < z.size(); ++i) s += std::pow(std::abs(z[i]), q);
  if (s <= 1.0) return z;
  // For multiplier lam, t_i solves t + lam q t^(q-1) = |z_i|; sum t_i^q decreases in lam.
  auto coord = [q](double a, double lam) {
    double lo = 0.0, hi = a;
    for (int it = 0; it < 100 && hi - lo > 1e-16 * std::max(1.0, a); ++it) {
      double mid = 0.5 * (lo + hi);
      double f = mid + lam * q * std::pow(mid, q - 1.0) - a;
      (f > 0.0 ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
  };
  auto mass = [&](double lam) {
    double total = 0.0;
    for (Eigen::Index i = 0; i < z.size(); ++i) total += std::pow(coord(std::abs(z[i]), lam), q);
    return total;
  };
  double lo = 0.0, hi = 1.0;
  while (mass(hi) > 1.0) hi *= 2.0;
  for (int it = 0; it < 100; ++it) {
    double mid = 0.5 * (lo + hi);
    (mass(mid) > 1.0 ? lo : hi) = mid;
    if (hi - lo <= 1e-15 * hi) break;
  }
  Vector x(z.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) x[i] = (z[i] < 0 ? -1.0 : 1.0) * coord(std::abs(z[i]), hi);
  return x;
}

// Euclidean projection onto the l1 unit ball (sort-based).
Vector project_l1_ball(const Vector& z) {
  if (z.lpNorm<1>() <= 1.0) return z;
  std::vector<double> u(z.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) u[i] = std::abs(z[i]);
  std::sort(u.begin(), u.end(), std::greater<>());
  double cum = 0.0, theta = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    cum += u[k];
    double t = (cum - 1.0) / static_cast<double>(k + 1);
    if (u[k] - t > 0.0) theta = t;
  }
  Vector x(z.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    x[i] = (z[i] < 0 ? -1.0 : 1.0) * std::max(std::abs(z[i]) - theta, 0.0);
  }
  return x;
}

MarginSolution inseparable(int dim) {
  MarginSolution s;
  s.y = Vector::Zero(dim);
  s.x_plus = Vector::Zero(dim);
  s.x_minus = Vector::Zero(dim);
  return s;
}

MarginSolution solve_l2(const PointSetPair& sets, const SolverOptions& opts, const Corral* warm) {
  NearestPoints np = nearest_points_convex_hulls(sets, opts.tol, warm, opts.max_iterations);
  Vector diff = np.x_plus - np.x_minus;
  double dist = diff.norm();
  if (dist / 2.0 <= 10.0 * opts.tol) {
    MarginSolution s = inseparable(sets.dim());
    s.x_plus = np.x_plus;
    s.x_minus = np.x_minus;
    s.corral = np.corral;
    return s;
  }
  MarginSolution s;
  s.y = diff / dist;
  s.d = dist / 2.0;
  s.b = -s.y.dot(np.x_plus + np.x_minus) / 2.0;
  s.x_plus = np.x_plus;
  s.x_minus = np.x_minus;
  s.separable = true;
  s.corral = std::move(np.corral);
  return s;
}

double half_gap(const Vector& y, const PointSetPair& sets) {
  Extremes e = extremes(y, sets);
  return 0.5 * (e.min_pos - e.max_neg);
}

MarginSolution solve_supergradient(const PointSetPair& sets, const CostModel& m, const SolverOptions& opts) {
  const int dim = sets.dim();
  // Start from the l2 direction rescaled into the dual ball.
  NearestPoints np = nearest_points_convex_hulls(sets, std::max(opts.tol, 1e-12), nullptr, opts.max_iterations);
  Vector y = np.x_plus - np.x_minus;
  double yn = m.dual_norm(y);
  if (yn > 0.0) y /= yn;

  double radius = 0.0;  // l2 radius of the dual ball
  switch (m.norm_kind().type()) {
    case NormType::L1: radius = std::sqrt(static_cast<double>(dim)); break;
    case NormType::WeightedL1: radius = m.norm_kind().weights().norm(); break;
    default: radius = 1.0; break;
  }
  if (m.norm_kind().type() == NormType::Lp && m.norm_kind().q() > 2.0) {
    radius = std::pow(static_cast<double>(dim), 0.5 - 1.0 / m.norm_kind().q());
  }

  Vector best = y;
  double best_val = half_gap(y, sets);
  double window_start_val = best_val;
  int since_window = 0;
  for (int k = 1; k <= opts.max_iterations; ++k) {
    Extremes e = extremes(y, sets);
    Vector g = 0.5 * (sets.positives[e.argmin_pos] - sets.negatives[e.argmax_neg]);
    double gn = g.norm();
    if (gn == 0.0) break;
    y = project_dual_ball(m, y + (radius / (gn * std::sqrt(static_cast<double>(k)))) * g);
    double val = half_gap(y, sets);
    if (val > best_val) {
      best_val = val;
      best = y;
    }
    if (++since_window >= opts.patience) {
      if (best_val - window_start_val < opts.tol) break;
      window_start_val = best_val;
      since_window = 0;
    }
  }

  double bn = m.dual_norm(best);
  if (!(best_val > 0.0) || bn == 0.0) return inseparable(dim);
  best /= bn;
  MarginSolution s;
  s.y = best;
  s.b = best_intercept(best, sets);
  s.d = margin_h(best, s.b, sets);
  if (s.d <= 10.0 * opts.tol) return inseparable(dim);
  Extremes e = extremes(best, sets);
  s.x_plus = sets.positives[e.argmin_pos];
  s.x_minus = sets.negatives[e.argmax_neg];
  s.separable = true;
  return s;
}

}  // namespace

int PointSetPair::dim() const {
  if (!positives.empty()) return static_cast<int>(positives.front().size());
  if (!negatives.empty()) return static_cast<int>(negatives.front().size());
  return 0;
}

void PointSetPair::add(const Vector& x, int label) {
  if (label != 1 && label != -1) throw InvalidArgument("label must be -1 or +1");
  int d = dim();
  if (d != 0 && x.size() != d) throw InvalidArgument("dimension mismatch in point pool");
  (label == 1 ? positives : negatives).push_back(x);
}

double margin_h(const Vector& y, double b, const PointSetPair& sets) {
  check_nonempty(sets);
  Extremes e = extremes(y, sets);
  return std::min(e.min_pos + b, -e.max_neg - b);
}

double margin_h_alternate(const Vector& y, double b, const PointSetPair& sets) {
  check_nonempty(sets);
  Extremes e = extremes(y, sets);
  return 0.5 * (e.min_pos - e.max_neg) - std::abs(b + 0.5 * (e.min_pos + e.max_neg));
}

double best_intercept(const Vector& y, const PointSetPair& sets) {
  check_nonempty(sets);
  Extremes e = extremes(y, sets);
  return -0.5 * (e.min_pos + e.max_neg);
}

NearestPoints nearest_points_convex_hulls(const PointSetPair& sets, double tol, const Corral* warm_start,
                                          int max_iterations) {
  check_nonempty(sets);
  if (!(tol > 0.0)) throw InvalidArgument("tol must be positive");
  const int dim = sets.dim();
  for (const auto& v : sets.positives) {
    if (v.size() != dim) throw InvalidArgument("dimension mismatch in point sets");
  }
  for (const auto& v : sets.negatives) {
    if (v.size() != dim) throw InvalidArgument("dimension mismatch in point sets");
  }

  Corral c = initial_corral(sets, warm_start);
  std::vector<Vector> s;
  for (std::size_t k = 0; k < c.weight.size(); ++k) s.push_back(vertex(sets, c.pos[k], c.neg[k]));

  NearestPoints out;
  double prev_norm2 = std::numeric_limits<double>::infinity();
  for (int it = 0;; ++it) {
    Vector x = combine(sets, c, &out.x_plus, &out.x_minus);
    double norm2 = x.squaredNorm();
    double dist = std::sqrt(norm2);
    out.iterations = it;
    if (dist <= tol) {
      out.gap = dist;
      break;
    }
    Extremes e = extremes(x, sets);
    double xv = e.min_pos - e.max_neg;  // min over P - N of x'u
    out.gap = dist - std::max(0.0, xv / dist);
    if (out.gap <= tol) break;
    bool in_corral = false;
    for (std::size_t k = 0; k < c.weight.size(); ++k) {
      if (c.pos[k] == e.argmin_pos && c.neg[k] == e.argmax_neg) in_corral = true;
    }
    // No further progress is possible in floating point.
    if (in_corral || !(norm2 < prev_norm2)) break;
    if (it >= max_iterations) {
      throw SolverError("nearest_points_convex_hulls: no convergence after " + std::to_string(max_iterations) +
                        " iterations (gap " + std::to_string(out.gap) + ")");
    }
    prev_norm2 = norm2;

    c.pos.push_back(e.argmin_pos);
    c.neg.push_back(e.argmax_neg);
    c.weight.push_back(0.0);
    s.push_back(vertex(sets, e.argmin_pos, e.argmax_neg));

    // Minor cycle: move toward the affine minimizer until it lies in the simplex.
    for (std::size_t minor = 0; minor < 4 * (static_cast<std::size_t>(dim) + 2) + s.size(); ++minor) {
      std::vector<double> a = affine_minimizer(s);
      bool interior = true;
      for (double ak : a) interior = interior && ak > 0.0;
      if (interior) {
        c.weight = a;
        break;
      }
      double theta = 1.0;
      for (std::size_t k = 0; k < a.size(); ++k) {
        if (a[k] <= 0.0) theta = std::min(theta, c.weight[k] / (c.weight[k] - a[k]));
      }
      for (std::size_t k = 0; k < a.size(); ++k) c.weight[k] = (1.0 - theta) * c.weight[k] + theta * a[k];
      drop_zero_weights(c, s, 1e-15);
      if (s.size() <= 1) {
        if (!c.weight.empty()) c.weight[0] = 1.0;
        break;
      }
    }
  }
  out.corral = std::move(c);
  return out;
}

Vector project_dual_ball(const CostModel& m, const Vector& y) {
  m.check_dim(y);
  switch (m.norm_kind().type()) {
    case NormType::L2: {
      double n = y.norm();
      return n > 1.0 ? Vector(y / n) : y;
    }
    case NormType::L1: return y.cwiseMax(-1.0).cwiseMin(1.0);
    case NormType::WeightedL1: {
      const Vector& w = m.norm_kind().weights();
      return y.cwiseMax(-w).cwiseMin(w);
    }
    case NormType::LInf: return project_l1_ball(y);
    case NormType::Lp: return project_lq_ball(y, m.norm_kind().q());
  }
  return y;
}

MarginSolution solve_max_margin(const PointSetPair& sets, const CostModel& m, const SolverOptions& opts,
                                const Corral* warm_start) {
  check_nonempty(sets);
  if (sets.dim() != m.dim()) throw InvalidArgument("point dimension does not match cost model");
  if (!(opts.tol > 0.0)) throw InvalidArgument("tol must be positive");
  if (m.norm_kind().type() == NormType::L2) return solve_l2(sets, opts, warm_start);
  return solve_supergradient(sets, m, opts);
}

bool incremental_check(const MarginSolution& sol, const Vector& new_point, int new_label) {
  if (!sol.separable) return false;
  return new_label * (sol.y.dot(new_point) + sol.b) >= sol.d - kGeomEps;
}

}  // namespace stratclass
