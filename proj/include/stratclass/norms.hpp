#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <string_view>

namespace stratclass {

using Vector = Eigen::VectorXd;

/// Tolerance for boundary tests that are exact equalities in real arithmetic.
inline constexpr double kGeomEps = 1e-9;

/// Raised for malformed inputs (dimension mismatch, bad tokens, invalid parameters).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class NormType { L2, L1, LInf, Lp, WeightedL1 };

/// Tagged norm choice. Lp requires 1 < p < inf, WeightedL1 positive weights.
class NormKind {
 public:
  static NormKind l2();
  static NormKind l1();
  static NormKind linf();
  static NormKind lp(double p);
  static NormKind weighted_l1(Vector weights);

  /// Parses "l2", "l1", "linf", "lp:<p>" or "wl1:<w1,...,wd>".
  static NormKind parse(std::string_view token);
  std::string token() const;

  NormType type() const { return type_; }
  double p() const { return p_; }
  /// Conjugate exponent of p (only meaningful for Lp).
  double q() const { return q_; }
  const Vector& weights() const { return weights_; }

 private:
  NormKind(NormType t, double p, Vector w);
  NormType type_ = NormType::L2;
  double p_ = 2.0;
  double q_ = 2.0;
  Vector weights_;
};

/// Cost c*||x - A|| shared by agents and learner.
class CostModel {
 public:
  CostModel(NormKind norm, double c, int dim);

  const NormKind& norm_kind() const { return norm_; }
  double c() const { return c_; }
  int dim() const { return dim_; }
  /// Manipulation budget radius 2/c.
  double budget() const { return 2.0 / c_; }
  /// True for L2 and Lp, where the optimal classifier is unique.
  bool strictly_convex() const;

  double norm(const Vector& x) const;
  double dual_norm(const Vector& y) const;
  /// v(y): maximizer of y'w over the unit ball, v(0) = 0. Ties go to the
  /// lowest coordinate index; zero coordinates take sign +.
  Vector manipulation_direction(const Vector& y) const;
  /// C = max over y of ||v(y)||_2.
  double l2_envelope_constant() const;

  void check_dim(const Vector& x) const;

 private:
  NormKind norm_;
  double c_;
  int dim_;
};

}  // namespace stratclass
