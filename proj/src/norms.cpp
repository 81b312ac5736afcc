#include "stratclass/norms.hpp"

#include <cmath>
#include <sstream>
#include <vector>

namespace stratclass {

namespace {

double parse_double(std::string_view s, std::string_view what) {
  std::string str(s);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(str, &used);
  } catch (const std::exception&) {
    throw InvalidArgument("cannot parse " + std::string(what) + " from '" + str + "'");
  }
  if (used != str.size()) {
    throw InvalidArgument("trailing characters in " + std::string(what) + " '" + str + "'");
  }
  return v;
}

double sign_of(double x) { return x < 0.0 ? -1.0 : 1.0; }

// Index of the first maximal |y_i| / scale_i.
Eigen::Index first_argmax_ratio(const Vector& y, const Vector* scale) {
  Eigen::Index best = 0;
  double best_val = -1.0;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    double v = std::abs(y[i]);
    if (scale) v /= (*scale)[i];
    if (v > best_val) {
      best_val = v;
      best = i;
    }
  }
  return best;
}

double lp_norm(const Vector& x, double p) {
  double m = x.cwiseAbs().maxCoeff();
  if (m == 0.0) return 0.0;
  double s = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) s += std::pow(std::abs(x[i]) / m, p);
  return m * std::pow(s, 1.0 / p);
}

}  // namespace

NormKind::NormKind(NormType t, double p, Vector w) : type_(t), p_(p), weights_(std::move(w)) {
  q_ = (t == NormType::Lp) ? p / (p - 1.0) : (t == NormType::L2 ? 2.0 : 0.0);
}

NormKind NormKind::l2() { return NormKind(NormType::L2, 2.0, Vector()); }
NormKind NormKind::l1() { return NormKind(NormType::L1, 1.0, Vector()); }
NormKind NormKind::linf() { return NormKind(NormType::LInf, INFINITY, Vector()); }

NormKind NormKind::lp(double p) {
  if (!(p > 1.0) || !std::isfinite(p)) throw InvalidArgument("lp norm requires 1 < p < inf");
  return NormKind(NormType::Lp, p, Vector());
}

NormKind NormKind::weighted_l1(Vector weights) {
  if (weights.size() == 0) throw InvalidArgument("wl1 norm requires at least one weight");
  for (Eigen::Index i = 0; i < weights.size(); ++i) {
    if (!(weights[i] > 0.0) || !std::isfinite(weights[i])) {
      throw InvalidArgument("wl1 weights must be positive and finite");
    }
  }
  return NormKind(NormType::WeightedL1, 1.0, std::move(weights));
}

NormKind NormKind::parse(std::string_view token) {
  if (token == "l2") return l2();
  if (token == "l1") return l1();
  if (token == "linf") return linf();
  if (token.starts_with("lp:")) return lp(parse_double(token.substr(3), "lp exponent"));
  if (token.starts_with("wl1:")) {
    std::vector<double> w;
    std::string_view rest = token.substr(4);
    while (true) {
      auto comma = rest.find(',');
      w.push_back(parse_double(rest.substr(0, comma), "wl1 weight"));
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
    return weighted_l1(Eigen::Map<Vector>(w.data(), static_cast<Eigen::Index>(w.size())));
  }
  throw InvalidArgument("unknown norm token '" + std::string(token) + "'");
}

std::string NormKind::token() const {
  std::ostringstream os;
  os.precision(17);
  switch (type_) {
    case NormType::L2: return "l2";
    case NormType::L1: return "l1";
    case NormType::LInf: return "linf";
    case NormType::Lp: os << "lp:" << p_; return os.str();
    case NormType::WeightedL1:
      os << "wl1:";
      for (Eigen::Index i = 0; i < weights_.size(); ++i) os << (i ? "," : "") << weights_[i];
      return os.str();
  }
  return "";
}

CostModel::CostModel(NormKind norm, double c, int dim) : norm_(std::move(norm)), c_(c), dim_(dim) {
  if (!(c > 0.0) || !std::isfinite(c)) throw InvalidArgument("cost scale c must be positive and finite");
  if (dim <= 0) throw InvalidArgument("dimension must be positive");
  if (norm_.type() == NormType::WeightedL1 && norm_.weights().size() != dim) {
    throw InvalidArgument("wl1 weight count does not match dimension");
  }
}

bool CostModel::strictly_convex() const {
  return norm_.type() == NormType::L2 || norm_.type() == NormType::Lp;
}

void CostModel::check_dim(const Vector& x) const {
  if (x.size() != dim_) {
    throw InvalidArgument("dimension mismatch: expected " + std::to_string(dim_) + ", got " +
                          std::to_string(x.size()));
  }
}

double CostModel::norm(const Vector& x) const {
  check_dim(x);
  switch (norm_.type()) {
    case NormType::L2: return x.norm();
    case NormType::L1: return x.lpNorm<1>();
    case NormType::LInf: return x.lpNorm<Eigen::Infinity>();
    case NormType::Lp: return lp_norm(x, norm_.p());
    case NormType::WeightedL1: return norm_.weights().dot(x.cwiseAbs());
  }
  return 0.0;
}

double CostModel::dual_norm(const Vector& y) const {
  check_dim(y);
  switch (norm_.type()) {
    case NormType::L2: return y.norm();
    case NormType::L1: return y.lpNorm<Eigen::Infinity>();
    case NormType::LInf: return y.lpNorm<1>();
    case NormType::Lp: return lp_norm(y, norm_.q());
    case NormType::WeightedL1: return y.cwiseAbs().cwiseQuotient(norm_.weights()).maxCoeff();
  }
  return 0.0;
}

Vector CostModel::manipulation_direction(const Vector& y) const {
  check_dim(y);
  Vector v = Vector::Zero(dim_);
  if ((y.array() == 0.0).all()) return v;
  switch (norm_.type()) {
    case NormType::L2: v = y / y.norm(); break;
    case NormType::L1: {
      auto k = first_argmax_ratio(y, nullptr);
      v[k] = sign_of(y[k]);
      break;
    }
    case NormType::WeightedL1: {
      auto k = first_argmax_ratio(y, &norm_.weights());
      v[k] = sign_of(y[k]) / norm_.weights()[k];
      break;
    }
    case NormType::LInf:
      for (int i = 0; i < dim_; ++i) v[i] = sign_of(y[i]);
      break;
    case NormType::Lp: {
      // v_i = sign(y_i) |y_i|^(q-1) / ||y||_q^(q-1), computed on y scaled by its max entry.
      double q = norm_.q();
      Vector u = y / y.cwiseAbs().maxCoeff();
      double nq = lp_norm(u, q);
      for (int i = 0; i < dim_; ++i) {
        v[i] = sign_of(u[i]) * std::pow(std::abs(u[i]) / nq, q - 1.0);
      }
      break;
    }
  }
  return v;
}

double CostModel::l2_envelope_constant() const {
  switch (norm_.type()) {
    case NormType::L2:
    case NormType::L1: return 1.0;
    case NormType::LInf: return std::sqrt(static_cast<double>(dim_));
    case NormType::Lp:
      // v(y) sweeps the unit lp sphere; its largest l2 norm is d^(1/2-1/p) for p>2, else 1.
      return norm_.p() > 2.0 ? std::pow(static_cast<double>(dim_), 0.5 - 1.0 / norm_.p()) : 1.0;
    case NormType::WeightedL1: return 1.0 / norm_.weights().minCoeff();
  }
  return 0.0;
}

}  // namespace stratclass
