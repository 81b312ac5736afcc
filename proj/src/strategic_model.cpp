#include "stratclass/strategic_model.hpp"

namespace stratclass {

namespace {

bool is_zero(const Vector& y) { return (y.array() == 0.0).all(); }

void check_classifier(const Classifier& cl, const CostModel& m) { m.check_dim(cl.y); }

}  // namespace

void check_label(int label) {
  if (label != 1 && label != -1) throw InvalidArgument("label must be -1 or +1");
}

double normalized_score(const Classifier& cl, const CostModel& m, const Vector& x) {
  return (cl.y.dot(x) + cl.b) / m.dual_norm(cl.y);
}

int predict(const Classifier& cl, const CostModel& m, const Vector& x) {
  check_classifier(cl, m);
  m.check_dim(x);
  if (is_zero(cl.y)) return sign_label(cl.b);
  double s = normalized_score(cl, m, x) - m.budget();
  return s >= -kGeomEps ? 1 : -1;
}

Vector respond(const Agent& a, const Classifier& cl, const CostModel& m) {
  check_classifier(cl, m);
  m.check_dim(a.features);
  if (is_zero(cl.y)) return a.features;
  double s = normalized_score(cl, m, a.features);
  if (s >= -kGeomEps && s < m.budget()) {
    return a.features + (m.budget() - s) * m.manipulation_direction(cl.y);
  }
  return a.features;
}

Vector proxy_from_response(const Vector& r, int true_label, const Classifier& cl, const CostModel& m) {
  check_classifier(cl, m);
  m.check_dim(r);
  check_label(true_label);
  if (is_zero(cl.y) || true_label != -1) return r;
  double s = normalized_score(cl, m, r);
  if (std::abs(s - m.budget()) <= kGeomEps) return r - m.budget() * m.manipulation_direction(cl.y);
  return r;
}

Vector respond_noisy(const Agent& a, const Classifier& cl, const CostModel& m, double sigma, Rng& rng) {
  if (!(sigma >= 0.0)) throw InvalidArgument("sigma must be nonnegative");
  Vector r = respond(a, cl, m);
  if (sigma == 0.0) return r;
  for (Eigen::Index i = 0; i < r.size(); ++i) r[i] += sigma * rng.normal();
  return r;
}

Interaction interact(const Agent& a, const Classifier& cl, const CostModel& m) {
  check_label(a.label);
  Interaction out;
  out.response = respond(a, cl, m);
  out.predicted = predict(cl, m, out.response);
  out.proxy = proxy_from_response(out.response, a.label, cl, m);
  out.manipulated = out.response != a.features;
  out.mistaken = out.predicted != a.label;
  return out;
}

}  // namespace stratclass
