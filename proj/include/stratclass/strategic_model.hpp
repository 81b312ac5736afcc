#pragma once

#include "stratclass/norms.hpp"
#include "stratclass/rng.hpp"

namespace stratclass {

/// Linear classifier (y, b); predictions use the offset boundary y'x + b - 2||y||_*/c.
struct Classifier {
  Vector y;
  double b = 0.0;
};

struct Agent {
  Vector features;
  int label = 1;  // -1 or +1
};

/// One round of the protocol as seen from both sides.
struct Interaction {
  Vector response;
  Vector proxy;
  int predicted = 1;
  bool manipulated = false;  // response != features, exact comparison
  bool mistaken = false;
};

/// sign(0) = +1.
inline int sign_label(double v) { return v < 0.0 ? -1 : 1; }

/// (y'x + b) / ||y||_*, the signed distance in the cost norm. Requires y != 0.
double normalized_score(const Classifier& cl, const CostModel& m, const Vector& x);

/// sign(y'x + b - 2||y||_*/c); sign(b) when y = 0. Scores within kGeomEps of
/// the offset boundary (after normalizing by ||y||_*) count as on it.
int predict(const Classifier& cl, const CostModel& m, const Vector& x);

/// Best response of the agent to the classifier.
Vector respond(const Agent& a, const Classifier& cl, const CostModel& m);

/// Learner-side reconstruction: shift negative boundary points back by (2/c) v(y).
Vector proxy_from_response(const Vector& r, int true_label, const Classifier& cl, const CostModel& m);

/// respond() plus N(0, sigma^2 I) observation noise.
Vector respond_noisy(const Agent& a, const Classifier& cl, const CostModel& m, double sigma, Rng& rng);

/// Full round without noise: response, prediction, proxy and flags.
Interaction interact(const Agent& a, const Classifier& cl, const CostModel& m);

void check_label(int label);

}  // namespace stratclass
