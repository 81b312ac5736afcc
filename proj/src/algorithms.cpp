#include "stratclass/algorithms.hpp"

#include <cmath>
#include <string>

namespace stratclass {

ConeKind parse_cone(std::string_view token) {
  if (token == "full") return ConeKind::FullSpace;
  if (token == "zero-b") return ConeKind::ZeroIntercept;
  if (token == "nonneg") return ConeKind::NonnegWeights;
  throw InvalidArgument("unknown cone '" + std::string(token) + "'");
}

std::string cone_token(ConeKind k) {
  switch (k) {
    case ConeKind::FullSpace: return "full";
    case ConeKind::ZeroIntercept: return "zero-b";
    case ConeKind::NonnegWeights: return "nonneg";
  }
  return "";
}

Vector project_cone(ConeKind k, const Vector& q) {
  if (q.size() < 2) throw InvalidArgument("augmented vector needs at least one weight and an intercept");
  Vector out = q;
  const Eigen::Index d = q.size() - 1;
  switch (k) {
    case ConeKind::FullSpace: break;
    case ConeKind::ZeroIntercept: out[d] = 0.0; break;
    case ConeKind::NonnegWeights: out.head(d) = q.head(d).cwiseMax(0.0); break;
  }
  return out;
}

double StepSchedule::at(long t) const {
  if (t < 1) throw InvalidArgument("step index starts at 1");
  return kind == Kind::InvSqrt ? 1.0 / std::sqrt(static_cast<double>(t)) : gamma;
}

StepSchedule StepSchedule::parse(std::string_view token) {
  StepSchedule s;
  if (token == "invsqrt") return s;
  if (token.starts_with("const:")) {
    s.kind = Kind::Constant;
    try {
      s.gamma = std::stod(std::string(token.substr(6)));
    } catch (const std::exception&) {
      throw InvalidArgument("bad constant step '" + std::string(token) + "'");
    }
    if (!(s.gamma > 0.0)) throw InvalidArgument("constant step must be positive");
    return s;
  }
  throw InvalidArgument("unknown step schedule '" + std::string(token) + "'");
}

std::string StepSchedule::token() const {
  return kind == Kind::InvSqrt ? "invsqrt" : "const:" + std::to_string(gamma);
}

InitScheme::InitScheme(int dim) {
  cl_.y = Vector::Zero(dim);
  cl_.b = 1.0;
}

Feedback InitScheme::observe(const Vector& response, int label) {
  check_label(label);
  if (response.size() != cl_.y.size()) throw InvalidArgument("dimension mismatch in response");
  Feedback fb;
  fb.predicted = sign_label(cl_.b);
  fb.mistaken = fb.predicted != label;
  fb.proxy = response;
  if (fb.mistaken) ++mistakes_;
  pool_.add(response, label);
  double old_b = cl_.b;
  if (pool_.positives.empty()) {
    cl_.b = -1.0;
  } else if (pool_.negatives.empty()) {
    cl_.b = 1.0;
  }
  fb.updated = cl_.b != old_b;
  return fb;
}

InitResult init_scheme(const AgentSource& stream, const CostModel& m, const SolverOptions& opts) {
  InitScheme init(m.dim());
  InitResult out;
  while (!init.done()) {
    std::optional<Agent> a = stream();
    if (!a) throw InvalidArgument("agent stream exhausted before both labels were seen");
    m.check_dim(a->features);
    init.observe(respond(*a, init.classifier(), m), a->label);
    ++out.consumed;
  }
  out.pool = init.pool();
  out.mistakes = init.mistakes();
  out.solution = solve_max_margin(out.pool, m, opts);
  out.classifier = {out.solution.y, out.solution.b};
  return out;
}

SmmLearner::SmmLearner(CostModel m, SolverOptions opts, bool force_resolve)
    : Learner(std::move(m)), opts_(opts), force_resolve_(force_resolve), init_(m_.dim()) {}

std::optional<double> SmmLearner::margin() const {
  if (initializing()) return std::nullopt;
  return sol_.d;
}

void SmmLearner::resolve(bool warm) {
  bool was_separable = sol_.separable || resolves_ == 0;
  sol_ = solve_max_margin(pool_, m_, opts_, warm ? &sol_.corral : nullptr);
  ++resolves_;
  cl_ = {sol_.y, sol_.b};
  if (!sol_.separable && was_separable) {
    events_.push_back("smm: proxy pools inseparable at step " + std::to_string(steps_) +
                      "; classifier falls back to (0,0)");
  }
}

Feedback SmmLearner::observe(const Vector& response, int label) {
  ++steps_;
  if (initializing()) {
    Feedback fb = init_.observe(response, label);
    if (init_.done()) {
      pool_ = init_.pool();
      resolve(false);
      fb.updated = true;
    }
    return fb;
  }
  Feedback fb;
  fb.predicted = predict(cl_, m_, response);
  fb.mistaken = fb.predicted != label;
  fb.proxy = proxy_from_response(response, label, cl_, m_);
  pool_.add(fb.proxy, label);
  // Hulls only grow, so an inseparable pool stays inseparable.
  if (!sol_.separable) return fb;
  if (!force_resolve_ && incremental_check(sol_, fb.proxy, label)) return fb;
  Vector old_y = cl_.y;
  double old_b = cl_.b;
  resolve(true);
  fb.updated = cl_.y != old_y || cl_.b != old_b;
  return fb;
}

GradSmmLearner::GradSmmLearner(CostModel m, StepSchedule schedule, SolverOptions opts)
    : Learner(std::move(m)), schedule_(schedule), opts_(opts), init_(m_.dim()) {
  if (m_.norm_kind().type() != NormType::L2) throw InvalidArgument("gradsmm requires an l2 cost");
}

Feedback GradSmmLearner::observe(const Vector& response, int label) {
  if (initializing()) {
    Feedback fb = init_.observe(response, label);
    if (init_.done()) {
      pool_ = init_.pool();
      MarginSolution sol = solve_max_margin(pool_, m_, opts_);
      cl_ = {sol.y, sol.b};
      z_ = sol.y;
      t_ = 1;
      step_sum_ = schedule_.at(1);
      weighted_sum_ = step_sum_ * z_;
      fb.updated = true;
      if (!sol.separable) events_.push_back("gradsmm: initial pools inseparable; starting from y = 0");
    }
    return fb;
  }
  Feedback fb;
  fb.predicted = predict(cl_, m_, response);
  fb.mistaken = fb.predicted != label;
  fb.proxy = proxy_from_response(response, label, cl_, m_);
  pool_.add(fb.proxy, label);

  // Lowest insertion index wins ties.
  std::size_t ip = 0, in = 0;
  double best_p = z_.dot(pool_.positives[0]), best_n = z_.dot(pool_.negatives[0]);
  for (std::size_t i = 1; i < pool_.positives.size(); ++i) {
    double v = z_.dot(pool_.positives[i]);
    if (v < best_p) {
      best_p = v;
      ip = i;
    }
  }
  for (std::size_t j = 1; j < pool_.negatives.size(); ++j) {
    double v = z_.dot(pool_.negatives[j]);
    if (v > best_n) {
      best_n = v;
      in = j;
    }
  }
  z_ += schedule_.at(t_) * (pool_.positives[ip] - pool_.negatives[in]);
  double zn = z_.norm();
  if (zn > 1.0) z_ /= zn;
  ++t_;
  double g = schedule_.at(t_);
  step_sum_ += g;
  weighted_sum_ += g * z_;

  Vector old_y = cl_.y;
  double old_b = cl_.b;
  cl_.y = weighted_sum_ / step_sum_;
  cl_.b = best_intercept(cl_.y, pool_);
  fb.updated = cl_.y != old_y || cl_.b != old_b;
  return fb;
}

PerceptronLearner::PerceptronLearner(CostModel m, ConeKind cone, double gamma)
    : Learner(std::move(m)), cone_(cone), gamma_(gamma), q_(Vector::Zero(m_.dim() + 1)) {
  if (!(gamma > 0.0)) throw InvalidArgument("perceptron step gamma must be positive");
  cl_.y = Vector::Zero(m_.dim());
  cl_.b = 0.0;
}

Feedback PerceptronLearner::observe(const Vector& response, int label) {
  Feedback fb;
  fb.predicted = predict(cl_, m_, response);
  fb.mistaken = fb.predicted != label;
  fb.proxy = proxy_from_response(response, label, cl_, m_);
  if (!fb.mistaken) return fb;
  Vector xi(q_.size());
  xi.head(m_.dim()) = fb.proxy;
  xi[m_.dim()] = 1.0;
  Vector next = project_cone(cone_, q_ + (gamma_ * label) * xi);
  fb.updated = next != q_;
  q_ = next;
  cl_.y = q_.head(m_.dim());
  cl_.b = q_[m_.dim()];
  return fb;
}

std::unique_ptr<Learner> make_learner(const LearnerConfig& cfg, const CostModel& m) {
  if (cfg.algorithm == "smm") return std::make_unique<SmmLearner>(m, cfg.solver, cfg.force_resolve);
  if (cfg.algorithm == "gradsmm") return std::make_unique<GradSmmLearner>(m, cfg.schedule, cfg.solver);
  if (cfg.algorithm == "perceptron") return std::make_unique<PerceptronLearner>(m, cfg.cone, cfg.gamma);
  throw InvalidArgument("unknown algorithm '" + cfg.algorithm + "'");
}

Interaction play_round(Learner& learner, const Agent& agent, double sigma, Rng* rng) {
  check_label(agent.label);
  const CostModel& m = learner.cost();
  Interaction out;
  Vector truth = respond(agent, learner.classifier(), m);
  out.manipulated = truth != agent.features;
  if (sigma > 0.0) {
    if (!rng) throw InvalidArgument("noisy responses need a generator");
    out.response = truth;
    for (Eigen::Index i = 0; i < out.response.size(); ++i) out.response[i] += sigma * rng->normal();
  } else {
    out.response = std::move(truth);
  }
  Feedback fb = learner.observe(out.response, agent.label);
  out.predicted = fb.predicted;
  out.mistaken = fb.mistaken;
  out.proxy = std::move(fb.proxy);
  return out;
}

}  // namespace stratclass
