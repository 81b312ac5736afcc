#pragma once

#include "stratclass/maxmargin.hpp"
#include "stratclass/strategic_model.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace stratclass {

enum class ConeKind { FullSpace, ZeroIntercept, NonnegWeights };

/// "full", "zero-b" or "nonneg".
ConeKind parse_cone(std::string_view token);
std::string cone_token(ConeKind k);

/// Projection of the augmented vector q = (y, b) onto the cone.
Vector project_cone(ConeKind k, const Vector& q);

/// Step sizes gamma_t, t >= 1: 1/sqrt(t) or a constant.
struct StepSchedule {
  enum class Kind { InvSqrt, Constant };
  Kind kind = Kind::InvSqrt;
  double gamma = 1.0;

  double at(long t) const;
  /// "invsqrt" or "const:<gamma>".
  static StepSchedule parse(std::string_view token);
  std::string token() const;
};

/// What the learner reports back for one observed response.
struct Feedback {
  int predicted = 1;
  Vector proxy;
  bool mistaken = false;
  /// The classifier changed as a result of this observation.
  bool updated = false;
};

/// observe classifier -> agent responds -> learner predicts -> label -> update.
class Learner {
 public:
  explicit Learner(CostModel m) : m_(std::move(m)) {}
  virtual ~Learner() = default;

  const CostModel& cost() const { return m_; }
  virtual const Classifier& classifier() const = 0;
  virtual Feedback observe(const Vector& response, int label) = 0;
  /// Current optimal margin d_t when the learner tracks one.
  virtual std::optional<double> margin() const { return std::nullopt; }
  virtual bool initializing() const { return false; }
  virtual std::string_view name() const = 0;
  /// Notable events (for example an inseparable fallback) since the last call.
  std::vector<std::string> take_events() { return std::exchange(events_, {}); }

 protected:
  CostModel m_;
  std::vector<std::string> events_;
};

/// Initialization: y = 0, b flips until both labels have been seen.
class InitScheme {
 public:
  explicit InitScheme(int dim);
  const Classifier& classifier() const { return cl_; }
  bool done() const { return !pool_.positives.empty() && !pool_.negatives.empty(); }
  Feedback observe(const Vector& response, int label);
  const PointSetPair& pool() const { return pool_; }
  int mistakes() const { return mistakes_; }

 private:
  Classifier cl_;
  PointSetPair pool_;
  int mistakes_ = 0;
};

struct InitResult {
  PointSetPair pool;
  Classifier classifier;
  MarginSolution solution;
  int mistakes = 0;
  long consumed = 0;
};

using AgentSource = std::function<std::optional<Agent>()>;

/// Runs the initialization scheme on the stream and solves the first max-margin problem.
InitResult init_scheme(const AgentSource& stream, const CostModel& m, const SolverOptions& opts = {});

/// Strategic max-margin (smm).
class SmmLearner : public Learner {
 public:
  SmmLearner(CostModel m, SolverOptions opts = {}, bool force_resolve = false);

  const Classifier& classifier() const override { return initializing() ? init_.classifier() : cl_; }
  Feedback observe(const Vector& response, int label) override;
  std::optional<double> margin() const override;
  bool initializing() const override { return !init_.done(); }
  std::string_view name() const override { return "smm"; }

  const PointSetPair& pool() const { return initializing() ? init_.pool() : pool_; }
  const MarginSolution& solution() const { return sol_; }
  int init_mistakes() const { return init_.mistakes(); }
  long resolves() const { return resolves_; }

 private:
  void resolve(bool warm);

  SolverOptions opts_;
  bool force_resolve_;
  InitScheme init_;
  PointSetPair pool_;
  MarginSolution sol_;
  Classifier cl_;
  long steps_ = 0;
  long resolves_ = 0;
};

/// gradsmm: averaged projected subgradient steps on the margin; L2 costs only.
class GradSmmLearner : public Learner {
 public:
  GradSmmLearner(CostModel m, StepSchedule schedule = {}, SolverOptions opts = {});

  const Classifier& classifier() const override { return initializing() ? init_.classifier() : cl_; }
  Feedback observe(const Vector& response, int label) override;
  bool initializing() const override { return !init_.done(); }
  std::string_view name() const override { return "gradsmm"; }

  const PointSetPair& pool() const { return initializing() ? init_.pool() : pool_; }
  const Vector& z() const { return z_; }
  int init_mistakes() const { return init_.mistakes(); }

 private:
  StepSchedule schedule_;
  SolverOptions opts_;
  InitScheme init_;
  PointSetPair pool_;
  Classifier cl_;
  Vector z_;
  Vector weighted_sum_;
  double step_sum_ = 0.0;
  long t_ = 1;
};

/// Projected strategic perceptron on q = (y, b).
class PerceptronLearner : public Learner {
 public:
  PerceptronLearner(CostModel m, ConeKind cone = ConeKind::FullSpace, double gamma = 1.0);

  const Classifier& classifier() const override { return cl_; }
  Feedback observe(const Vector& response, int label) override;
  std::string_view name() const override { return "perceptron"; }

  const Vector& q() const { return q_; }
  ConeKind cone() const { return cone_; }

 private:
  ConeKind cone_;
  double gamma_;
  Vector q_;
  Classifier cl_;
};

struct LearnerConfig {
  std::string algorithm = "smm";  // smm | gradsmm | perceptron
  ConeKind cone = ConeKind::FullSpace;
  double gamma = 1.0;
  StepSchedule schedule;
  SolverOptions solver;
  bool force_resolve = false;
};

std::unique_ptr<Learner> make_learner(const LearnerConfig& cfg, const CostModel& m);

/// One protocol round: the agent best-responds to the declared classifier
/// (plus observation noise when sigma > 0) and the learner updates.
Interaction play_round(Learner& learner, const Agent& agent, double sigma = 0.0, Rng* rng = nullptr);

}  // namespace stratclass
