#include "stratclass/harness.hpp"

#include <cmath>
#include <sstream>

namespace stratclass {

namespace {

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

std::string fmt(const Vector& v) {
  std::ostringstream os;
  os.precision(12);
  os << "(";
  for (Eigen::Index i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
  os << ")";
  return os.str();
}

class Checker {
 public:
  explicit Checker(ExampleReport& r) : r_(r) {}
  void operator()(bool ok, const std::string& what) {
    r_.checks.push_back((ok ? "PASS: " : "FAIL: ") + what);
    r_.passed = r_.passed && ok;
  }

 private:
  ExampleReport& r_;
};

std::vector<Agent> six_point_agents() {
  return {{vec({-1, 1}), 1},  {vec({0, 1}), 1},   {vec({1, 1}), 1},
          {vec({2, 1}), 1},   {vec({-1, -1}), -1}, {vec({1, -1}), -1}};
}

void truthful_max_margin(Checker& check) {
  CostModel m(NormKind::l2(), 4.0, 2);
  auto agents = six_point_agents();
  PointSetPair sets;
  for (const auto& a : agents) sets.add(a.features, a.label);
  MarginSolution sol = solve_max_margin(sets, m);
  check((sol.y - vec({0, 1})).norm() <= 1e-9 && std::abs(sol.b) <= 1e-9 && std::abs(sol.d - 1.0) <= 1e-9,
        "max-margin solution " + fmt(sol.y) + ", b=" + std::to_string(sol.b) + ", d=" + std::to_string(sol.d) +
            " equals ((0,1),0,1)");
  Classifier best{vec({0, 1}), 0.0};
  bool truthful = true, correct = true;
  for (const auto& a : agents) {
    Interaction in = interact(a, best, m);
    truthful = truthful && !in.manipulated;
    correct = correct && !in.mistaken;
  }
  check(truthful && correct, "every agent is truthful and correctly classified under ((0,1),0)");
  Classifier other{vec({1, 2}), 0.0};
  Vector r = respond(agents[0], other, m);
  Vector expect = vec({-1.2 + std::sqrt(5.0) / 10.0, 0.6 + std::sqrt(5.0) / 5.0});
  check((r - expect).cwiseAbs().maxCoeff() <= 1e-12,
        "agent (-1,1) under ((1,2),0) responds " + fmt(r) + " = (-6/5+sqrt5/10, 3/5+sqrt5/5)");
  correct = true;
  for (const auto& a : agents) correct = correct && !interact(a, other, m).mistaken;
  check(correct, "((1,2),0) classifies every manipulated response correctly");
}

void smm_stuck(Checker& check, int visits) {
  CostModel m(NormKind::l2(), std::sqrt(2.0), 2);
  Agent a1{vec({0, 1}), 1}, a2{vec({-2, 1}), 1}, a3{vec({-2, -1}), -1};
  SmmLearner learner(m);
  play_round(learner, a1);
  play_round(learner, a3);
  const Classifier expect{vec({1, 1}) / std::sqrt(2.0), 1.0 / std::sqrt(2.0)};
  Classifier start = learner.classifier();
  check((start.y - expect.y).norm() <= 1e-9 && std::abs(start.b - expect.b) <= 1e-9 &&
            std::abs(*learner.margin() - std::sqrt(2.0)) <= 1e-9,
        "after init the classifier is ((1,1)/sqrt2, 1/sqrt2) with d = sqrt2");
  long manipulations = 0, changes = 0;
  bool response_ok = true;
  for (int t = 3; t <= visits; ++t) {
    Interaction in = play_round(learner, a2);
    manipulations += in.manipulated;
    response_ok = response_ok && (in.response - vec({-1, 2})).norm() <= 1e-12;
    const Classifier& cl = learner.classifier();
    changes += (cl.y != start.y || cl.b != start.b);
  }
  check(changes == 0, "classifier unchanged for " + std::to_string(visits) + " iterations");
  check(manipulations == visits - 2,
        std::to_string(manipulations) + " manipulations of (-2,1) in " + std::to_string(visits - 2) + " visits");
  check(response_ok, "(-2,1) always reports (-1,2)");
}

void perceptron_margin(Checker& check, int visits) {
  CostModel m(NormKind::l2(), 4.0, 2);
  auto agents = six_point_agents();
  PerceptronLearner learner(m, ConeKind::FullSpace, 1.0);
  play_round(learner, agents[5]);
  Vector q1 = learner.q();
  play_round(learner, agents[3]);
  Vector q2 = learner.q();
  check(q1 == vec({-1, 1, -1}), "q1 = " + fmt(q1) + " equals ((-1,1),-1)");
  check(q2 == vec({1, 2, 0}), "q2 = " + fmt(q2) + " equals ((1,2),0)");
  long updates = 0, mistakes = 0, manip = 0;
  for (int v = 0; v < visits; ++v) {
    for (std::size_t i = 0; i < agents.size(); ++i) {
      Vector before = learner.q();
      Interaction in = play_round(learner, agents[i]);
      updates += learner.q() != before;
      mistakes += in.mistaken;
      if (i == 0) manip += in.manipulated;
    }
  }
  check(updates == 0 && mistakes == 0, "no updates and no mistakes after t = 2");
  check(manip == visits, "(-1,1) manipulates on all " + std::to_string(visits) + " visits");
  Benchmark bench{vec({0, 1}), 0.0, 1.0};
  double dist = classifier_distance(learner.classifier(), bench).value_or(0.0);
  check(dist > 0.3, "distance to ((0,1),0) is " + std::to_string(dist) + " > 0.3");

  PerceptronLearner nonneg(m, ConeKind::NonnegWeights, 1.0);
  play_round(nonneg, agents[5]);
  check(nonneg.q() == vec({0, 1, -1}), "nonnegative cone: first update gives ((0,1),-1)");
}

void l1_counterexample(Checker& check, int visits) {
  const double c = 4.0;
  CostModel m(NormKind::l1(), c, 2);
  Vector z = (2.0 / c) * vec({0.75, 0.25});
  Vector w = m.manipulation_direction(z);
  check(w == vec({1, 0}), "v(z) = e1, not parallel to z = " + fmt(z));
  Agent pz{z, 1}, nz{-z, -1}, edge{(2.0 / c) * w, -1};
  PerceptronLearner learner(m, ConeKind::ZeroIntercept, 1.0);
  play_round(learner, nz);
  check(learner.q() == vec({z[0], z[1], 0.0}), "first update sets (y,b) = (z,0)");
  long edge_mistakes = 0, changes = 0;
  bool proxy_zero = true;
  for (int v = 0; v < visits; ++v) {
    for (const Agent* a : {&pz, &nz, &edge}) {
      Interaction in = play_round(learner, *a);
      if (a == &edge) {
        edge_mistakes += in.mistaken;
        proxy_zero = proxy_zero && in.proxy.norm() == 0.0;
      }
      changes += learner.classifier().y != z;
    }
  }
  check(edge_mistakes == visits,
        "2w/c mispredicted on " + std::to_string(edge_mistakes) + " of " + std::to_string(visits) + " visits");
  check(proxy_zero, "the proxy of 2w/c is always 0");
  check(changes == 0, "y_t = z throughout");
}

}  // namespace

std::vector<std::string> example_names() {
  return {"truthful-max-margin", "smm-stuck", "perceptron-margin", "l1-counterexample"};
}

std::string ExampleReport::text() const {
  std::ostringstream os;
  os << name << ": " << (passed ? "PASS" : "FAIL") << "\n";
  for (const auto& c : checks) os << "  " << c << "\n";
  return os.str();
}

ExampleReport reproduce_example(const std::string& name, int visits) {
  if (visits < 3) throw InvalidArgument("reproduce_example needs at least 3 visits");
  ExampleReport rep;
  rep.name = name;
  Checker check(rep);
  if (name == "truthful-max-margin") truthful_max_margin(check);
  else if (name == "smm-stuck") smm_stuck(check, visits);
  else if (name == "perceptron-margin") perceptron_margin(check, visits);
  else if (name == "l1-counterexample") l1_counterexample(check, visits);
  else throw InvalidArgument("unknown example '" + name + "'");
  return rep;
}

}  // namespace stratclass
