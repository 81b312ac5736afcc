// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include "../support/helpers.hpp"
#include "../support/oracles.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace stratclass;
using testing_support::vec;

namespace {

constexpr int kSeeds = 50;

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;
  std::vector<std::string> failures;

  void expect(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (failures.size() < 8) failures.push_back(what);
    }
  }
  void note(const std::string& s) { notes.push_back(s); }
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

PointSetPair sets_of(const std::vector<Vector>& P, const std::vector<Vector>& N) {
  PointSetPair s;
  for (const auto& p : P) s.add(p, 1);
  for (const auto& n : N) s.add(n, -1);
  return s;
}

// ---------------------------------------------------------------------------
// 1. micro-instances

Outcome micro_instances() {
  Outcome o;
  auto start = std::chrono::steady_clock::now();
  CostModel m4(NormKind::l2(), 4.0, 2);

  Vector r = respond({vec({-1, 1}), 1}, {vec({1, 2}), 0.0}, m4);
  const double s5 = std::sqrt(5.0);
  Vector want = vec({-6.0 / 5.0 + s5 / 10.0, 3.0 / 5.0 + s5 / 5.0});
  o.expect((r - want).lpNorm<Eigen::Infinity>() <= 1e-12, "(a) respond on (-1,1) off by " + fmt((r - want).norm()));

  CostModel m1(NormKind::l2(), 1.0, 2);
  const double s2 = std::sqrt(2.0);
  MarginSolution two = solve_max_margin(sets_of({vec({0, 1})}, {vec({-2, -1})}), m1);
  o.expect((two.y - vec({1, 1}) / s2).lpNorm<Eigen::Infinity>() <= 1e-9 && std::abs(two.b - 1.0 / s2) <= 1e-9 &&
               std::abs(two.d - s2) <= 1e-9,
           "(b) two-point margin");

  PointSetPair ex1;
  for (const auto& a : testing_support::six_point_agents()) ex1.add(a.features, a.label);
  MarginSolution e1 = solve_max_margin(ex1, m1);
  o.expect((e1.y - vec({0, 1})).lpNorm<Eigen::Infinity>() <= 1e-9 && std::abs(e1.b) <= 1e-9 &&
               std::abs(e1.d - 1.0) <= 1e-9,
           "(c) six-point margin");

  PerceptronLearner p(m4, ConeKind::FullSpace, 1.0);
  play_round(p, {vec({1, -1}), -1});
  bool q1 = p.q() == vec({-1, 1, -1});
  play_round(p, {vec({2, 1}), 1});
  bool q2 = p.q() == vec({1, 2, 0});
  o.expect(q1 && q2, "(d) perceptron trace");

  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  o.expect(secs < 1.0, "runtime " + fmt(secs) + " s");
  o.note("4 instances in " + fmt(secs) + " s");
  return o;
}

// ---------------------------------------------------------------------------
// 2. counterexample regressions

Outcome counterexamples() {
  Outcome o;
  auto start = std::chrono::steady_clock::now();
  for (const char* name : {"smm-stuck", "perceptron-margin", "l1-counterexample"}) {
    ExampleReport rep = reproduce_example(name, 500);
    if (!rep.passed) {
      for (const auto& c : rep.checks)
        if (c.rfind("FAIL", 0) == 0) o.expect(false, std::string(name) + " " + c);
    }
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  o.expect(secs < 5.0, "runtime " + fmt(secs) + " s");
  o.note("3 examples, 500 visits, " + fmt(secs) + " s");
  return o;
}

// ---------------------------------------------------------------------------
// 3, 4, 8. synthetic runs shared between criteria

struct SynthRuns {
  Dataset ds;
  CostModel model{NormKind::l2(), 1.0, 1};
  RunConfig base;
  RunMetrics smm, gradsmm, perc_full, perc_zero;
  CertifyReport smm_rep, full_rep, zero_rep;
};

RunConfig synth_config(std::uint64_t seed, const std::string& alg) {
  RunConfig cfg;
  cfg.dataset.kind = DatasetSource::Kind::Synthetic;
  cfg.dataset.synth.seed = seed;
  cfg.dataset.synth.n = 2000;
  cfg.dataset.synth.d = 6;
  cfg.dataset.synth.rho = 0.02;
  cfg.budget = 0.8 * 0.02;
  cfg.T = 10000;
  cfg.seed = seed;
  cfg.learner.algorithm = alg;
  return cfg;
}

std::vector<SynthRuns> g_synth;

// Built on first use so criteria 3, 4 and 8 share one set of runs.
void ensure_synth_runs() {
  if (!g_synth.empty()) return;
  std::vector<SynthRuns> runs(kSeeds);
  for (int s = 0; s < kSeeds; ++s) {
    SynthRuns& r = runs[s];
    r.base = synth_config(static_cast<std::uint64_t>(s + 1), "smm");
    r.ds = load_dataset(r.base.dataset);
    r.model = make_cost_model(r.base, r.ds);
    r.smm = run_online(r.base, r.ds, r.model);
    r.smm_rep = certify(r.base, r.ds, r.model, &r.smm);

    RunConfig g = r.base;
    g.learner.algorithm = "gradsmm";
    r.gradsmm = run_online(g, r.ds, r.model);

    RunConfig pf = r.base;
    pf.learner.algorithm = "perceptron";
    pf.learner.cone = ConeKind::FullSpace;
    r.perc_full = run_online(pf, r.ds, r.model);
    r.full_rep = certify(pf, r.ds, r.model, &r.perc_full);

    RunConfig pz = pf;
    pz.learner.cone = ConeKind::ZeroIntercept;
    r.perc_zero = run_online(pz, r.ds, r.model);
    r.zero_rep = certify(pz, r.ds, r.model, &r.perc_zero);
  }
  g_synth = std::move(runs);
}

Outcome bound_certificates() {
  Outcome o;
  ensure_synth_runs();
  double slack_smm = 1e300, slack_full = 1e300, slack_zero = 1e300;
  for (int s = 0; s < kSeeds; ++s) {
    const SynthRuns& r = g_synth[s];
    const std::string tag = "seed " + std::to_string(s + 1) + ": ";
    for (const auto* rep : {&r.smm_rep, &r.full_rep, &r.zero_rep}) {
      for (const auto& row : rep->rows) {
        o.expect(row.verdict == "pass", tag + row.name + " " + row.bound.str() + " observed " +
                                            std::to_string(row.observed.value_or(-1)) + " -> " + row.verdict);
        if (row.bound.kind == Certificate::Kind::Finite && row.observed) {
          double slack = row.bound.value - static_cast<double>(*row.observed);
          if (rep == &r.smm_rep) slack_smm = std::min(slack_smm, slack);
          else if (rep == &r.full_rep) slack_full = std::min(slack_full, slack);
          else slack_zero = std::min(slack_zero, slack);
        }
      }
    }
    // d_* <= d_{t+1} <= d_t on consecutive rows of the declared classifier.
    const double d_star = r.ds.benchmark->d_star;
    long bad = 0;
    std::optional<double> prev;
    for (const auto& row : r.smm.rows) {
      if (!row.d_t) continue;
      if (*row.d_t < d_star - 1e-8) ++bad;
      if (prev && *row.d_t > *prev + 1e-8) ++bad;
      prev = row.d_t;
    }
    o.expect(bad == 0, tag + std::to_string(bad) + " margin sandwich violations");
  }
  o.note("min slack smm " + fmt(slack_smm) + ", full " + fmt(slack_full) + ", zero-b " + fmt(slack_zero));
  return o;
}

Outcome stabilization() {
  Outcome o;
  ensure_synth_runs();
  long last_smm = 0, last_grad = 0, late_mistakes = 0, late_manip = 0;
  for (int s = 0; s < kSeeds; ++s) {
    const SynthRuns& r = g_synth[s];
    const long cutoff = static_cast<long>(r.smm.rows.size()) - 5000;
    for (const auto* run : {&r.smm, &r.gradsmm}) {
      const std::string alg = run == &r.smm ? "smm" : "gradsmm";
      long last = 0, mistakes = 0, manip = 0;
      for (const auto& row : run->rows) {
        if (row.mistake || row.manipulated) last = row.t;
        if (row.t > cutoff) {
          mistakes += row.mistake;
          manip += row.manipulated;
        }
      }
      (run == &r.smm ? last_smm : last_grad) = std::max(run == &r.smm ? last_smm : last_grad, last);
      late_mistakes += mistakes;
      late_manip += manip;
      o.expect(mistakes + manip == 0, alg + " seed " + std::to_string(s + 1) + ": " + std::to_string(mistakes) +
                                          " mistakes, " + std::to_string(manip) + " manipulations after t=" +
                                          std::to_string(cutoff) + " (last at t=" + std::to_string(last) + ")");
    }
  }
  o.note("latest event: smm t=" + std::to_string(last_smm) + ", gradsmm t=" + std::to_string(last_grad));
  o.note("final-window totals: " + std::to_string(late_mistakes) + " mistakes, " + std::to_string(late_manip) +
         " manipulations");
  return o;
}

Outcome noise_robustness() {
  Outcome o;
  ensure_synth_runs();
  int within = 0, fallbacks = 0;
  for (int s = 0; s < kSeeds; ++s) {
    const SynthRuns& r = g_synth[s];
    const std::string tag = "seed " + std::to_string(s + 1) + ": ";
    for (const char* alg : {"gradsmm", "perceptron", "smm"}) {
      RunConfig cfg = r.base;
      cfg.learner.algorithm = alg;
      cfg.sigma = 1e-3;
      RunMetrics noisy;
      try {
        noisy = run_online(cfg, r.ds, r.model);
      } catch (const std::exception& e) {
        o.expect(false, tag + alg + " threw: " + e.what());
        continue;
      }
      o.expect(static_cast<long>(noisy.rows.size()) == *cfg.T, tag + alg + " stopped early");
      const std::string a = alg;
      if (a == "gradsmm") {
        auto clean = classifier_distance(r.gradsmm.final_classifier, *r.ds.benchmark);
        auto dirty = classifier_distance(noisy.final_classifier, *r.ds.benchmark);
        if (clean && dirty && *dirty <= 2.0 * *clean) ++within;
      } else if (a == "smm") {
        // A (0,0) classifier after initialization must come with a logged event.
        bool zero = false;
        for (const auto& row : noisy.rows)
          if (!row.init && !row.distance) zero = true;
        if (zero) ++fallbacks;
        o.expect(!zero || !noisy.events.empty(), tag + "smm fell back to (0,0) without logging it");
      }
    }
  }
  o.expect(within >= 40, "gradsmm within 2x of noiseless on " + std::to_string(within) + "/50");
  o.note("gradsmm within 2x on " + std::to_string(within) + "/50, smm fallbacks logged on " +
         std::to_string(fallbacks) + "/50");
  return o;
}

// ---------------------------------------------------------------------------
// 5. convergence on cluster instances

Outcome convergence() {
  Outcome o;
  int smm_ok = 0, grad_ok = 0;
  double smm_worst = 0.0, grad_worst = 0.0;
  for (int s = 1; s <= kSeeds; ++s) {
    RunConfig cfg;
    cfg.dataset.kind = DatasetSource::Kind::Clusters;
    cfg.dataset.clusters.seed = static_cast<std::uint64_t>(s);
    cfg.dataset.clusters.per_class = 10;
    cfg.dataset.clusters.d = 2;
    cfg.budget_of_margin = 0.5;
    cfg.T = 20000;
    cfg.seed = static_cast<std::uint64_t>(s);
    Dataset ds = load_dataset(cfg.dataset);
    CostModel m = make_cost_model(cfg, ds);
    for (const char* alg : {"smm", "gradsmm"}) {
      cfg.learner.algorithm = alg;
      RunMetrics run = run_online(cfg, ds, m);
      auto dist = classifier_distance(run.final_classifier, *ds.benchmark);
      double d = dist.value_or(1e300);
      if (std::string(alg) == "smm") {
        smm_ok += d <= 1e-3;
        smm_worst = std::max(smm_worst, d);
      } else {
        grad_ok += d <= 5e-2;
        grad_worst = std::max(grad_worst, d);
      }
    }
  }
  o.expect(smm_ok >= 45, "smm reached 1e-3 on " + std::to_string(smm_ok) + "/50");
  o.expect(grad_ok >= 45, "gradsmm reached 5e-2 on " + std::to_string(grad_ok) + "/50");
  o.note("smm " + std::to_string(smm_ok) + "/50 (worst " + fmt(smm_worst) + "), gradsmm " + std::to_string(grad_ok) +
         "/50 (worst " + fmt(grad_worst) + ")");
  return o;
}

// ---------------------------------------------------------------------------
// 6. solver against exhaustive support enumeration

Outcome solver_oracle() {
  Outcome o;
  std::mt19937_64 gen(606);
  double worst_value = 0.0, worst_witness = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    int d = 1 + static_cast<int>(gen() % 4);
    int np = 1 + static_cast<int>(gen() % 8), nn = 1 + static_cast<int>(gen() % 8);
    auto inst = oracle::random_separable(gen, d, np, nn, 0.02 + 0.2 * (trial % 5));
    CostModel m(NormKind::l2(), 1.0, d);
    PointSetPair sets = sets_of(inst.P, inst.N);
    MarginSolution sol = solve_max_margin(sets, m);
    auto ref = oracle::hull_distance(inst.P, inst.N);
    if (!sol.separable) {
      o.expect(false, "instance " + std::to_string(trial) + " reported inseparable");
      continue;
    }
    double ev = std::abs(sol.d - ref.dist / 2.0);
    double ew = std::max({std::abs(sol.y.norm() - 1.0), std::abs(sol.y.dot(sol.x_plus) + sol.b - sol.d),
                          std::abs(sol.y.dot(sol.x_minus) + sol.b + sol.d),
                          std::abs(sol.y.dot(sol.x_plus - sol.x_minus) - (sol.x_plus - sol.x_minus).norm()),
                          std::abs(margin_h(sol.y, sol.b, sets) - sol.d)});
    worst_value = std::max(worst_value, ev);
    worst_witness = std::max(worst_witness, ew);
    o.expect(ev <= 1e-6, "instance " + std::to_string(trial) + " value off by " + fmt(ev));
    o.expect(ew <= 1e-8, "instance " + std::to_string(trial) + " witness identity off by " + fmt(ew));
  }
  o.note("200 instances, worst value error " + fmt(worst_value) + ", worst witness error " + fmt(worst_witness));
  return o;
}

// ---------------------------------------------------------------------------
// 7. property suites

struct Setup {
  Classifier cl;
  std::vector<Agent> agents;
};

// Random classifier and agents; when `separating`, every agent sits on its
// label's side with a score in (0, 2 * 2/c).
Setup random_setup(std::mt19937_64& gen, const CostModel& m, bool separating) {
  const int d = m.dim();
  Setup s;
  s.cl.y = testing_support::gaussian(gen, d);
  s.cl.b = std::normal_distribution<double>(0.0, 0.5)(gen);
  std::uniform_real_distribution<double> margin(0.0, 2.0 * m.budget());
  Vector v = m.manipulation_direction(s.cl.y);
  for (int i = 0; i < 10; ++i) {
    Vector x = testing_support::gaussian(gen, d);
    int label = i % 2 ? 1 : -1;
    if (separating) x += (label * (margin(gen) + 1e-6) - normalized_score(s.cl, m, x)) * v;
    s.agents.push_back({x, label});
  }
  return s;
}

CostModel random_model(std::mt19937_64& gen, int trial) {
  int d = 2 + trial % 3;
  auto norms = testing_support::all_norms(gen, d);
  double c = std::uniform_real_distribution<double>(1.0, 6.0)(gen);
  return CostModel(norms[static_cast<std::size_t>(trial) % norms.size()], c, d);
}

Outcome property_suites() {
  Outcome o;
  std::mt19937_64 gen(707);
  auto suite = [&](const std::string& name, const std::function<bool(int)>& trial_fn) {
    long bad = 0;
    for (int t = 0; t < 1000; ++t) bad += !trial_fn(t);
    o.expect(bad == 0, name + ": " + std::to_string(bad) + "/1000 trials failed");
  };

  suite("dual identity", [&](int t) {
    CostModel m = random_model(gen, t);
    Vector y = testing_support::gaussian(gen, m.dim(), 3.0);
    double lhs = y.dot(m.manipulation_direction(y));
    return std::abs(lhs - m.dual_norm(y)) <= 1e-10 * std::max(1.0, m.dual_norm(y)) &&
           std::abs(m.norm(m.manipulation_direction(y)) - 1.0) <= 1e-10;
  });

  suite("offset correctness", [&](int t) {
    CostModel m = random_model(gen, t);
    Setup s = random_setup(gen, m, true);
    for (const auto& a : s.agents)
      if (predict(s.cl, m, respond(a, s.cl, m)) != a.label) return false;
    return true;
  });

  suite("sign link", [&](int t) {
    CostModel m = random_model(gen, t);
    Setup s = random_setup(gen, m, t % 2 == 0);
    for (const auto& a : s.agents) {
      Interaction in = interact(a, s.cl, m);
      double v = a.label * (s.cl.y.dot(in.proxy) + s.cl.b) / m.dual_norm(s.cl.y);
      if (in.mistaken ? v > 1e-9 : v < -1e-9) return false;
    }
    return true;
  });

  suite("proxy margin preservation", [&](int t) {
    CostModel m = random_model(gen, t);
    Setup s = random_setup(gen, m, t % 2 == 0);
    Vector ybar = testing_support::gaussian(gen, m.dim());
    if (ybar.dot(m.manipulation_direction(s.cl.y)) < 0.0) ybar = -ybar;
    double bbar = std::normal_distribution<double>(0.0, 0.5)(gen);
    double rho = 1e300;
    for (auto& a : s.agents) {
      double score = ybar.dot(a.features) + bbar;
      a.label = score >= 0.0 ? 1 : -1;
      rho = std::min(rho, a.label * score);
    }
    for (const auto& a : s.agents) {
      Vector proxy = interact(a, s.cl, m).proxy;
      if (a.label * (ybar.dot(proxy) + bbar) < rho - 1e-9) return false;
    }
    return true;
  });

  suite("stepsize invariance", [&](int t) {
    CostModel m = random_model(gen, t);
    ConeKind cone = std::vector<ConeKind>{ConeKind::FullSpace, ConeKind::ZeroIntercept, ConeKind::NonnegWeights}[t % 3];
    Vector dir = testing_support::gaussian(gen, m.dim());
    PerceptronLearner base(m, cone, 1.0);
    const std::vector<double> gammas{0.5, 2.0, 10.0};
    std::vector<PerceptronLearner> scaled;
    for (double g : gammas) scaled.emplace_back(m, cone, g);
    for (int i = 0; i < 30; ++i) {
      Vector x = testing_support::gaussian(gen, m.dim());
      Agent a{x, x.dot(dir) >= 0.1 ? 1 : -1};
      play_round(base, a);
      for (std::size_t j = 0; j < gammas.size(); ++j) {
        play_round(scaled[j], a);
        if ((scaled[j].q() - gammas[j] * base.q()).norm() > 1e-9 * std::max(1.0, base.q().norm())) return false;
      }
    }
    return true;
  });

  suite("cone homogeneity", [&](int t) {
    Vector q = testing_support::gaussian(gen, 2 + t % 5, 2.0);
    double g = std::uniform_real_distribution<double>(0.0, 10.0)(gen);
    for (ConeKind k : {ConeKind::FullSpace, ConeKind::ZeroIntercept, ConeKind::NonnegWeights})
      if ((project_cone(k, g * q) - g * project_cone(k, q)).norm() > 1e-12 * std::max(1.0, g * q.norm())) return false;
    return true;
  });

  suite("scaling invariance", [&](int t) {
    CostModel m = random_model(gen, t);
    Setup s = random_setup(gen, m, t % 2 == 0);
    double g = std::exp(std::uniform_real_distribution<double>(-3.0, 3.0)(gen));
    Classifier scaled{g * s.cl.y, g * s.cl.b};
    for (const auto& a : s.agents) {
      Interaction x = interact(a, s.cl, m), y = interact(a, scaled, m);
      if ((x.response - y.response).norm() > 1e-9 || (x.proxy - y.proxy).norm() > 1e-9 || x.predicted != y.predicted)
        return false;
    }
    return true;
  });

  suite("init mistakes", [&](int t) {
    CostModel m(NormKind::l2(), 4.0, 2);
    std::vector<Agent> stream;
    std::bernoulli_distribution pos(0.1 + 0.8 * (t % 10) / 9.0);
    for (int i = 0; i < 40; ++i) {
      int label = pos(gen) ? 1 : -1;
      stream.push_back({vec({0.0, label * (1.0 + i)}), label});
    }
    stream.push_back({vec({0.0, stream.front().label == 1 ? -50.0 : 50.0}), -stream.front().label});
    std::vector<int> labels;
    for (const auto& a : stream) labels.push_back(a.label);
    std::size_t i = 0;
    AgentSource src = [&]() -> std::optional<Agent> {
      if (i == stream.size()) return std::nullopt;
      return stream[i++];
    };
    InitResult got = init_scheme(src, m);
    auto ref = oracle::init_trace(labels);
    return got.mistakes <= 2 && got.mistakes == ref.mistakes && got.consumed == ref.consumed;
  });

  o.note("8 suites x 1000 trials");
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    std::string title;
    std::function<Outcome()> run;
  };
  std::vector<Criterion> all = {
      {1, "micro-instances", micro_instances},
      {2, "counterexample regressions", counterexamples},
      {3, "bound certificates on synthetic data", bound_certificates},
      {4, "stabilization in the final 5000 rounds", stabilization},
      {5, "convergence on cluster instances", convergence},
      {6, "solver oracle equivalence", solver_oracle},
      {7, "property suites", property_suites},
      {8, "noise robustness", noise_robustness},
  };
  int failed = 0;
  for (const auto& c : all) {
    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.expect(false, std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::ostringstream line;
    line << (o.pass ? "PASS" : "FAIL") << " criterion " << c.id << " (" << c.title << ")";
    for (const auto& n : o.notes) line << " | " << n;
    line << " | " << fmt(secs) << " s";
    std::cout << line.str() << "\n";
    for (const auto& f : o.failures) std::cout << "    " << f << "\n";
    std::cout.flush();
    failed += !o.pass;
  }
  std::cout << (failed ? "acceptance: " + std::to_string(failed) + " criteria failed" : "acceptance: all criteria pass")
            << "\n";
  return failed ? 1 : 0;
}
