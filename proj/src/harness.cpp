#include "stratclass/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

namespace stratclass {

namespace {

const char* kMetricsHeader = "t,mistake,manipulated,label,d_t,distance,margin_gap";

void put_optional(std::ostream& os, const std::optional<double>& v) {
  if (!v) return;
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, *v);
  os.write(buf, res.ptr - buf);
}

std::optional<double> parse_optional(const std::string& tok, const std::string& where) {
  if (tok.empty()) return std::nullopt;
  double v;
  auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc() || res.ptr != tok.data() + tok.size()) {
    throw InvalidArgument(where + ": bad number '" + tok + "'");
  }
  return v;
}

std::vector<std::size_t> shuffled_order(std::size_t n, Rng& rng) {
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[rng.uniform_index(i)]);
  return perm;
}

std::string verdict_for(const Certificate& c, long observed) {
  switch (c.kind) {
    case Certificate::Kind::Finite: return c.admits(observed) ? "pass" : "fail";
    case Certificate::Kind::Unbounded: return "vacuous";
    case Certificate::Kind::NotApplicable: return "n/a";
  }
  return "n/a";
}

}  // namespace

void RunMetrics::recount() {
  mistakes = manipulations = manipulations_pos = manipulations_neg = 0;
  main_mistakes = main_manipulations_pos = main_manipulations_neg = init_rounds = 0;
  for (const auto& r : rows) {
    mistakes += r.mistake;
    manipulations += r.manipulated;
    (r.label == 1 ? manipulations_pos : manipulations_neg) += r.manipulated;
    if (r.init) {
      ++init_rounds;
      continue;
    }
    main_mistakes += r.mistake;
    (r.label == 1 ? main_manipulations_pos : main_manipulations_neg) += r.manipulated;
  }
}

std::optional<double> classifier_distance(const Classifier& cl, const Benchmark& bench) {
  double yn = cl.y.norm();
  if (yn == 0.0) return std::nullopt;
  double sn = bench.y_star.norm();
  double sum = (cl.y / yn - bench.y_star / sn).squaredNorm();
  double db = cl.b / yn - bench.b_star / sn;
  return std::sqrt(sum + db * db);
}

RunMetrics run_online(const RunConfig& cfg) {
  Dataset ds = load_dataset(cfg.dataset);
  CostModel m = make_cost_model(cfg, ds);
  return run_online(cfg, ds, m);
}

RunMetrics run_online(const RunConfig& cfg, const Dataset& ds, const CostModel& m) {
  if (ds.agents.empty()) throw InvalidArgument("run_online needs a nonempty dataset");
  if (ds.dim() != m.dim()) throw InvalidArgument("dataset dimension does not match the cost model");
  if (cfg.sigma < 0.0) throw InvalidArgument("sigma must be >= 0");
  const std::size_t n = ds.agents.size();
  const bool stream = cfg.order == "stream";
  if (!stream && cfg.order != "iid") throw InvalidArgument("order must be iid or stream");
  long T = 0;
  if (stream) {
    long limit = static_cast<long>(n) * cfg.rounds;
    T = cfg.T.value_or(limit);
    if (T > limit) throw InvalidArgument("T exceeds rounds * dataset size in stream mode");
  } else {
    if (!cfg.T) throw InvalidArgument("iid mode needs an explicit horizon T");
    T = *cfg.T;
  }

  auto start = std::chrono::steady_clock::now();
  std::unique_ptr<Learner> learner = make_learner(cfg.learner, m);
  Rng order_rng(cfg.seed);
  Rng noise_rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<std::size_t> perm;
  if (stream) perm = shuffled_order(n, order_rng);

  const PointSetPair truth = ds.point_sets();
  const bool both_labels = !truth.positives.empty() && !truth.negatives.empty();
  std::optional<double> h_star;
  if (ds.benchmark && both_labels) {
    double sn = m.dual_norm(ds.benchmark->y_star);
    h_star = margin_h(ds.benchmark->y_star / sn, ds.benchmark->b_star / sn, truth);
  }

  RunMetrics out;
  out.rows.reserve(static_cast<std::size_t>(T));
  Classifier last;
  std::optional<double> last_distance, last_gap;
  for (long t = 1; t <= T; ++t) {
    const Agent& agent = stream ? ds.agents[perm[static_cast<std::size_t>(t - 1) % n]]
                                : ds.agents[order_rng.uniform_index(n)];
    IterationRecord rec;
    rec.t = t;
    rec.label = agent.label;
    rec.init = learner->initializing();
    // d_t belongs to the classifier declared this round.
    rec.d_t = learner->margin();
    const Classifier& cl = learner->classifier();
    if (t == 1 || cl.b != last.b || cl.y != last.y) {
      last = cl;
      last_distance = ds.benchmark ? classifier_distance(cl, *ds.benchmark) : std::nullopt;
      last_gap.reset();
      double yn = m.dual_norm(cl.y);
      if (h_star && yn > 0.0) last_gap = *h_star - margin_h(cl.y / yn, cl.b / yn, truth);
    }
    rec.distance = last_distance;
    rec.margin_gap = last_gap;
    Interaction in = play_round(*learner, agent, cfg.sigma, &noise_rng);
    rec.mistake = in.mistaken;
    rec.manipulated = in.manipulated;
    for (auto& e : learner->take_events()) out.events.push_back("t=" + std::to_string(t) + " " + e);
    out.rows.push_back(rec);
  }
  out.final_classifier = learner->classifier();
  out.recount();
  out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

void write_metrics(const RunMetrics& metrics, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write metrics '" + path + "'");
  out << kMetricsHeader << '\n';
  for (const auto& r : metrics.rows) {
    out << r.t << ',' << int(r.mistake) << ',' << int(r.manipulated) << ',' << r.label << ',';
    put_optional(out, r.d_t);
    out << ',';
    put_optional(out, r.distance);
    out << ',';
    put_optional(out, r.margin_gap);
    out << '\n';
  }
  if (!out) throw InvalidArgument("write failed for metrics '" + path + "'");
}

RunMetrics read_metrics(const std::string& path, bool smm_init_from_empty_margin) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open metrics '" + path + "'");
  std::string line;
  if (!std::getline(in, line) || line != kMetricsHeader) {
    throw InvalidArgument(path + ":1: expected header " + std::string(kMetricsHeader));
  }
  RunMetrics m;
  long lineno = 1;
  bool seen_margin = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> cols;
    std::size_t start = 0;
    while (true) {
      auto comma = line.find(',', start);
      cols.push_back(line.substr(start, comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    const std::string where = path + ":" + std::to_string(lineno);
    if (cols.size() != 7) throw InvalidArgument(where + ": expected 7 columns");
    IterationRecord r;
    try {
      r.t = std::stol(cols[0]);
      r.mistake = std::stoi(cols[1]) != 0;
      r.manipulated = std::stoi(cols[2]) != 0;
      r.label = std::stoi(cols[3]);
    } catch (const std::exception&) {
      throw InvalidArgument(where + ": malformed row");
    }
    r.d_t = parse_optional(cols[4], where);
    r.distance = parse_optional(cols[5], where);
    r.margin_gap = parse_optional(cols[6], where);
    if (r.d_t) seen_margin = true;
    r.init = smm_init_from_empty_margin && !seen_margin && !r.d_t;
    m.rows.push_back(r);
  }
  // No margin column anywhere means the file did not come from smm.
  if (!seen_margin) {
    for (auto& r : m.rows) r.init = false;
  }
  m.recount();
  return m;
}

std::string CertifyReport::text() const {
  std::ostringstream os;
  os.precision(10);
  const auto& k = constants;
  os << "constants: D=" << k.D << " D_pm=" << k.D_pm << " D_plus=" << k.D_plus << " D_minus=" << k.D_minus
     << " C=" << k.C << "\n";
  os << "           D~=" << k.D_tilde << " D~_pm=" << k.D_tilde_pm << " D~_plus=" << k.D_tilde_plus
     << " D~_minus=" << k.D_tilde_minus << " D_bar=" << k.D_bar << "\n";
  os << "benchmark: d*=" << benchmark.d_star << " b*=" << benchmark.b_star << " y*=(";
  for (Eigen::Index i = 0; i < benchmark.y_star.size(); ++i) os << (i ? ", " : "") << benchmark.y_star[i];
  os << ")\n";
  for (const auto& r : rows) {
    os << r.name << ": bound " << r.bound.str();
    if (r.observed) os << ", observed " << *r.observed;
    os << " -> " << r.verdict << "\n";
  }
  os << (ok ? "certify: ok" : "certify: FAILED") << "\n";
  return os.str();
}

CertifyReport certify(const RunConfig& cfg, const Dataset& ds, const CostModel& m, const RunMetrics* metrics) {
  if (!ds.benchmark) throw InvalidArgument("certify needs a dataset benchmark (separable data)");
  CertifyReport rep;
  rep.constants = dataset_constants(ds.agents, m);
  rep.benchmark = *ds.benchmark;
  auto add = [&](std::string name, Certificate c, std::optional<long> observed) {
    CertifyRow row{std::move(name), std::move(c), observed, "n/a"};
    if (observed) row.verdict = verdict_for(row.bound, *observed);
    else if (row.bound.kind == Certificate::Kind::Unbounded) row.verdict = "vacuous";
    else if (row.bound.kind == Certificate::Kind::Finite) row.verdict = "bound";
    if (row.verdict == "fail") rep.ok = false;
    rep.rows.push_back(std::move(row));
  };
  auto obs = [&](long RunMetrics::*field) -> std::optional<long> {
    if (!metrics) return std::nullopt;
    return metrics->*field;
  };
  const std::string& alg = cfg.learner.algorithm;
  if (alg == "smm") {
    add("smm mistakes (after init)", smm_mistake_bound(rep.benchmark, rep.constants, m), obs(&RunMetrics::main_mistakes));
    ManipulationBounds mb = smm_manipulation_bounds(rep.benchmark, rep.constants, m);
    add("smm manipulations, label -1", mb.negative, obs(&RunMetrics::main_manipulations_neg));
    add("smm manipulations, label +1", mb.positive, obs(&RunMetrics::main_manipulations_pos));
    if (metrics) add("init mistakes", Certificate::finite(2.0), metrics->mistakes - metrics->main_mistakes);
  } else if (alg == "perceptron") {
    add("perceptron mistakes, cone " + cone_token(cfg.learner.cone),
        perceptron_mistake_bound(rep.benchmark, rep.constants, m, cfg.learner.cone), obs(&RunMetrics::mistakes));
  } else {
    add("gradsmm mistakes", Certificate::not_applicable("no finite bound is stated for gradsmm"),
        obs(&RunMetrics::mistakes));
  }
  return rep;
}

CertifyReport certify(const RunConfig& cfg, const RunMetrics* metrics) {
  Dataset ds = load_dataset(cfg.dataset);
  CostModel m = make_cost_model(cfg, ds);
  return certify(cfg, ds, m, metrics);
}

std::vector<SweepResult> sweep(const std::string& dir, unsigned workers) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw InvalidArgument("sweep: '" + dir + "' is not a directory");
  std::vector<std::string> paths;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".cfg") paths.push_back(entry.path().string());
  }
  std::sort(paths.begin(), paths.end());
  std::vector<SweepResult> results(paths.size());
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    for (std::size_t i = next++; i < paths.size(); i = next++) {
      SweepResult& r = results[i];
      r.config_path = paths[i];
      try {
        RunConfig cfg = read_config(paths[i]);
        Dataset ds = load_dataset(cfg.dataset);
        CostModel m = make_cost_model(cfg, ds);
        r.metrics = run_online(cfg, ds, m);
        write_metrics(r.metrics, (fs::path(paths[i]).replace_extension(".metrics.csv")).string());
        if (ds.benchmark) r.report = certify(cfg, ds, m, &r.metrics);
        r.ran = true;
      } catch (const std::exception& e) {
        r.error = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < std::min<std::size_t>(workers, paths.size()); ++w) pool.emplace_back(work);
  for (auto& th : pool) th.join();
  return results;
}

}  // namespace stratclass
