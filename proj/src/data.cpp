#include "stratclass/data.hpp"

#include "json.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace stratclass {

namespace {

using nlohmann::json;

constexpr int kMaxRejections = 10000;

SolverOptions benchmark_solver() {
  SolverOptions o;
  o.tol = 1e-12;
  return o;
}

std::vector<double> to_std(const Vector& v) { return {v.data(), v.data() + v.size()}; }

json benchmark_json(const Benchmark& b) {
  return {{"y_star", to_std(b.y_star)}, {"b_star", b.b_star}, {"d_star", b.d_star}};
}

std::string trim(std::string_view s) {
  std::size_t a = 0, e = s.size();
  while (a < e && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (e > a && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(a, e - a));
}

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto comma = line.find(',', start);
    out.push_back(trim(std::string_view(line).substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

bool parse_number(const std::string& tok, double& out) {
  if (tok.empty()) return false;
  const char* first = tok.data();
  if (*first == '+') ++first;
  auto res = std::from_chars(first, tok.data() + tok.size(), out);
  return res.ec == std::errc() && res.ptr == tok.data() + tok.size();
}

// Averaged full-batch subgradient descent on lambda/2 ||w||^2 + mean hinge loss.
Classifier hinge_separator(const std::vector<Agent>& agents, int dim) {
  const double lambda = 1e-3;
  const int iterations = 5000;
  Vector w = Vector::Zero(dim), w_avg = Vector::Zero(dim);
  double b = 0.0, b_avg = 0.0;
  const double n = static_cast<double>(agents.size());
  for (int k = 1; k <= iterations; ++k) {
    Vector gw = lambda * w;
    double gb = 0.0;
    for (const Agent& a : agents) {
      if (a.label * (w.dot(a.features) + b) < 1.0) {
        gw -= (a.label / n) * a.features;
        gb -= a.label / n;
      }
    }
    double eta = 1.0 / (lambda * (k + 10.0));
    w -= eta * gw;
    b -= eta * gb;
    w_avg += (w - w_avg) / k;
    b_avg += (b - b_avg) / k;
  }
  return {w_avg, b_avg};
}

}  // namespace

int Dataset::dim() const { return agents.empty() ? 0 : static_cast<int>(agents.front().features.size()); }

double Dataset::positive_fraction() const {
  if (agents.empty()) return 0.0;
  std::size_t pos = 0;
  for (const Agent& a : agents) pos += a.label == 1;
  return static_cast<double>(pos) / static_cast<double>(agents.size());
}

PointSetPair Dataset::point_sets() const {
  PointSetPair s;
  for (const Agent& a : agents) s.add(a.features, a.label);
  return s;
}

Vector sample_truncated_normal(Rng& rng, const SynthConfig& cfg) {
  if (cfg.d <= 0 || !(cfg.radius > 0.0) || !(cfg.variance >= 0.0)) {
    throw InvalidArgument("synthetic config needs d > 0, radius > 0, variance >= 0");
  }
  const double sd = std::sqrt(cfg.variance);
  Vector x(cfg.d);
  for (int tries = 0; tries < kMaxRejections; ++tries) {
    for (int i = 0; i < cfg.d; ++i) x[i] = sd * rng.normal();
    if (x.norm() <= cfg.radius) return x;
  }
  throw InvalidArgument("truncated normal: rejection cap exceeded; radius too small for the variance");
}

Dataset generate_synthetic(const SynthConfig& cfg) {
  if (cfg.n <= 0) throw InvalidArgument("synthetic config needs n > 0");
  if (!(cfg.rho > 0.0)) throw InvalidArgument("synthetic config needs rho > 0");
  Rng rng(cfg.seed);
  const double root_d = std::sqrt(static_cast<double>(cfg.d));
  Dataset ds;
  for (int i = 0; i < cfg.n; ++i) {
    Vector x = sample_truncated_normal(rng, cfg);
    double s = x.sum();
    if (std::abs(s) / root_d < cfg.rho) continue;
    ds.agents.push_back({x, sign_label(s)});
  }
  PointSetPair sets = ds.point_sets();
  if (sets.positives.empty() || sets.negatives.empty()) {
    throw InvalidArgument("synthetic data: a label class is empty after trimming");
  }
  CostModel l2(NormKind::l2(), 1.0, cfg.d);
  MarginSolution sol = solve_max_margin(sets, l2, benchmark_solver());
  Vector shift = -0.5 * (sol.x_plus + sol.x_minus);
  for (Agent& a : ds.agents) a.features += shift;
  ds.benchmark = compute_benchmark(ds.agents, l2, benchmark_solver());

  json prov = {{"source", "synthetic"},     {"seed", cfg.seed},         {"n", cfg.n},
               {"d", cfg.d},                {"rho", cfg.rho},           {"radius", cfg.radius},
               {"variance", cfg.variance},  {"kept", ds.agents.size()}, {"translation", to_std(shift)},
               {"rng", "mt19937_64 + polar normal"}};
  ds.provenance = prov.dump();
  return ds;
}

Dataset generate_clusters(const ClusterConfig& cfg) {
  if (cfg.per_class <= 0 || cfg.d <= 0) throw InvalidArgument("cluster config needs per_class > 0 and d > 0");
  if (!(cfg.spread >= 0.0) || !(cfg.separation > cfg.spread)) {
    throw InvalidArgument("cluster config needs separation > spread >= 0");
  }
  Rng rng(cfg.seed);
  auto unit = [&]() {
    Vector u(cfg.d);
    do {
      for (int i = 0; i < cfg.d; ++i) u[i] = rng.normal();
    } while (u.norm() == 0.0);
    return Vector(u / u.norm());
  };
  Vector normal = unit();
  Vector offset(cfg.d);
  for (int i = 0; i < cfg.d; ++i) offset[i] = rng.uniform(-0.5, 0.5);
  Dataset ds;
  for (int label : {1, -1}) {
    Vector center = offset + (label * cfg.separation) * normal;
    for (int k = 0; k < cfg.per_class; ++k) {
      double r = cfg.spread * std::pow(rng.uniform(), 1.0 / cfg.d);
      ds.agents.push_back({center + r * unit(), label});
    }
  }
  CostModel l2(NormKind::l2(), 1.0, cfg.d);
  ds.benchmark = compute_benchmark(ds.agents, l2, benchmark_solver());
  json prov = {{"source", "clusters"},        {"seed", cfg.seed},     {"per_class", cfg.per_class},
               {"d", cfg.d},                  {"spread", cfg.spread}, {"separation", cfg.separation},
               {"rng", "mt19937_64 + polar normal"}};
  ds.provenance = prov.dump();
  return ds;
}

Dataset load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open '" + path + "'");
  auto fail = [&](long line, const std::string& msg) {
    throw InvalidArgument(path + ":" + std::to_string(line) + ": " + msg);
  };
  std::string line;
  long lineno = 0;
  if (!std::getline(in, line)) fail(1, "missing header row");
  ++lineno;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::vector<std::string> header = split_commas(line);
  if (header.size() < 2 || header.back() != "label") fail(lineno, "header must be f1,...,fd,label");
  const std::size_t dim = header.size() - 1;

  Dataset ds;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    std::vector<std::string> cols = split_commas(line);
    if (cols.size() != dim + 1) {
      fail(lineno, "expected " + std::to_string(dim + 1) + " columns, got " + std::to_string(cols.size()));
    }
    Vector x(static_cast<Eigen::Index>(dim));
    for (std::size_t i = 0; i < dim; ++i) {
      double v;
      if (!parse_number(cols[i], v) || !std::isfinite(v)) fail(lineno, "bad number '" + cols[i] + "'");
      x[static_cast<Eigen::Index>(i)] = v;
    }
    double lv;
    if (!parse_number(cols.back(), lv) || (lv != 1.0 && lv != -1.0 && lv != 0.0)) {
      fail(lineno, "unknown label '" + cols.back() + "'");
    }
    ds.agents.push_back({x, lv == 1.0 ? 1 : -1});
  }
  ds.provenance = json{{"source", "csv"}, {"path", path}}.dump();
  return ds;
}

void write_csv(const Dataset& ds, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write '" + path + "'");
  const int d = ds.dim();
  for (int i = 0; i < d; ++i) out << 'f' << (i + 1) << ',';
  out << "label\n";
  char buf[64];
  for (const Agent& a : ds.agents) {
    for (int i = 0; i < d; ++i) {
      auto res = std::to_chars(buf, buf + sizeof buf, a.features[i]);
      out.write(buf, res.ptr - buf);
      out << ',';
    }
    out << a.label << '\n';
  }
  if (!out) throw InvalidArgument("write failed for '" + path + "'");
}

Dataset trim_margin(const Dataset& ds, double rho, const CostModel& m) {
  if (!(rho > 0.0)) throw InvalidArgument("trim_margin needs rho > 0");
  if (ds.agents.empty()) throw InvalidArgument("trim_margin needs a nonempty dataset");
  Classifier ref;
  std::string reference;
  if (ds.benchmark) {
    ref = {ds.benchmark->y_star, ds.benchmark->b_star};
    reference = "benchmark";
  } else {
    PointSetPair sets = ds.point_sets();
    MarginSolution sol;
    if (!sets.positives.empty() && !sets.negatives.empty()) sol = solve_max_margin(sets, m, benchmark_solver());
    if (sol.separable) {
      ref = {sol.y, sol.b};
      reference = "benchmark";
    } else {
      ref = hinge_separator(ds.agents, ds.dim());
      reference = "hinge";
    }
  }
  const double yn = m.dual_norm(ref.y);
  if (!(yn > 0.0)) throw InvalidArgument("trim_margin: reference separator is degenerate");

  Dataset out;
  for (const Agent& a : ds.agents) {
    if (a.label * (ref.y.dot(a.features) + ref.b) / yn >= rho) out.agents.push_back(a);
  }
  bool pos = false, neg = false;
  for (const Agent& a : out.agents) (a.label == 1 ? pos : neg) = true;
  if (!pos || !neg) throw InvalidArgument("trim_margin emptied a label class");
  out.benchmark = compute_benchmark(out.agents, m, benchmark_solver());
  json prov = {{"source", "trimmed"},
               {"parent", json::parse(ds.provenance.empty() ? "{}" : ds.provenance)},
               {"rho", rho},
               {"reference", reference},
               {"kept", out.agents.size()},
               {"dropped", ds.agents.size() - out.agents.size()}};
  out.provenance = prov.dump();
  return out;
}

std::string dataset_descriptor(const Dataset& ds) {
  json j;
  j["provenance"] = ds.provenance.empty() ? json::object() : json::parse(ds.provenance);
  j["size"] = ds.agents.size();
  j["dim"] = ds.dim();
  j["positive_fraction"] = ds.positive_fraction();
  if (ds.benchmark) j["benchmark"] = benchmark_json(*ds.benchmark);
  return j.dump(2);
}

}  // namespace stratclass
