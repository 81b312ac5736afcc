#include "stratclass/harness.hpp"

#include <fstream>
#include <map>
#include <sstream>

namespace stratclass {

namespace {

std::string strip(const std::string& s) {
  auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(a, e - a + 1);
}

double to_double(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.size()) throw InvalidArgument("config key '" + key + "': expected a number, got '" + v + "'");
  return out;
}

long to_long(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  long long out = 0;
  try {
    out = std::stoll(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.size()) throw InvalidArgument("config key '" + key + "': expected an integer, got '" + v + "'");
  return static_cast<long>(out);
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw InvalidArgument("config key '" + key + "': expected true/false, got '" + v + "'");
}

std::string num(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = strip(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw InvalidArgument("config line " + std::to_string(lineno) + ": expected key = value");
    std::string key = strip(line.substr(0, eq));
    std::string v = strip(line.substr(eq + 1));
    auto& ds = cfg.dataset;
    if (key == "dataset") {
      if (v == "synthetic") ds.kind = DatasetSource::Kind::Synthetic;
      else if (v == "clusters") ds.kind = DatasetSource::Kind::Clusters;
      else if (v == "csv") ds.kind = DatasetSource::Kind::Csv;
      else throw InvalidArgument("config key 'dataset': unknown source '" + v + "'");
    } else if (key == "dataset.path") {
      ds.csv_path = v;
    } else if (key == "trim_rho") {
      ds.trim_rho = to_double(key, v);
    } else if (key == "synth.seed") {
      ds.synth.seed = static_cast<std::uint64_t>(to_long(key, v));
    } else if (key == "synth.n") {
      ds.synth.n = static_cast<int>(to_long(key, v));
    } else if (key == "synth.d") {
      ds.synth.d = static_cast<int>(to_long(key, v));
    } else if (key == "synth.rho") {
      ds.synth.rho = to_double(key, v);
    } else if (key == "synth.radius") {
      ds.synth.radius = to_double(key, v);
    } else if (key == "synth.variance") {
      ds.synth.variance = to_double(key, v);
    } else if (key == "clusters.seed") {
      ds.clusters.seed = static_cast<std::uint64_t>(to_long(key, v));
    } else if (key == "clusters.per_class") {
      ds.clusters.per_class = static_cast<int>(to_long(key, v));
    } else if (key == "clusters.d") {
      ds.clusters.d = static_cast<int>(to_long(key, v));
    } else if (key == "clusters.separation") {
      ds.clusters.separation = to_double(key, v);
    } else if (key == "clusters.spread") {
      ds.clusters.spread = to_double(key, v);
    } else if (key == "algorithm") {
      if (v != "smm" && v != "gradsmm" && v != "perceptron") {
        throw InvalidArgument("config key 'algorithm': unknown algorithm '" + v + "'");
      }
      cfg.learner.algorithm = v;
    } else if (key == "cone") {
      cfg.learner.cone = parse_cone(v);
    } else if (key == "gamma") {
      cfg.learner.gamma = to_double(key, v);
    } else if (key == "step") {
      cfg.learner.schedule = StepSchedule::parse(v);
    } else if (key == "tol") {
      cfg.learner.solver.tol = to_double(key, v);
    } else if (key == "force_resolve") {
      cfg.learner.force_resolve = to_bool(key, v);
    } else if (key == "norm") {
      NormKind::parse(v);
      cfg.norm = v;
    } else if (key == "c") {
      cfg.c = to_double(key, v);
    } else if (key == "budget") {
      cfg.budget = to_double(key, v);
    } else if (key == "budget_of_margin") {
      cfg.budget_of_margin = to_double(key, v);
    } else if (key == "sigma") {
      cfg.sigma = to_double(key, v);
    } else if (key == "T") {
      cfg.T = to_long(key, v);
    } else if (key == "seed") {
      cfg.seed = static_cast<std::uint64_t>(to_long(key, v));
    } else if (key == "rounds") {
      cfg.rounds = static_cast<int>(to_long(key, v));
    } else if (key == "order") {
      if (v != "iid" && v != "stream") throw InvalidArgument("config key 'order': expected iid or stream");
      cfg.order = v;
    } else {
      throw InvalidArgument("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
  }
  int cost_keys = cfg.c.has_value() + cfg.budget.has_value() + cfg.budget_of_margin.has_value();
  if (cost_keys > 1) throw InvalidArgument("config: give only one of c, budget, budget_of_margin");
  if (cfg.rounds < 1) throw InvalidArgument("config: rounds must be >= 1");
  if (cfg.T && *cfg.T < 0) throw InvalidArgument("config: T must be >= 0");
  if (cfg.sigma < 0.0) throw InvalidArgument("config: sigma must be >= 0");
  return cfg;
}

RunConfig read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_config(ss.str());
  } catch (const InvalidArgument& e) {
    throw InvalidArgument(path + ": " + e.what());
  }
}

std::string format_config(const RunConfig& cfg) {
  std::ostringstream os;
  const auto& ds = cfg.dataset;
  switch (ds.kind) {
    case DatasetSource::Kind::Synthetic:
      os << "dataset = synthetic\nsynth.seed = " << ds.synth.seed << "\nsynth.n = " << ds.synth.n
         << "\nsynth.d = " << ds.synth.d << "\nsynth.rho = " << num(ds.synth.rho)
         << "\nsynth.radius = " << num(ds.synth.radius) << "\nsynth.variance = " << num(ds.synth.variance) << "\n";
      break;
    case DatasetSource::Kind::Clusters:
      os << "dataset = clusters\nclusters.seed = " << ds.clusters.seed << "\nclusters.per_class = "
         << ds.clusters.per_class << "\nclusters.d = " << ds.clusters.d
         << "\nclusters.separation = " << num(ds.clusters.separation)
         << "\nclusters.spread = " << num(ds.clusters.spread) << "\n";
      break;
    case DatasetSource::Kind::Csv: os << "dataset = csv\ndataset.path = " << ds.csv_path << "\n"; break;
  }
  if (ds.trim_rho) os << "trim_rho = " << num(*ds.trim_rho) << "\n";
  os << "algorithm = " << cfg.learner.algorithm << "\ncone = " << cone_token(cfg.learner.cone)
     << "\ngamma = " << num(cfg.learner.gamma) << "\nstep = " << cfg.learner.schedule.token()
     << "\ntol = " << num(cfg.learner.solver.tol) << "\nforce_resolve = " << (cfg.learner.force_resolve ? "true" : "false")
     << "\nnorm = " << cfg.norm << "\n";
  if (cfg.c) os << "c = " << num(*cfg.c) << "\n";
  if (cfg.budget) os << "budget = " << num(*cfg.budget) << "\n";
  if (cfg.budget_of_margin) os << "budget_of_margin = " << num(*cfg.budget_of_margin) << "\n";
  os << "sigma = " << num(cfg.sigma) << "\n";
  if (cfg.T) os << "T = " << *cfg.T << "\n";
  os << "seed = " << cfg.seed << "\nrounds = " << cfg.rounds << "\norder = " << cfg.order << "\n";
  return os.str();
}

Dataset load_dataset(const DatasetSource& src, const CostModel* trim_model) {
  Dataset ds;
  switch (src.kind) {
    case DatasetSource::Kind::Synthetic: ds = generate_synthetic(src.synth); break;
    case DatasetSource::Kind::Clusters: ds = generate_clusters(src.clusters); break;
    case DatasetSource::Kind::Csv:
      if (src.csv_path.empty()) throw InvalidArgument("csv dataset needs dataset.path");
      ds = load_csv(src.csv_path);
      break;
  }
  if (src.trim_rho) {
    CostModel l2(NormKind::l2(), 1.0, ds.dim());
    ds = trim_margin(ds, *src.trim_rho, trim_model ? *trim_model : l2);
  }
  return ds;
}

CostModel make_cost_model(const RunConfig& cfg, const Dataset& ds) {
  NormKind norm = NormKind::parse(cfg.norm);
  double c = 0.0;
  if (cfg.c) {
    c = *cfg.c;
  } else if (cfg.budget) {
    if (!(*cfg.budget > 0.0)) throw InvalidArgument("budget must be positive");
    c = 2.0 / *cfg.budget;
  } else if (cfg.budget_of_margin) {
    if (!ds.benchmark) throw InvalidArgument("budget_of_margin needs a dataset benchmark");
    double budget = *cfg.budget_of_margin * ds.benchmark->d_star;
    if (!(budget > 0.0)) throw InvalidArgument("budget_of_margin must be positive");
    c = 2.0 / budget;
  } else {
    throw InvalidArgument("config needs one of c, budget, budget_of_margin");
  }
  return CostModel(norm, c, ds.dim());
}

}  // namespace stratclass
