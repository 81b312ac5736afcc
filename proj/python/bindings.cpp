#include "stratclass/harness.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace stratclass;

namespace {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

PointSetPair pools_from(const Matrix& positives, const Matrix& negatives) {
  PointSetPair s;
  for (Eigen::Index i = 0; i < positives.rows(); ++i) s.add(positives.row(i).transpose(), 1);
  for (Eigen::Index i = 0; i < negatives.rows(); ++i) s.add(negatives.row(i).transpose(), -1);
  return s;
}

Matrix feature_matrix(const Dataset& ds) {
  Matrix X(static_cast<Eigen::Index>(ds.agents.size()), ds.agents.empty() ? 0 : ds.dim());
  for (std::size_t i = 0; i < ds.agents.size(); ++i) X.row(static_cast<Eigen::Index>(i)) = ds.agents[i].features;
  return X;
}

Eigen::VectorXi label_vector(const Dataset& ds) {
  Eigen::VectorXi y(static_cast<Eigen::Index>(ds.agents.size()));
  for (std::size_t i = 0; i < ds.agents.size(); ++i) y[static_cast<Eigen::Index>(i)] = ds.agents[i].label;
  return y;
}

py::object optional_column(const std::vector<IterationRecord>& rows, std::optional<double> IterationRecord::*field) {
  py::list out;
  for (const auto& r : rows) {
    const auto& v = r.*field;
    out.append(v ? py::object(py::float_(*v)) : py::object(py::none()));
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Online strategic classification: agents, learners, solvers and bounds.";

  py::register_exception<SolverError>(m, "SolverError", PyExc_RuntimeError);

  py::class_<NormKind>(m, "NormKind")
      .def_static("parse", &NormKind::parse, py::arg("token"))
      .def("token", &NormKind::token)
      .def("__repr__", [](const NormKind& n) { return "NormKind('" + n.token() + "')"; });

  py::class_<CostModel>(m, "CostModel")
      .def(py::init([](const std::string& norm, double c, int dim) { return CostModel(NormKind::parse(norm), c, dim); }),
           py::arg("norm"), py::arg("c"), py::arg("dim"))
      .def_property_readonly("c", &CostModel::c)
      .def_property_readonly("dim", &CostModel::dim)
      .def_property_readonly("budget", &CostModel::budget)
      .def_property_readonly("norm_token", [](const CostModel& cm) { return cm.norm_kind().token(); })
      .def("norm", &CostModel::norm)
      .def("dual_norm", &CostModel::dual_norm)
      .def("manipulation_direction", &CostModel::manipulation_direction)
      .def("l2_envelope_constant", &CostModel::l2_envelope_constant);

  py::class_<Classifier>(m, "Classifier")
      .def(py::init([](Vector y, double b) { return Classifier{std::move(y), b}; }), py::arg("y"), py::arg("b") = 0.0)
      .def_readwrite("y", &Classifier::y)
      .def_readwrite("b", &Classifier::b)
      .def("__repr__", [](const Classifier& c) {
        return "Classifier(dim=" + std::to_string(c.y.size()) + ", b=" + std::to_string(c.b) + ")";
      });

  py::class_<Agent>(m, "Agent")
      .def(py::init([](Vector x, int label) {
             check_label(label);
             return Agent{std::move(x), label};
           }),
           py::arg("features"), py::arg("label"))
      .def_readwrite("features", &Agent::features)
      .def_readonly("label", &Agent::label);

  py::class_<Interaction>(m, "Interaction")
      .def_readonly("response", &Interaction::response)
      .def_readonly("proxy", &Interaction::proxy)
      .def_readonly("predicted", &Interaction::predicted)
      .def_readonly("manipulated", &Interaction::manipulated)
      .def_readonly("mistaken", &Interaction::mistaken);

  m.def("predict", &predict, py::arg("classifier"), py::arg("model"), py::arg("x"));
  m.def("respond", &respond, py::arg("agent"), py::arg("classifier"), py::arg("model"));
  m.def("proxy_from_response", &proxy_from_response, py::arg("response"), py::arg("label"), py::arg("classifier"),
        py::arg("model"));
  m.def("interact", &interact, py::arg("agent"), py::arg("classifier"), py::arg("model"));

  py::class_<MarginSolution>(m, "MarginSolution")
      .def_readonly("y", &MarginSolution::y)
      .def_readonly("b", &MarginSolution::b)
      .def_readonly("d", &MarginSolution::d)
      .def_readonly("x_plus", &MarginSolution::x_plus)
      .def_readonly("x_minus", &MarginSolution::x_minus)
      .def_readonly("separable", &MarginSolution::separable);

  m.def(
      "solve_max_margin",
      [](const Matrix& positives, const Matrix& negatives, const std::string& norm, double tol) {
        PointSetPair s = pools_from(positives, negatives);
        SolverOptions opts;
        opts.tol = tol;
        return solve_max_margin(s, CostModel(NormKind::parse(norm), 1.0, s.dim()), opts);
      },
      py::arg("positives"), py::arg("negatives"), py::arg("norm") = "l2", py::arg("tol") = 1e-10,
      "Max-margin separator of two point sets given as (n, d) arrays.");
  m.def(
      "margin_h",
      [](const Vector& y, double b, const Matrix& positives, const Matrix& negatives) {
        return margin_h(y, b, pools_from(positives, negatives));
      },
      py::arg("y"), py::arg("b"), py::arg("positives"), py::arg("negatives"));

  py::class_<Learner>(m, "Learner")
      .def_property_readonly("classifier", &Learner::classifier)
      .def_property_readonly("margin", &Learner::margin)
      .def_property_readonly("initializing", &Learner::initializing)
      .def_property_readonly("name", [](const Learner& l) { return std::string(l.name()); })
      .def("take_events", &Learner::take_events)
      .def(
          "play",
          [](Learner& l, const Agent& a) { return play_round(l, a); },
          py::arg("agent"), "One noiseless protocol round.");

  m.def(
      "make_learner",
      [](const std::string& algorithm, const CostModel& model, const std::string& cone, double gamma,
         const std::string& step, bool force_resolve) {
        LearnerConfig cfg;
        cfg.algorithm = algorithm;
        cfg.cone = parse_cone(cone);
        cfg.gamma = gamma;
        cfg.schedule = StepSchedule::parse(step);
        cfg.force_resolve = force_resolve;
        return make_learner(cfg, model);
      },
      py::arg("algorithm"), py::arg("model"), py::arg("cone") = "full", py::arg("gamma") = 1.0,
      py::arg("step") = "invsqrt", py::arg("force_resolve") = false);

  py::class_<Benchmark>(m, "Benchmark")
      .def_readonly("y_star", &Benchmark::y_star)
      .def_readonly("b_star", &Benchmark::b_star)
      .def_readonly("d_star", &Benchmark::d_star);

  py::class_<Dataset>(m, "Dataset")
      .def_property_readonly("features", &feature_matrix)
      .def_property_readonly("labels", &label_vector)
      .def_readonly("benchmark", &Dataset::benchmark)
      .def_readonly("provenance", &Dataset::provenance)
      .def("descriptor", &dataset_descriptor)
      .def("__len__", [](const Dataset& ds) { return ds.agents.size(); });

  m.def(
      "generate_synthetic",
      [](std::uint64_t seed, int n, int d, double rho) {
        SynthConfig cfg;
        cfg.seed = seed;
        cfg.n = n;
        cfg.d = d;
        cfg.rho = rho;
        return generate_synthetic(cfg);
      },
      py::arg("seed") = 1, py::arg("n") = 2000, py::arg("d") = 6, py::arg("rho") = 0.02);
  m.def(
      "generate_clusters",
      [](std::uint64_t seed, int per_class, int d, double separation, double spread) {
        return generate_clusters({seed, per_class, d, separation, spread});
      },
      py::arg("seed") = 1, py::arg("per_class") = 10, py::arg("d") = 2, py::arg("separation") = 1.0,
      py::arg("spread") = 0.5);
  m.def("load_csv", &load_csv, py::arg("path"));

  py::class_<RunMetrics>(m, "RunMetrics")
      .def_readonly("mistakes", &RunMetrics::mistakes)
      .def_readonly("manipulations", &RunMetrics::manipulations)
      .def_readonly("manipulations_pos", &RunMetrics::manipulations_pos)
      .def_readonly("manipulations_neg", &RunMetrics::manipulations_neg)
      .def_readonly("main_mistakes", &RunMetrics::main_mistakes)
      .def_readonly("init_rounds", &RunMetrics::init_rounds)
      .def_readonly("wall_seconds", &RunMetrics::wall_seconds)
      .def_readonly("events", &RunMetrics::events)
      .def_readonly("final_classifier", &RunMetrics::final_classifier)
      .def_property_readonly("mistake",
                             [](const RunMetrics& r) {
                               std::vector<int> v;
                               for (const auto& row : r.rows) v.push_back(row.mistake);
                               return v;
                             })
      .def_property_readonly("manipulated",
                             [](const RunMetrics& r) {
                               std::vector<int> v;
                               for (const auto& row : r.rows) v.push_back(row.manipulated);
                               return v;
                             })
      .def_property_readonly("d_t", [](const RunMetrics& r) { return optional_column(r.rows, &IterationRecord::d_t); })
      .def_property_readonly("distance",
                             [](const RunMetrics& r) { return optional_column(r.rows, &IterationRecord::distance); })
      .def("write_csv", &write_metrics, py::arg("path"))
      .def("__len__", [](const RunMetrics& r) { return r.rows.size(); });

  m.def(
      "simulate", [](const std::string& config_text) { return run_online(parse_config(config_text)); },
      py::arg("config_text"), "Runs one online simulation from key = value config text.");

  m.def(
      "certify",
      [](const std::string& config_text, const RunMetrics* metrics) {
        CertifyReport rep = certify(parse_config(config_text), metrics);
        py::dict out;
        out["ok"] = rep.ok;
        out["text"] = rep.text();
        py::list rows;
        for (const auto& r : rep.rows) {
          py::dict row;
          row["name"] = r.name;
          row["bound"] = r.bound.kind == Certificate::Kind::Finite ? py::object(py::float_(r.bound.value))
                                                                     : py::object(py::str(r.bound.str()));
          row["observed"] = r.observed ? py::object(py::int_(*r.observed)) : py::object(py::none());
          row["verdict"] = r.verdict;
          rows.append(row);
        }
        out["rows"] = rows;
        return out;
      },
      py::arg("config_text"), py::arg("metrics") = nullptr);

  m.def(
      "reproduce_example",
      [](const std::string& name, int visits) {
        ExampleReport rep = reproduce_example(name, visits);
        return py::make_tuple(rep.passed, rep.checks);
      },
      py::arg("name"), py::arg("visits") = 500);
  m.def("example_names", &example_names);
}
