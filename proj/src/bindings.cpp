#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cdsc/harness.hpp"
#include "cdsc/io.hpp"

namespace py = pybind11;
using namespace cdsc;

namespace {

std::vector<std::pair<int, int>> edge_list(const std::set<std::pair<int, int>>& s) {
  return {s.begin(), s.end()};
}

Pattern run_ic_oracle(const BayesNet& net) {
  ExactOracleSource src(joint_from_net(net));
  return run_ic(src).pattern;
}

Pattern run_pc_oracle(const BayesNet& net, int max_cond) {
  ExactOracleSource src(joint_from_net(net));
  return run_pc(src, max_cond).pattern;
}

Pattern run_ic_sampled(const BayesNet& net, const TesterConfig& config, double m) {
  auto rows = std::make_shared<GenerativeSource>(net);
  FiniteSampleSource src(rows, config, m);
  return run_ic(src).pattern;
}

Pattern run_pc_sampled(const BayesNet& net, const TesterConfig& config, double m,
                       int max_cond) {
  auto rows = std::make_shared<GenerativeSource>(net);
  FiniteSampleSource src(rows, config, m);
  return run_pc(src, max_cond).pattern;
}

CiDecision ci_test_net(const BayesNet& net, int i, int j, const std::vector<int>& b,
                       const TesterConfig& config, double m, std::uint64_t seed) {
  GenerativeSource src(net);
  return ci_test(src, i, j, b, config, m, seed);
}

CiDecision ci_test_data(const Dataset& data, int i, int j, const std::vector<int>& b,
                        const TesterConfig& config, double m, std::uint64_t seed) {
  DatasetSource src(data);
  return ci_test(src, i, j, b, config, m, seed);
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
  mod.doc() = "causal structure discovery with explicit sample budgets";

  py::class_<Variable>(mod, "Variable")
      .def(py::init<>())
      .def(py::init([](std::string name, int card) {
             return Variable{std::move(name), card};
           }),
           py::arg("name"), py::arg("cardinality") = 2)
      .def_readwrite("name", &Variable::name)
      .def_readwrite("cardinality", &Variable::cardinality);

  py::class_<Dag>(mod, "Dag")
      .def(py::init<>())
      .def_readwrite("nodes", &Dag::nodes)
      .def_readwrite("edges", &Dag::edges)
      .def("size", &Dag::size)
      .def("has_edge", &Dag::has_edge)
      .def("adjacent", &Dag::adjacent)
      .def("parents_of", &Dag::parents_of)
      .def("children_of", &Dag::children_of);

  py::class_<BayesNet>(mod, "BayesNet")
      .def(py::init<>())
      .def_readwrite("dag", &BayesNet::dag)
      .def_readwrite("cpts", &BayesNet::cpts);

  py::class_<JointTable>(mod, "JointTable")
      .def_readonly("variables", &JointTable::variables)
      .def_readonly("probs", &JointTable::probs);

  py::class_<Dataset>(mod, "Dataset")
      .def(py::init<>())
      .def_readwrite("variables", &Dataset::variables)
      .def_readwrite("values", &Dataset::values)
      .def("rows", &Dataset::rows)
      .def("row", [](const Dataset& d, std::size_t k) {
        const auto r = d.row(k);
        return std::vector<int>(r.begin(), r.end());
      });

  py::class_<Pattern>(mod, "Pattern")
      .def(py::init<>())
      .def_readwrite("n", &Pattern::n)
      .def_property_readonly(
          "directed", [](const Pattern& p) { return edge_list(p.directed); })
      .def_property_readonly(
          "undirected", [](const Pattern& p) { return edge_list(p.undirected); })
      .def("adjacent", &Pattern::adjacent)
      .def("has_directed", &Pattern::has_directed)
      .def("has_undirected", &Pattern::has_undirected)
      .def("__eq__",
           [](const Pattern& a, const Pattern& b) { return patterns_equal(a, b); })
      .def("__repr__", [](const Pattern& p) { return pattern_to_json(p); });

  py::class_<TesterConfig>(mod, "TesterConfig")
      .def(py::init<>())
      .def_readwrite("epsilon", &TesterConfig::epsilon)
      .def_readwrite("c_prime", &TesterConfig::c_prime)
      .def_readwrite("gamma", &TesterConfig::gamma)
      .def_readwrite("beta", &TesterConfig::beta)
      .def_readwrite("rng_seed", &TesterConfig::rng_seed);

  py::class_<CiDecision>(mod, "CiDecision")
      .def_readonly("independent", &CiDecision::independent)
      .def_readonly("statistic", &CiDecision::statistic)
      .def_readonly("threshold", &CiDecision::threshold)
      .def_readonly("bins_used", &CiDecision::bins_used)
      .def_readonly("samples_drawn", &CiDecision::samples_drawn);

  py::class_<TestIndex>(mod, "TestIndex")
      .def(py::init<>())
      .def_readwrite("i", &TestIndex::i)
      .def_readwrite("j", &TestIndex::j)
      .def_readwrite("cond", &TestIndex::cond);

  py::class_<ExpertiseSet>(mod, "ExpertiseSet")
      .def_static("explicit_tests", &ExpertiseSet::explicit_tests)
      .def_static("cond_size_above", &ExpertiseSet::cond_size_above)
      .def_static("known_edges", &ExpertiseSet::known_edges);

  py::class_<AllocatedClass>(mod, "AllocatedClass")
      .def_readonly("alpha_each", &AllocatedClass::alpha_each)
      .def_property_readonly("m_support",
                             [](const AllocatedClass& a) { return a.cls.m_support; })
      .def_property_readonly("eps_prime",
                             [](const AllocatedClass& a) { return a.cls.eps_prime; })
      .def_property_readonly("cond_size",
                             [](const AllocatedClass& a) { return a.cls.cond_size; })
      .def_property_readonly("count",
                             [](const AllocatedClass& a) { return a.cls.count; });

  py::class_<BudgetReport>(mod, "BudgetReport")
      .def_readonly("alpha", &BudgetReport::alpha)
      .def_readonly("alpha0_star", &BudgetReport::alpha0_star)
      .def_readonly("m_expected", &BudgetReport::m_expected)
      .def_readonly("regime_r1", &BudgetReport::regime_r1)
      .def_readonly("regime_r2", &BudgetReport::regime_r2)
      .def_readonly("regime_r3", &BudgetReport::regime_r3)
      .def_readonly("value_of_expertise", &BudgetReport::value_of_expertise)
      .def_readonly("c_prime", &BudgetReport::c_prime)
      .def_readonly("gamma", &BudgetReport::gamma)
      .def_readonly("epsilon", &BudgetReport::epsilon)
      .def_readonly("classes", &BudgetReport::classes)
      .def("__repr__", [](const BudgetReport& r) { return report_to_json(r); });

  py::enum_<Algorithm>(mod, "Algorithm")
      .value("IC", Algorithm::Ic)
      .value("PC", Algorithm::Pc);

  py::class_<ErrorPoint>(mod, "ErrorPoint")
      .def_readonly("m", &ErrorPoint::m)
      .def_readonly("trials", &ErrorPoint::trials)
      .def_readonly("failures", &ErrorPoint::failures)
      .def_readonly("error_rate", &ErrorPoint::error_rate)
      .def_readonly("ci_halfwidth", &ErrorPoint::ci_halfwidth)
      .def_readonly("theoretical_alpha", &ErrorPoint::theoretical_alpha);

  py::class_<ErrorCurve>(mod, "ErrorCurve")
      .def_readonly("points", &ErrorCurve::points);

  py::class_<ExperimentSpec>(mod, "ExperimentSpec")
      .def(py::init<>())
      .def_readwrite("model", &ExperimentSpec::model)
      .def_readwrite("algorithm", &ExperimentSpec::algorithm)
      .def_readwrite("max_cond", &ExperimentSpec::max_cond)
      .def_readwrite("sample_sizes", &ExperimentSpec::sample_sizes)
      .def_readwrite("trials", &ExperimentSpec::trials)
      .def_readwrite("base_seed", &ExperimentSpec::base_seed)
      .def_readwrite("tester", &ExperimentSpec::tester)
      .def_readwrite("workers", &ExperimentSpec::workers);

  py::class_<ComparisonRow>(mod, "ComparisonRow")
      .def_readonly("n", &ComparisonRow::n)
      .def_readonly("m_ic", &ComparisonRow::m_ic)
      .def_readonly("m_pc", &ComparisonRow::m_pc)
      .def_readonly("ratio", &ComparisonRow::ratio);

  mod.attr("DEFAULT_GAMMA") = kDefaultGamma;

  // model building and exact computations
  mod.def("or_gate_model", &or_gate_model, py::arg("n"), py::arg("p0"));
  mod.def("validate_dag", &validate_dag);
  mod.def("validate_bayesnet", &validate_bayesnet);
  mod.def("topological_order", &topological_order);
  mod.def("joint_from_net", &joint_from_net, py::arg("net"),
          py::arg("max_states") = std::size_t{1} << 24);
  mod.def("sample_dataset", &sample_dataset, py::arg("net"), py::arg("k"),
          py::arg("seed"));
  mod.def("exact_ci", &exact_ci, py::arg("joint"), py::arg("i"), py::arg("j"),
          py::arg("b"), py::arg("tol") = 1e-10);
  mod.def("tv_to_ci_surrogate", &tv_to_ci_surrogate, py::arg("joint"), py::arg("i"),
          py::arg("j"), py::arg("b"));

  // patterns
  mod.def("pattern_of_dag", &pattern_of_dag);
  mod.def("meek_close", &meek_close);
  mod.def("patterns_equal", &patterns_equal);

  // testing
  mod.def("epsilon_prime", &epsilon_prime);
  mod.def("expected_m_from_beta", &expected_m_from_beta);
  mod.def("tau_threshold", &tau_threshold);
  mod.def("phi_from_counts", &phi_from_counts, py::arg("counts"), py::arg("card_x"),
          py::arg("card_y"));
  mod.def("ci_test", &ci_test_net, py::arg("net"), py::arg("i"), py::arg("j"),
          py::arg("b"), py::arg("config"), py::arg("m"), py::arg("seed") = 0);
  mod.def("ci_test_dataset", &ci_test_data, py::arg("data"), py::arg("i"),
          py::arg("j"), py::arg("b"), py::arg("config"), py::arg("m"),
          py::arg("seed") = 0);

  // discovery
  mod.def("run_ic_oracle", &run_ic_oracle, py::arg("net"));
  mod.def("run_pc_oracle", &run_pc_oracle, py::arg("net"), py::arg("max_cond"));
  mod.def("run_ic_sampled", &run_ic_sampled, py::arg("net"), py::arg("config"),
          py::arg("m"));
  mod.def("run_pc_sampled", &run_pc_sampled, py::arg("net"), py::arg("config"),
          py::arg("m"), py::arg("max_cond"));

  // planning
  mod.def("m_single", &m_single, py::arg("m_support"), py::arg("alpha"),
          py::arg("eps_prime"), py::arg("c_prime"), py::arg("gamma"));
  mod.def("budget_ic", &budget_ic, py::arg("cards"), py::arg("alpha"),
          py::arg("epsilon"), py::arg("config"));
  mod.def("budget_with_expertise", &budget_with_expertise, py::arg("cards"),
          py::arg("alpha"), py::arg("epsilon"), py::arg("expertise"),
          py::arg("config"));
  mod.def("bound_uniform", &bound_uniform, py::arg("n"), py::arg("l"),
          py::arg("alpha"), py::arg("epsilon"), py::arg("config"));
  mod.def("bound_sparsity", &bound_sparsity, py::arg("n"), py::arg("l"),
          py::arg("alpha"), py::arg("epsilon"), py::arg("r"), py::arg("config"));
  mod.def("bound_known_edges", &bound_known_edges, py::arg("n"), py::arg("l"),
          py::arg("alpha"), py::arg("epsilon"), py::arg("known_pairs"),
          py::arg("config"));

  // experiments
  mod.def("error_rate_experiment", &error_rate_experiment,
          py::call_guard<py::gil_scoped_release>());
  mod.def("theoretical_curve", &theoretical_curve, py::arg("n"), py::arg("l"),
          py::arg("epsilon"), py::arg("c_prime"), py::arg("sample_grid"),
          py::arg("algorithm"), py::arg("r") = 1);
  mod.def("budget_comparison", &budget_comparison, py::arg("n_min"), py::arg("n_max"),
          py::arg("l"), py::arg("alpha"), py::arg("epsilon"), py::arg("r"),
          py::arg("config"));
  mod.def("calibrate_c_prime", &calibrate_c_prime, py::arg("curve"), py::arg("q1"));
  mod.def("planner_q1", &planner_q1, py::arg("n"), py::arg("l"), py::arg("epsilon"),
          py::arg("algorithm"), py::arg("r") = 1);
  mod.def("weakest_dependent_tv", &weakest_dependent_tv, py::arg("model"));

  // serialization
  mod.def("model_to_json", &model_to_json);
  mod.def("model_from_json", &model_from_json);
  mod.def("dataset_to_csv", &dataset_to_csv);
  mod.def("dataset_from_csv", &dataset_from_csv);
  mod.def("pattern_to_json", &pattern_to_json);
  mod.def("pattern_from_json", &pattern_from_json);
}
