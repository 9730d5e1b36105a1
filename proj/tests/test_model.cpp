#include <doctest.h>

#include <cmath>
#include <map>

#include "cdsc/model.hpp"
#include "cdsc/rng.hpp"
#include "testutil.hpp"

using namespace cdsc;

namespace {

double joint_prob(const JointTable& j, const std::vector<int>& state) {
  return j.probs[pack_state(j.variables, state)];
}

Dag chain3() {
  Dag d;
  d.nodes = {{"X1", 2}, {"X2", 2}, {"X3", 2}};
  d.edges = {{0, 1}, {1, 2}};
  return d;
}

}  // namespace

TEST_CASE("or-gate joint matches hand-computed cells") {
  const BayesNet net = or_gate_model(3, 0.6);
  const JointTable j = joint_from_net(net);
  CHECK(joint_prob(j, {0, 0, 0}) == doctest::Approx(0.36).epsilon(1e-12));
  CHECK(joint_prob(j, {0, 1, 1}) == doctest::Approx(0.24).epsilon(1e-12));
  CHECK(joint_prob(j, {1, 0, 1}) == doctest::Approx(0.24).epsilon(1e-12));
  CHECK(joint_prob(j, {1, 1, 1}) == doctest::Approx(0.16).epsilon(1e-12));
  CHECK(joint_prob(j, {0, 0, 1}) == 0.0);
  CHECK(joint_prob(j, {1, 1, 0}) == 0.0);

  const JointTable j4 = joint_from_net(or_gate_model(4, 0.6));
  CHECK(joint_prob(j4, {0, 0, 0, 0}) == doctest::Approx(0.216).epsilon(1e-12));

  double total = 0.0;
  for (double p : j.probs) total += p;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("dag validation rejects malformed graphs") {
  Dag d = chain3();
  CHECK_NOTHROW(validate_dag(d));

  Dag self = chain3();
  self.edges.push_back({1, 1});
  CHECK_THROWS_AS(validate_dag(self), InvalidParameter);

  Dag dup = chain3();
  dup.edges.push_back({0, 1});
  CHECK_THROWS_AS(validate_dag(dup), InvalidParameter);

  Dag cyc = chain3();
  cyc.edges.push_back({2, 0});
  CHECK_THROWS_AS(validate_dag(cyc), InvalidParameter);

  Dag range = chain3();
  range.edges.push_back({0, 7});
  CHECK_THROWS_AS(validate_dag(range), InvalidParameter);

  Dag card = chain3();
  card.nodes[1].cardinality = 1;
  CHECK_THROWS_AS(validate_dag(card), InvalidParameter);
}

TEST_CASE("topological order puts parents before children") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto dags = tu::all_dags(4);
    const Dag& d = dags[(seed * 97) % dags.size()];
    const auto order = topological_order(d);
    std::vector<int> pos(d.size());
    for (int k = 0; k < d.size(); ++k) pos[order[k]] = k;
    for (const auto& [a, b] : d.edges) CHECK(pos[a] < pos[b]);
  }
}

TEST_CASE("pack and unpack round-trip mixed cardinalities") {
  std::vector<Variable> vars = {{"a", 2}, {"b", 3}, {"c", 4}};
  CHECK(state_count(vars) == 24);
  std::vector<int> state(3), back(3);
  for (std::size_t idx = 0; idx < 24; ++idx) {
    unpack_state(vars, idx, state);
    CHECK(pack_state(vars, state) == idx);
  }
  // last variable fastest
  unpack_state(vars, 1, state);
  CHECK(state == std::vector<int>{0, 0, 1});
  unpack_state(vars, 4, back);
  CHECK(back == std::vector<int>{0, 1, 0});
}

TEST_CASE("bayesnet validation checks row counts and normalization") {
  BayesNet net = or_gate_model(3, 0.6);
  CHECK_NOTHROW(validate_bayesnet(net));

  BayesNet missing = net;
  missing.cpts[2].pop_back();
  CHECK_THROWS_AS(validate_bayesnet(missing), InvalidParameter);

  BayesNet skewed = net;
  skewed.cpts[0][0] = {0.7, 0.7};
  CHECK_THROWS_AS(validate_bayesnet(skewed), InvalidParameter);

  BayesNet negative = net;
  negative.cpts[0][0] = {1.2, -0.2};
  CHECK_THROWS_AS(validate_bayesnet(negative), InvalidParameter);
}

TEST_CASE("joint refuses oversized state spaces") {
  Dag d;
  for (int i = 0; i < 30; ++i) d.nodes.push_back({"X" + std::to_string(i + 1), 2});
  BayesNet net;
  net.dag = d;
  net.cpts.assign(30, {{0.5, 0.5}});
  CHECK_THROWS_AS(joint_from_net(net), StateSpaceTooLarge);
}

TEST_CASE("exact ci on hand-built models") {
  const JointTable og = joint_from_net(or_gate_model(3, 0.6));
  CHECK(exact_ci(og, 0, 1, {}));        // roots are independent
  CHECK_FALSE(exact_ci(og, 0, 1, {2})); // conditioning on the OR couples them
  CHECK_FALSE(exact_ci(og, 0, 2, {}));
  CHECK_FALSE(exact_ci(og, 0, 2, {1}));

  BayesNet chain;
  chain.dag = chain3();
  chain.cpts = {{{0.6, 0.4}}, {{0.8, 0.2}, {0.3, 0.7}}, {{0.9, 0.1}, {0.25, 0.75}}};
  const JointTable cj = joint_from_net(chain);
  CHECK(exact_ci(cj, 0, 2, {1}));
  CHECK_FALSE(exact_ci(cj, 0, 2, {}));
  CHECK_FALSE(exact_ci(cj, 0, 1, {}));

  // uniform chain is unfaithful: everything looks independent
  BayesNet flat;
  flat.dag = chain3();
  flat.cpts = {{{0.5, 0.5}}, {{0.5, 0.5}, {0.5, 0.5}}, {{0.5, 0.5}, {0.5, 0.5}}};
  const JointTable fj = joint_from_net(flat);
  CHECK(exact_ci(fj, 0, 1, {}));
  CHECK(exact_ci(fj, 0, 2, {}));
}

TEST_CASE("exact ci agrees with the cross-multiplication oracle") {
  const auto dags = tu::all_dags(3);
  for (std::size_t di = 0; di < dags.size(); ++di) {
    const BayesNet net = tu::random_net(dags[di], 1000 + di);
    const JointTable joint = joint_from_net(net);
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j)
        for (const auto& b : tu::subsets_of_others(3, i, j))
          CHECK(exact_ci(joint, i, j, b) == tu::ci_by_crossmult(joint, i, j, b));
  }
}

TEST_CASE("d-separation implies exact independence on any parameterization") {
  const auto dags = tu::all_dags(4);
  for (std::size_t di = 0; di < dags.size(); di += 13) {
    const BayesNet net = tu::random_net(dags[di], 77 + di);
    const JointTable joint = joint_from_net(net);
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j)
        for (const auto& b : tu::subsets_of_others(4, i, j))
          if (tu::d_separated(dags[di], i, j, b)) CHECK(exact_ci(joint, i, j, b));
  }
}

TEST_CASE("faithful parameterizations match d-separation both ways") {
  const auto dags = tu::all_dags(4);
  for (std::size_t di = 0; di < dags.size(); di += 101) {
    const Dag& d = dags[di];
    const BayesNet net = tu::faithful_net(d, 31 + di);
    const JointTable joint = joint_from_net(net);
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j)
        for (const auto& b : tu::subsets_of_others(4, i, j))
          CHECK(exact_ci(joint, i, j, b) == tu::d_separated(d, i, j, b));
  }
}

TEST_CASE("tv surrogate frozen values") {
  const JointTable og = joint_from_net(or_gate_model(3, 0.6));
  CHECK(tv_to_ci_surrogate(og, 0, 1, {2}) == doctest::Approx(0.18).epsilon(1e-12));
  CHECK(tv_to_ci_surrogate(og, 0, 1, {}) == doctest::Approx(0.0).epsilon(1e-12));

  BayesNet copy;
  copy.dag = chain3();
  copy.dag.nodes.pop_back();
  copy.dag.edges = {{0, 1}};
  copy.cpts = {{{0.5, 0.5}}, {{1.0, 0.0}, {0.0, 1.0}}};
  const JointTable cj = joint_from_net(copy);
  CHECK(tv_to_ci_surrogate(cj, 0, 1, {}) == doctest::Approx(0.5).epsilon(1e-12));

  // zero exactly when independent, positive otherwise
  CHECK(tv_to_ci_surrogate(og, 0, 2, {}) > 0.0);
  CHECK(exact_ci(og, 0, 1, {}));
}

TEST_CASE("sampling is deterministic per seed and converges") {
  const BayesNet net = or_gate_model(3, 0.6);
  const Dataset a = sample_dataset(net, 500, 42);
  const Dataset b = sample_dataset(net, 500, 42);
  const Dataset c = sample_dataset(net, 500, 43);
  CHECK(a.values == b.values);
  CHECK(a.values != c.values);
  CHECK(a.rows() == 500);
  CHECK(a.variables.size() == 3);

  const std::size_t k = 20000;
  const Dataset big = sample_dataset(net, k, 7);
  std::size_t hits = 0;
  for (std::size_t r = 0; r < k; ++r) {
    const auto row = big.row(r);
    if (row[0] == 0 && row[1] == 0 && row[2] == 0) ++hits;
  }
  const double freq = static_cast<double>(hits) / static_cast<double>(k);
  const double sigma = std::sqrt(0.36 * 0.64 / static_cast<double>(k));
  CHECK(std::abs(freq - 0.36) < 5.0 * sigma);

  // OR holds in every sampled row
  for (std::size_t r = 0; r < 200; ++r) {
    const auto row = big.row(r);
    CHECK(row[2] == ((row[0] != 0 || row[1] != 0) ? 1 : 0));
  }
}

TEST_CASE("or-gate factory validates inputs") {
  CHECK_THROWS_AS(or_gate_model(1, 0.5), InvalidParameter);
  CHECK_THROWS_AS(or_gate_model(3, 0.0), InvalidParameter);
  CHECK_THROWS_AS(or_gate_model(3, 1.0), InvalidParameter);
  CHECK_NOTHROW(validate_bayesnet(or_gate_model(5, 0.25)));
}
