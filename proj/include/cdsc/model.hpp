#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cdsc/errors.hpp"

namespace cdsc {

struct Variable {
  std::string name;
  int cardinality = 2;
};

// Directed acyclic graph over indexed variables. Edges are (parent, child)
// pairs with 0-based node indices. validate_dag() enforces acyclicity.
struct Dag {
  std::vector<Variable> nodes;
  std::vector<std::pair<int, int>> edges;

  int size() const { return static_cast<int>(nodes.size()); }
  bool has_edge(int a, int b) const;
  bool adjacent(int a, int b) const { return has_edge(a, b) || has_edge(b, a); }
  std::vector<int> parents_of(int i) const;
  std::vector<int> children_of(int i) const;
};

void validate_dag(const Dag& g);
std::vector<int> topological_order(const Dag& g);

// Bayesian network: one CPT per node. cpts[i] has one row per joint parent
// assignment (parents sorted by node index, mixed-radix order with the last
// parent fastest) and each row is a distribution over node i's values.
struct BayesNet {
  Dag dag;
  std::vector<std::vector<std::vector<double>>> cpts;
};

void validate_bayesnet(const BayesNet& net);

// Dense joint distribution. probs is indexed mixed-radix over the variables
// in order, with the LAST variable varying fastest.
struct JointTable {
  std::vector<Variable> variables;
  std::vector<double> probs;
};

// Rows of integer value codes, one entry per variable, stored flattened.
struct Dataset {
  std::vector<Variable> variables;
  std::vector<std::int32_t> values;

  std::size_t rows() const {
    return variables.empty() ? 0 : values.size() / variables.size();
  }
  std::span<const std::int32_t> row(std::size_t k) const {
    return {values.data() + k * variables.size(), variables.size()};
  }
};

std::size_t state_count(const std::vector<Variable>& vars);
std::size_t pack_state(const std::vector<Variable>& vars, std::span<const int> x);
void unpack_state(const std::vector<Variable>& vars, std::size_t idx, std::span<int> out);

// Multiplies the CPTs out into a dense joint table. Refuses joint state
// spaces above max_states.
JointTable joint_from_net(const BayesNet& net, std::size_t max_states = std::size_t{1} << 24);

// N-variable generator: X_1..X_{N-1} are independent binary roots with
// P(X_i = 0) = p0, and X_N is the deterministic OR of all of them.
BayesNet or_gate_model(int n, double p0);

// Ancestral sampling, deterministic per seed.
Dataset sample_dataset(const BayesNet& net, std::size_t k, std::uint64_t seed);

// Exact conditional independence X_i ⟂ X_j | X_b in the joint: holds iff
// every conditional cell factorizes to tolerance tol on bins with positive mass.
bool exact_ci(const JointTable& joint, int i, int j, const std::vector<int>& b,
              double tol = 1e-10);

// Total variation distance between the (X_i, X_j, X_b) marginal and its
// conditional-independence projection P(z) P(x|z) P(y|z). Zero iff exact_ci.
double tv_to_ci_surrogate(const JointTable& joint, int i, int j,
                          const std::vector<int>& b);

}  // namespace cdsc
