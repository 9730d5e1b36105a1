#include "cdsc/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <random>

#include "cdsc/rng.hpp"

namespace cdsc {

namespace {

void check_node_index(const std::vector<Variable>& vars, int i, const char* what) {
  if (i < 0 || i >= static_cast<int>(vars.size()))
    throw InvalidParameter(std::string(what) + ": node index " + std::to_string(i) +
                           " out of range");
}

void check_cards(const std::vector<Variable>& vars) {
  for (const auto& v : vars)
    if (v.cardinality < 2)
      throw InvalidParameter("variable '" + v.name + "' has cardinality < 2");
}

// Accumulates the (i, j, b) marginal as nested bins: per conditioning
// assignment z, a card_i x card_j cell matrix.
struct TripleMarginal {
  std::size_t zbins = 1;
  int ci = 0, cj = 0;
  std::vector<double> mass;  // zbins * ci * cj

  double& at(std::size_t z, int x, int y) { return mass[(z * ci + x) * cj + y]; }
  double at(std::size_t z, int x, int y) const { return mass[(z * ci + x) * cj + y]; }
};

TripleMarginal triple_marginal(const JointTable& joint, int i, int j,
                               const std::vector<int>& b) {
  const auto& vars = joint.variables;
  check_node_index(vars, i, "exact_ci");
  check_node_index(vars, j, "exact_ci");
  if (i == j) throw InvalidParameter("exact_ci: i and j must differ");
  for (int k : b) {
    check_node_index(vars, k, "exact_ci");
    if (k == i || k == j)
      throw InvalidParameter("exact_ci: conditioning set overlaps the pair");
  }

  TripleMarginal m;
  m.ci = vars[i].cardinality;
  m.cj = vars[j].cardinality;
  for (int k : b) m.zbins *= static_cast<std::size_t>(vars[k].cardinality);
  m.mass.assign(m.zbins * m.ci * m.cj, 0.0);

  std::vector<int> x(vars.size());
  for (std::size_t s = 0; s < joint.probs.size(); ++s) {
    unpack_state(vars, s, x);
    std::size_t z = 0;
    for (int k : b) z = z * vars[k].cardinality + x[k];
    m.at(z, x[i], x[j]) += joint.probs[s];
  }
  return m;
}

}  // namespace

bool Dag::has_edge(int a, int b) const {
  return std::find(edges.begin(), edges.end(), std::make_pair(a, b)) != edges.end();
}

std::vector<int> Dag::parents_of(int i) const {
  std::vector<int> out;
  for (auto [a, b] : edges)
    if (b == i) out.push_back(a);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> Dag::children_of(int i) const {
  std::vector<int> out;
  for (auto [a, b] : edges)
    if (a == i) out.push_back(b);
  std::sort(out.begin(), out.end());
  return out;
}

void validate_dag(const Dag& g) {
  check_cards(g.nodes);
  for (auto [a, b] : g.edges) {
    check_node_index(g.nodes, a, "dag edge");
    check_node_index(g.nodes, b, "dag edge");
    if (a == b) throw InvalidParameter("dag has a self loop at node " + std::to_string(a));
  }
  for (std::size_t e = 0; e < g.edges.size(); ++e)
    for (std::size_t f = e + 1; f < g.edges.size(); ++f)
      if (g.edges[e] == g.edges[f]) throw InvalidParameter("dag has a duplicate edge");
  topological_order(g);  // throws on cycles
}

std::vector<int> topological_order(const Dag& g) {
  const int n = g.size();
  std::vector<int> indeg(n, 0);
  for (auto [a, b] : g.edges) {
    (void)a;
    ++indeg[b];
  }
  std::priority_queue<int, std::vector<int>, std::greater<>> ready;
  for (int i = 0; i < n; ++i)
    if (indeg[i] == 0) ready.push(i);
  std::vector<int> order;
  order.reserve(n);
  while (!ready.empty()) {
    int u = ready.top();
    ready.pop();
    order.push_back(u);
    for (auto [a, b] : g.edges)
      if (a == u && --indeg[b] == 0) ready.push(b);
  }
  if (static_cast<int>(order.size()) != n)
    throw InvalidParameter("graph contains a directed cycle");
  return order;
}

void validate_bayesnet(const BayesNet& net) {
  validate_dag(net.dag);
  const int n = net.dag.size();
  if (static_cast<int>(net.cpts.size()) != n)
    throw InvalidParameter("bayes net needs one cpt per node");
  for (int i = 0; i < n; ++i) {
    std::size_t rows = 1;
    for (int p : net.dag.parents_of(i))
      rows *= static_cast<std::size_t>(net.dag.nodes[p].cardinality);
    if (net.cpts[i].size() != rows)
      throw InvalidParameter("cpt for node " + std::to_string(i) +
                             " has wrong row count");
    for (const auto& row : net.cpts[i]) {
      if (static_cast<int>(row.size()) != net.dag.nodes[i].cardinality)
        throw InvalidParameter("cpt row width mismatch at node " + std::to_string(i));
      double sum = 0;
      for (double p : row) {
        if (p < 0) throw InvalidParameter("negative cpt entry");
        sum += p;
      }
      if (std::abs(sum - 1.0) > 1e-12)
        throw InvalidParameter("cpt row does not sum to 1 at node " + std::to_string(i));
    }
  }
}

std::size_t state_count(const std::vector<Variable>& vars) {
  std::size_t n = 1;
  for (const auto& v : vars) n *= static_cast<std::size_t>(v.cardinality);
  return n;
}

std::size_t pack_state(const std::vector<Variable>& vars, std::span<const int> x) {
  std::size_t idx = 0;
  for (std::size_t k = 0; k < vars.size(); ++k)
    idx = idx * vars[k].cardinality + static_cast<std::size_t>(x[k]);
  return idx;
}

void unpack_state(const std::vector<Variable>& vars, std::size_t idx, std::span<int> out) {
  for (std::size_t k = vars.size(); k-- > 0;) {
    out[k] = static_cast<int>(idx % vars[k].cardinality);
    idx /= vars[k].cardinality;
  }
}

JointTable joint_from_net(const BayesNet& net, std::size_t max_states) {
  validate_bayesnet(net);
  const auto& vars = net.dag.nodes;
  std::size_t states = 1;
  for (const auto& v : vars) {
    states *= static_cast<std::size_t>(v.cardinality);
    if (states > max_states)
      throw StateSpaceTooLarge("joint table would exceed " + std::to_string(max_states) +
                               " states");
  }

  std::vector<std::vector<int>> parents(vars.size());
  for (std::size_t i = 0; i < vars.size(); ++i) parents[i] = net.dag.parents_of(static_cast<int>(i));

  JointTable joint;
  joint.variables = vars;
  joint.probs.assign(states, 0.0);
  std::vector<int> x(vars.size());
  for (std::size_t s = 0; s < states; ++s) {
    unpack_state(vars, s, x);
    double p = 1.0;
    for (std::size_t i = 0; i < vars.size() && p > 0; ++i) {
      std::size_t row = 0;
      for (int par : parents[i]) row = row * vars[par].cardinality + x[par];
      p *= net.cpts[i][row][x[i]];
    }
    joint.probs[s] = p;
  }
  return joint;
}

BayesNet or_gate_model(int n, double p0) {
  if (n < 2) throw InvalidParameter("or_gate_model needs at least 2 nodes");
  if (!(p0 > 0.0 && p0 < 1.0))
    throw InvalidParameter("or_gate_model needs p0 in (0, 1)");
  BayesNet net;
  net.dag.nodes.resize(n);
  for (int i = 0; i < n; ++i) net.dag.nodes[i] = {"X" + std::to_string(i + 1), 2};
  for (int i = 0; i + 1 < n; ++i) net.dag.edges.emplace_back(i, n - 1);
  net.cpts.resize(n);
  for (int i = 0; i + 1 < n; ++i) net.cpts[i] = {{p0, 1.0 - p0}};
  const std::size_t rows = std::size_t{1} << (n - 1);
  net.cpts[n - 1].resize(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    // Row r encodes the parent assignment mixed-radix; any nonzero bit fires the OR.
    int v = r == 0 ? 0 : 1;
    net.cpts[n - 1][r] = {v == 0 ? 1.0 : 0.0, v == 0 ? 0.0 : 1.0};
  }
  return net;
}

Dataset sample_dataset(const BayesNet& net, std::size_t k, std::uint64_t seed) {
  validate_bayesnet(net);
  const auto& vars = net.dag.nodes;
  const auto order = topological_order(net.dag);
  std::vector<std::vector<int>> parents(vars.size());
  for (std::size_t i = 0; i < vars.size(); ++i) parents[i] = net.dag.parents_of(static_cast<int>(i));

  Dataset data;
  data.variables = vars;
  data.values.resize(k * vars.size());
  std::mt19937_64 gen(splitmix64(seed));
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<int> x(vars.size());
  for (std::size_t r = 0; r < k; ++r) {
    for (int i : order) {
      std::size_t row = 0;
      for (int par : parents[i]) row = row * vars[par].cardinality + x[par];
      const auto& dist = net.cpts[i][row];
      double u = unif(gen);
      int v = 0;
      double acc = dist[0];
      while (u > acc && v + 1 < static_cast<int>(dist.size())) acc += dist[++v];
      x[i] = v;
    }
    std::copy(x.begin(), x.end(), data.values.begin() + r * vars.size());
  }
  return data;
}

bool exact_ci(const JointTable& joint, int i, int j, const std::vector<int>& b,
              double tol) {
  const auto m = triple_marginal(joint, i, j, b);
  for (std::size_t z = 0; z < m.zbins; ++z) {
    double pz = 0;
    for (int x = 0; x < m.ci; ++x)
      for (int y = 0; y < m.cj; ++y) pz += m.at(z, x, y);
    if (pz <= 0) continue;
    for (int x = 0; x < m.ci; ++x) {
      double px = 0;
      for (int y = 0; y < m.cj; ++y) px += m.at(z, x, y);
      for (int y = 0; y < m.cj; ++y) {
        double py = 0;
        for (int xx = 0; xx < m.ci; ++xx) py += m.at(z, xx, y);
        if (std::abs(m.at(z, x, y) / pz - (px / pz) * (py / pz)) > tol) return false;
      }
    }
  }
  return true;
}

double tv_to_ci_surrogate(const JointTable& joint, int i, int j,
                          const std::vector<int>& b) {
  const auto m = triple_marginal(joint, i, j, b);
  double l1 = 0;
  for (std::size_t z = 0; z < m.zbins; ++z) {
    double pz = 0;
    for (int x = 0; x < m.ci; ++x)
      for (int y = 0; y < m.cj; ++y) pz += m.at(z, x, y);
    if (pz <= 0) continue;
    for (int x = 0; x < m.ci; ++x) {
      double px = 0;
      for (int y = 0; y < m.cj; ++y) px += m.at(z, x, y);
      for (int y = 0; y < m.cj; ++y) {
        double py = 0;
        for (int xx = 0; xx < m.ci; ++xx) py += m.at(z, xx, y);
        l1 += std::abs(m.at(z, x, y) - px * py / pz);
      }
    }
  }
  return 0.5 * l1;
}

}  // namespace cdsc
