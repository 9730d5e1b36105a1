#include "cdsc/citest.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <unordered_map>

#include "cdsc/rng.hpp"

namespace cdsc {

namespace {

void check_pair_args(const std::vector<Variable>& vars, int i, int j,
                     const std::vector<int>& b) {
  const int n = static_cast<int>(vars.size());
  auto in_range = [n](int v) { return v >= 0 && v < n; };
  if (!in_range(i) || !in_range(j) || i == j)
    throw InvalidParameter("ci_test: bad variable pair");
  for (int k : b)
    if (!in_range(k) || k == i || k == j)
      throw InvalidParameter("ci_test: bad conditioning set");
}

}  // namespace

void validate_config(const TesterConfig& config) {
  if (!(config.epsilon > 0.0 && config.epsilon < 1.0))
    throw InvalidParameter("epsilon must lie in (0, 1)");
  if (!(config.c_prime > 0.0)) throw InvalidParameter("c_prime must be positive");
  if (!(config.gamma > 0.0 && config.gamma < 1.0))
    throw InvalidParameter("gamma must lie in (0, 1)");
  if (config.beta && !(*config.beta > 0.0))
    throw InvalidParameter("beta must be positive when given");
}

struct GenerativeSource::Impl {
  BayesNet net;
  std::vector<int> order;
  std::vector<std::vector<int>> parents;
  std::mt19937_64 gen;
  std::uniform_real_distribution<double> unif{0.0, 1.0};
};

GenerativeSource::GenerativeSource(BayesNet net) : impl_(std::make_shared<Impl>()) {
  validate_bayesnet(net);
  impl_->net = std::move(net);
  impl_->order = topological_order(impl_->net.dag);
  impl_->parents.resize(impl_->net.dag.size());
  for (int i = 0; i < impl_->net.dag.size(); ++i)
    impl_->parents[i] = impl_->net.dag.parents_of(i);
}

const std::vector<Variable>& GenerativeSource::variables() const {
  return impl_->net.dag.nodes;
}

void GenerativeSource::reset(std::uint64_t seed) {
  impl_->gen.seed(splitmix64(seed));
}

bool GenerativeSource::next(std::vector<int>& row) {
  const auto& vars = impl_->net.dag.nodes;
  row.resize(vars.size());
  for (int i : impl_->order) {
    std::size_t r = 0;
    for (int par : impl_->parents[i]) r = r * vars[par].cardinality + row[par];
    const auto& dist = impl_->net.cpts[i][r];
    double u = impl_->unif(impl_->gen);
    int v = 0;
    double acc = dist[0];
    while (u > acc && v + 1 < static_cast<int>(dist.size())) acc += dist[++v];
    row[i] = v;
  }
  return true;
}

bool DatasetSource::next(std::vector<int>& row) {
  if (pos_ >= data_->rows()) return false;
  auto r = data_->row(pos_++);
  row.assign(r.begin(), r.end());
  return true;
}

long long poisson_count(double m, std::uint64_t seed) {
  if (!(m > 0.0) || m > 1e9)
    throw InvalidParameter("poisson mean must lie in (0, 1e9]");
  std::mt19937_64 gen(splitmix64(seed));
  std::poisson_distribution<long long> pois(m);
  return pois(gen);
}

double epsilon_prime(double epsilon, int card_x, int card_y) {
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw InvalidParameter("epsilon must lie in (0, 1)");
  if (card_x < 2 || card_y < 2)
    throw InvalidParameter("cardinalities must be at least 2");
  return epsilon / std::sqrt(static_cast<double>(card_x) * card_y);
}

double expected_m_from_beta(double beta, double m_support, double eps_eff) {
  if (!(beta > 0.0)) throw InvalidParameter("beta must be positive");
  if (!(m_support >= 1.0)) throw InvalidParameter("support size must be at least 1");
  if (!(eps_eff > 0.0 && eps_eff < 1.0))
    throw InvalidParameter("effective epsilon must lie in (0, 1)");
  const double a = std::sqrt(m_support) / (eps_eff * eps_eff);
  const double b1 = std::pow(m_support, 7.0 / 8.0) / eps_eff;
  const double b2 = std::pow(m_support, 6.0 / 7.0) / std::pow(eps_eff, 8.0 / 7.0);
  return beta * std::max(a, std::min(b1, b2));
}

double tau_threshold(double m, double m_support, double eps_prime, double gamma) {
  if (!(m > 0.0)) throw InvalidParameter("m must be positive");
  if (!(m_support >= 1.0)) throw InvalidParameter("support size must be at least 1");
  if (!(eps_prime > 0.0)) throw InvalidParameter("eps_prime must be positive");
  if (!(gamma > 0.0 && gamma < 1.0)) throw InvalidParameter("gamma must lie in (0, 1)");
  const double me = m * eps_prime;
  return 0.5 * gamma *
         std::min(m * eps_prime * eps_prime,
                  (me * me) * (me * me) / (m_support * m_support * m_support));
}

double phi_from_counts(const std::vector<long long>& counts, int card_x, int card_y) {
  if (card_x < 2 || card_y < 2)
    throw InvalidParameter("phi_statistic needs cardinalities of at least 2");
  if (static_cast<int>(counts.size()) != card_x * card_y)
    throw InvalidParameter("phi_statistic: count table has wrong shape");
  long long k = 0;
  for (long long c : counts) k += c;
  if (k < 4) throw TooFewSamples("phi_statistic needs at least 4 samples");

  std::vector<long long> row(card_x, 0), col(card_y, 0);
  for (int x = 0; x < card_x; ++x)
    for (int y = 0; y < card_y; ++y) {
      row[x] += counts[x * card_y + y];
      col[y] += counts[x * card_y + y];
    }

  const double K = static_cast<double>(k);
  const double d2 = K * (K - 1);
  const double d3 = d2 * (K - 2);
  const double d4 = d3 * (K - 3);

  // Unbiased moments: pairs of distinct samples estimate p_xy^2, ordered
  // triples estimate p_xy p_x p_y, ordered quadruples estimate p_x^2 p_y^2.
  double phi = 0.0;
  for (int x = 0; x < card_x; ++x)
    for (int y = 0; y < card_y; ++y) {
      const double n = static_cast<double>(counts[x * card_y + y]);
      const double nr = static_cast<double>(row[x]);
      const double nc = static_cast<double>(col[y]);
      const double t1 = n * (n - 1) / d2;
      const double t2 = -2.0 * n * ((nr - 1) * (nc - 1) - (n - 1)) / d3;
      const double t3 = (nr * (nr - 1) * nc * (nc - 1) -
                         4.0 * n * (nr - 1) * (nc - 1) + 2.0 * n * (n - 1)) /
                        d4;
      phi += t1 + t2 + t3;
    }
  return phi;
}

double phi_statistic(const std::vector<std::pair<int, int>>& pairs, int card_x,
                     int card_y) {
  if (card_x < 2 || card_y < 2)
    throw InvalidParameter("phi_statistic needs cardinalities of at least 2");
  std::vector<long long> counts(static_cast<std::size_t>(card_x) * card_y, 0);
  for (auto [x, y] : pairs) {
    if (x < 0 || x >= card_x || y < 0 || y >= card_y)
      throw InvalidParameter("phi_statistic: value code out of range");
    ++counts[static_cast<std::size_t>(x) * card_y + y];
  }
  return phi_from_counts(counts, card_x, card_y);
}

CiDecision ci_test(RowSource& source, int i, int j, const std::vector<int>& b,
                   const TesterConfig& config, double m, std::uint64_t seed) {
  validate_config(config);
  const auto& vars = source.variables();
  check_pair_args(vars, i, j, b);

  const int cx = vars[i].cardinality;
  const int cy = vars[j].cardinality;
  double m_support = 1.0;
  for (int k : b) m_support *= vars[k].cardinality;

  const long long K = poisson_count(m, mix_seed(seed, 0x706f6973ULL));

  CiDecision out;
  out.samples_drawn = K;
  out.threshold =
      tau_threshold(m, m_support, epsilon_prime(config.epsilon, cx, cy), config.gamma);

  // Bin rows by the conditioning assignment; each bin keeps a cell table.
  std::unordered_map<std::uint64_t, std::vector<long long>> bins;
  source.reset(mix_seed(seed, 0x726f7773ULL));
  std::vector<int> row;
  for (long long r = 0; r < K; ++r) {
    if (!source.next(row))
      throw InsufficientData(K, static_cast<long long>(r));
    std::uint64_t z = 0;
    for (int k : b) z = z * vars[k].cardinality + row[k];
    auto& table = bins[z];
    if (table.empty()) table.assign(static_cast<std::size_t>(cx) * cy, 0);
    ++table[static_cast<std::size_t>(row[i]) * cy + row[j]];
  }

  // Accumulate in sorted bin order so the statistic is a canonical float sum.
  std::vector<std::uint64_t> keys;
  keys.reserve(bins.size());
  for (const auto& [z, table] : bins) keys.push_back(z);
  std::sort(keys.begin(), keys.end());

  double a = 0.0;
  for (std::uint64_t z : keys) {
    const auto& table = bins[z];
    long long nz = 0;
    for (long long c : table) nz += c;
    if (nz < 4) continue;
    a += static_cast<double>(nz) * phi_from_counts(table, cx, cy);
    ++out.bins_used;
  }
  out.statistic = a;
  out.independent = a <= out.threshold;
  return out;
}

}  // namespace cdsc
