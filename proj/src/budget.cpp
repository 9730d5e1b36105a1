#include "cdsc/budget.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <tuple>

#include "cdsc/errors.hpp"

namespace cdsc {

namespace {

constexpr double kEight3 = 8.0 / 3.0;

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw InvalidParameter("alpha must lie in (0, 1)");
}

void check_cards(const std::vector<int>& cards) {
  if (cards.size() < 2)
    throw InvalidParameter("a test family needs at least 2 variables");
  for (int c : cards)
    if (c < 2) throw InvalidParameter("cardinalities must be at least 2");
}

// Piecewise regime factor f with m = 16 C' f / (alpha gamma). Grouping uses
// the integer-floor breakpoints so integer support sizes land deterministically.
double regime_factor(double m_support, double eps_prime) {
  const double r1 = std::floor(std::pow(eps_prime, -kEight3));
  const double r2 = std::floor(std::pow(eps_prime, -8.0));
  if (m_support <= r1) return 1.0 / (eps_prime * eps_prime);
  if (m_support <= r2) return std::pow(m_support, 3.0 / 8.0) / eps_prime;
  return std::pow(m_support, 5.0 / 14.0) / std::pow(eps_prime, 8.0 / 7.0);
}

int regime_of(double m_support, double eps_prime) {
  const double r1 = std::floor(std::pow(eps_prime, -kEight3));
  const double r2 = std::floor(std::pow(eps_prime, -8.0));
  if (m_support <= r1) return 1;
  if (m_support <= r2) return 2;
  return 3;
}

using ClassKey = std::tuple<double, double, int>;  // (m_support, eps_prime, size)

struct FamilyBuilder {
  std::map<ClassKey, double> classes;

  void add(double m_support, double eps_prime, int size, double count) {
    classes[{m_support, eps_prime, size}] += count;
  }

  TestFamily finish() const {
    TestFamily fam;
    for (const auto& [key, count] : classes) {
      if (count <= 0) continue;
      fam.classes.push_back({std::get<0>(key), std::get<1>(key), std::get<2>(key), count});
    }
    return fam;
  }
};

// Expands the conditioning-set generating function over a card multiset:
// entries (product of cards, set size) -> number of subsets.
std::map<std::pair<double, int>, double> subset_classes(
    const std::map<int, int>& card_counts, int max_size) {
  std::map<std::pair<double, int>, double> acc{{{1.0, 0}, 1.0}};
  for (const auto& [card, k] : card_counts) {
    std::map<std::pair<double, int>, double> next;
    for (const auto& [key, cnt] : acc) {
      double binom = 1.0;
      double power = 1.0;
      for (int t = 0; t <= k; ++t) {
        const int size = key.second + t;
        if (size <= max_size) next[{key.first * power, size}] += cnt * binom;
        binom = binom * (k - t) / (t + 1);
        power *= card;
      }
    }
    acc = std::move(next);
  }
  return acc;
}

TestFamily build_family(const std::vector<int>& cards, double epsilon, int max_cond,
                        const std::set<std::pair<int, int>>& excluded_pairs) {
  check_cards(cards);
  const int n = static_cast<int>(cards.size());

  std::map<int, int> counts;
  for (int c : cards) ++counts[c];

  // Pairs grouped by their unordered cardinality combination; all pairs in a
  // combination leave the same card multiset behind.
  std::map<std::pair<int, int>, double> pair_counts;
  for (auto ita = counts.begin(); ita != counts.end(); ++ita) {
    for (auto itb = ita; itb != counts.end(); ++itb) {
      double c = ita == itb
                     ? 0.5 * ita->second * (ita->second - 1)
                     : static_cast<double>(ita->second) * itb->second;
      if (c > 0) pair_counts[{ita->first, itb->first}] = c;
    }
  }
  for (auto [a, b] : excluded_pairs) {
    auto key = std::minmax(cards[a], cards[b]);
    pair_counts[{key.first, key.second}] -= 1.0;
  }

  FamilyBuilder fb;
  for (const auto& [combo, pcount] : pair_counts) {
    if (pcount <= 0) continue;
    auto remaining = counts;
    if (--remaining[combo.first] == 0) remaining.erase(combo.first);
    if (--remaining[combo.second] == 0) remaining.erase(combo.second);
    const double ep = epsilon_prime(epsilon, combo.first, combo.second);
    for (const auto& [key, cnt] : subset_classes(remaining, std::min(max_cond, n - 2)))
      fb.add(key.first, ep, key.second, pcount * cnt);
  }
  return fb.finish();
}

// Sum over k of C(n-2, k) l^(3k/8), the per-pair closed-form weight. For
// large n the terms are accumulated in log space.
double weighted_pair_sum(int n, int l, int r) {
  if (n < 2 || l < 2) throw InvalidParameter("need n >= 2 and l >= 2");
  if (r < 0 || r > n - 2) throw InvalidParameter("sparsity cap out of range");
  if (n <= 42) {
    double sum = 0.0, binom = 1.0;
    for (int k = 0; k <= r; ++k) {
      sum += binom * std::pow(static_cast<double>(l), 3.0 * k / 8.0);
      binom = binom * (n - 2 - k) / (k + 1);
    }
    return sum;
  }
  std::vector<double> logs(r + 1);
  double maxlog = -1e300;
  for (int k = 0; k <= r; ++k) {
    logs[k] = std::lgamma(n - 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - 1.0 - k) +
              3.0 * k / 8.0 * std::log(static_cast<double>(l));
    maxlog = std::max(maxlog, logs[k]);
  }
  double acc = 0.0;
  for (double lg : logs) acc += std::exp(lg - maxlog);
  return std::exp(maxlog) * acc;
}

double bound_base(int n, int l, double alpha, double epsilon,
                  const TesterConfig& config) {
  check_alpha(alpha);
  if (n < 2) throw InvalidParameter("need at least 2 variables");
  const double ep = epsilon_prime(epsilon, l, l);
  if (!(config.c_prime > 0.0) || !(config.gamma > 0.0 && config.gamma < 1.0))
    throw InvalidParameter("bad planner constants");
  return 16.0 * config.c_prime / (alpha * config.gamma * ep * ep);
}

}  // namespace

bool TestIndex::operator<(const TestIndex& o) const {
  return std::tie(i, j, cond) < std::tie(o.i, o.j, o.cond);
}

double TestFamily::total() const {
  double t = 0.0;
  for (const auto& c : classes) t += c.count;
  return t;
}

ExpertiseSet ExpertiseSet::explicit_tests(std::vector<TestIndex> t) {
  ExpertiseSet s;
  s.kind = Kind::Explicit;
  s.tests = std::move(t);
  return s;
}

ExpertiseSet ExpertiseSet::cond_size_above(int r) {
  ExpertiseSet s;
  s.kind = Kind::CondSizeAbove;
  s.r = r;
  return s;
}

ExpertiseSet ExpertiseSet::known_edges(std::vector<std::pair<int, int>> e) {
  ExpertiseSet s;
  s.kind = Kind::KnownEdges;
  s.edges = std::move(e);
  return s;
}

double m_single(double m_support, double alpha, double eps_prime, double c_prime,
                double gamma) {
  check_alpha(alpha);
  if (!(m_support >= 1.0)) throw InvalidParameter("support size must be at least 1");
  if (!(eps_prime > 0.0 && eps_prime < 1.0))
    throw InvalidParameter("eps_prime must lie in (0, 1)");
  if (!(c_prime > 0.0)) throw InvalidParameter("c_prime must be positive");
  if (!(gamma > 0.0 && gamma < 1.0)) throw InvalidParameter("gamma must lie in (0, 1)");

  const double base = 16.0 * c_prime / (alpha * gamma);
  const double r1 = std::pow(eps_prime, -kEight3);
  const double r2 = std::pow(eps_prime, -8.0);
  if (m_support <= r1) return base / (eps_prime * eps_prime);
  if (m_support <= r2) return base * std::pow(m_support, 3.0 / 8.0) / eps_prime;
  return base * std::pow(m_support, 5.0 / 14.0) / std::pow(eps_prime, 8.0 / 7.0);
}

TestFamily full_family(const std::vector<int>& cards, double epsilon) {
  return build_family(cards, epsilon, static_cast<int>(cards.size()) - 2, {});
}

BudgetReport allocate_alphas(const TestFamily& family, double alpha, double epsilon,
                             const TesterConfig& config) {
  check_alpha(alpha);
  TesterConfig probe = config;
  probe.epsilon = epsilon;
  validate_config(probe);
  if (family.classes.empty() || family.total() <= 0)
    throw EmptyFamily("no tests remain to budget for");

  double eps_ref = family.classes.front().eps_prime;
  for (const auto& c : family.classes) eps_ref = std::min(eps_ref, c.eps_prime);

  // Relative weights chosen so every class ends up with the same expected
  // sample count as the 1-bin reference test at eps_ref.
  std::vector<double> weight(family.classes.size());
  double weighted_total = 0.0;
  for (std::size_t k = 0; k < family.classes.size(); ++k) {
    const auto& c = family.classes[k];
    weight[k] = regime_factor(c.m_support, c.eps_prime) * eps_ref * eps_ref;
    weighted_total += c.count * weight[k];
  }

  // Bisection on the reference budget alpha0: sum of per-test budgets is
  // monotone increasing, with the root at alpha / weighted_total.
  auto spent = [&](double a0) {
    double s = 0.0;
    for (std::size_t k = 0; k < family.classes.size(); ++k)
      s += family.classes[k].count * a0 * weight[k];
    return s;
  };
  double lo = 0.0, hi = alpha;
  if (spent(hi) < alpha) hi = alpha / std::max(weighted_total, 1e-300);
  for (int it = 0; it < 200 && (hi - lo) > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (spent(mid) < alpha ? lo : hi) = mid;
  }
  const double alpha0 = 0.5 * (lo + hi);

  BudgetReport rep;
  rep.alpha = alpha;
  rep.alpha0_star = alpha0;
  rep.epsilon = epsilon;
  rep.c_prime = config.c_prime;
  rep.gamma = config.gamma;
  rep.m_expected = 16.0 * config.c_prime / (alpha0 * config.gamma * eps_ref * eps_ref);
  for (std::size_t k = 0; k < family.classes.size(); ++k) {
    const auto& c = family.classes[k];
    rep.classes.push_back({c, alpha0 * weight[k]});
    switch (regime_of(c.m_support, c.eps_prime)) {
      case 1: rep.regime_r1 += c.count; break;
      case 2: rep.regime_r2 += c.count; break;
      default: rep.regime_r3 += c.count; break;
    }
  }
  return rep;
}

BudgetReport budget_ic(const std::vector<int>& cards, double alpha, double epsilon,
                       const TesterConfig& config) {
  return allocate_alphas(full_family(cards, epsilon), alpha, epsilon, config);
}

BudgetReport budget_with_expertise(const std::vector<int>& cards, double alpha,
                                   double epsilon, const ExpertiseSet& expertise,
                                   const TesterConfig& config) {
  check_cards(cards);
  const int n = static_cast<int>(cards.size());
  TestFamily fam;

  switch (expertise.kind) {
    case ExpertiseSet::Kind::CondSizeAbove: {
      if (expertise.r < 0) throw EmptyFamily("expertise answers every test");
      fam = build_family(cards, epsilon, std::min(expertise.r, n - 2), {});
      break;
    }
    case ExpertiseSet::Kind::KnownEdges: {
      std::set<std::pair<int, int>> excl;
      for (auto [a, b] : expertise.edges) {
        if (a < 0 || b < 0 || a >= n || b >= n || a == b)
          throw InvalidParameter("known edge endpoints out of range");
        excl.insert(std::minmax(a, b));
      }
      if (static_cast<long long>(excl.size()) >=
          static_cast<long long>(n) * (n - 1) / 2)
        throw EmptyFamily("expertise answers every test");
      fam = build_family(cards, epsilon, n - 2, excl);
      break;
    }
    case ExpertiseSet::Kind::Explicit: {
      fam = full_family(cards, epsilon);
      std::vector<TestIndex> tests = expertise.tests;
      std::sort(tests.begin(), tests.end());
      tests.erase(std::unique(tests.begin(), tests.end()), tests.end());
      std::map<ClassKey, double> removal;
      for (const auto& t : tests) {
        if (t.i < 0 || t.j <= t.i || t.j >= n)
          throw InvalidParameter("expertise test has a bad pair");
        double m_support = 1.0;
        int prev = -1;
        for (int k : t.cond) {
          if (k < 0 || k >= n || k == t.i || k == t.j || k <= prev)
            throw InvalidParameter("expertise test has a bad conditioning set");
          prev = k;
          m_support *= cards[k];
        }
        removal[{m_support, epsilon_prime(epsilon, cards[t.i], cards[t.j]),
                 static_cast<int>(t.cond.size())}] += 1.0;
      }
      for (auto& c : fam.classes) {
        auto it = removal.find({c.m_support, c.eps_prime, c.cond_size});
        if (it != removal.end()) {
          c.count -= it->second;
          if (c.count < -1e-9) throw InvalidParameter("expertise set is not a subfamily");
          removal.erase(it);
        }
      }
      if (!removal.empty()) throw InvalidParameter("expertise set is not a subfamily");
      std::erase_if(fam.classes, [](const TestClass& c) { return c.count <= 0; });
      break;
    }
  }

  if (fam.classes.empty()) throw EmptyFamily("no tests remain to budget for");
  BudgetReport rep = allocate_alphas(fam, alpha, epsilon, config);
  rep.value_of_expertise =
      budget_ic(cards, alpha, epsilon, config).m_expected - rep.m_expected;
  return rep;
}

double bound_uniform(int n, int l, double alpha, double epsilon,
                     const TesterConfig& config) {
  const double pairs = 0.5 * n * (n - 1.0);
  return bound_base(n, l, alpha, epsilon, config) * pairs *
         weighted_pair_sum(n, l, n - 2);
}

double bound_sparsity(int n, int l, double alpha, double epsilon, int r,
                      const TesterConfig& config) {
  const double pairs = 0.5 * n * (n - 1.0);
  return bound_base(n, l, alpha, epsilon, config) * pairs *
         weighted_pair_sum(n, l, r);
}

double bound_known_edges(int n, int l, double alpha, double epsilon,
                         long long known_pairs, const TesterConfig& config) {
  const long long all_pairs = static_cast<long long>(n) * (n - 1) / 2;
  if (known_pairs < 0 || known_pairs > all_pairs)
    throw InvalidParameter("known edge count out of range");
  if (known_pairs == all_pairs)
    throw EmptyFamily("every pair is already known");
  return bound_base(n, l, alpha, epsilon, config) *
         static_cast<double>(all_pairs - known_pairs) *
         weighted_pair_sum(n, l, n - 2);
}

}  // namespace cdsc
