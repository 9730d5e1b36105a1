#pragma once

#include <utility>
#include <vector>

#include "cdsc/citest.hpp"

namespace cdsc {

// One conditional independence test: the pair {i, j} (i < j) and the sorted
// conditioning set. Indices are 0-based.
struct TestIndex {
  int i = 0, j = 0;
  std::vector<int> cond;

  bool operator==(const TestIndex&) const = default;
  bool operator<(const TestIndex& o) const;
};

// Tests grouped by conditioning support size, pair distance scale, and
// conditioning set size. count is a real number so families with 2^(N-2)
// members per pair stay representable.
struct TestClass {
  double m_support = 1.0;
  double eps_prime = 0.0;
  int cond_size = 0;
  double count = 0.0;
};

struct TestFamily {
  std::vector<TestClass> classes;
  double total() const;
};

struct ExpertiseSet {
  enum class Kind { Explicit, CondSizeAbove, KnownEdges };
  Kind kind = Kind::Explicit;
  std::vector<TestIndex> tests;              // Explicit: exact tests answered
  int r = 0;                                 // CondSizeAbove: |cond| > r answered
  std::vector<std::pair<int, int>> edges;    // KnownEdges: whole pairs answered

  static ExpertiseSet explicit_tests(std::vector<TestIndex> t);
  static ExpertiseSet cond_size_above(int r);
  static ExpertiseSet known_edges(std::vector<std::pair<int, int>> e);
};

struct AllocatedClass {
  TestClass cls;
  double alpha_each = 0.0;
};

struct BudgetReport {
  double alpha = 0.0;
  double alpha0_star = 0.0;
  double m_expected = 0.0;
  double regime_r1 = 0.0, regime_r2 = 0.0, regime_r3 = 0.0;  // test counts
  double value_of_expertise = 0.0;
  double c_prime = 1.0;
  double gamma = kDefaultGamma;
  double epsilon = 0.0;
  std::vector<AllocatedClass> classes;
};

// Expected samples for one test at miss probability alpha, piecewise in the
// conditioning support size M with breakpoints eps'^(-8/3) and eps'^(-8).
double m_single(double m_support, double alpha, double eps_prime, double c_prime,
                double gamma);

// Every test over N variables: all pairs, all conditioning subsets.
TestFamily full_family(const std::vector<int>& cards, double epsilon);

// Splits the total miss budget alpha across a family so every test needs the
// same expected sample count, and reports that equalized count.
BudgetReport allocate_alphas(const TestFamily& family, double alpha, double epsilon,
                             const TesterConfig& config);

// Worst-case plan over the full family.
BudgetReport budget_ic(const std::vector<int>& cards, double alpha, double epsilon,
                       const TesterConfig& config);

// Plan over the family with expertise-answered tests removed; also reports
// how many expected samples the expertise saved.
BudgetReport budget_with_expertise(const std::vector<int>& cards, double alpha,
                                   double epsilon, const ExpertiseSet& expertise,
                                   const TesterConfig& config);

// Closed-form upper bounds for uniform cardinality l. These use the weight
// l^(3k/8) per conditioning size k, so they dominate the exact plan.
double bound_uniform(int n, int l, double alpha, double epsilon,
                     const TesterConfig& config);
double bound_sparsity(int n, int l, double alpha, double epsilon, int r,
                      const TesterConfig& config);
double bound_known_edges(int n, int l, double alpha, double epsilon,
                         long long known_pairs, const TesterConfig& config);

}  // namespace cdsc
