#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cdsc/budget.hpp"
#include "cdsc/discovery.hpp"

namespace cdsc {

enum class Algorithm { Ic, Pc };

struct ExperimentSpec {
  BayesNet model;
  Algorithm algorithm = Algorithm::Ic;
  int max_cond = 1;                      // conditioning cap for Pc
  std::vector<double> sample_sizes;      // expected samples per test
  int trials = 100;
  std::uint64_t base_seed = 0;
  TesterConfig tester;
  int workers = 0;                       // 0 = decide from hardware and CDSC_THREADS
  std::string output_path;               // used by callers that write the curve
};

struct ErrorPoint {
  double m = 0.0;
  int trials = 0;
  int failures = 0;
  double error_rate = 0.0;
  double ci_halfwidth = 0.0;     // 95% binomial half-width
  double theoretical_alpha = 1.0;
};

struct ErrorCurve {
  std::vector<ErrorPoint> points;
};

// Per-trial recovery over fresh finite-sample sources; failures count both
// wrong patterns and orientation conflicts. Results are deterministic in
// (spec.base_seed, grid index, trial index) regardless of worker count.
ErrorCurve error_rate_experiment(const ExperimentSpec& spec);

// Inverts the planner: the miss budget alpha that makes the planned expected
// sample count equal m, clipped to [0, 1]. Mode Pc uses the sparsity bound
// with cap r.
std::vector<double> theoretical_curve(int n, int l, double epsilon, double c_prime,
                                      const std::vector<double>& sample_grid,
                                      Algorithm algorithm, int r = 1);

// Fills ErrorPoint::theoretical_alpha for every grid point.
void attach_theoretical(ErrorCurve& curve, int n, int l, double epsilon,
                        double c_prime, Algorithm algorithm, int r = 1);

struct ComparisonRow {
  int n = 0;
  double m_ic = 0.0;
  double m_pc = 0.0;
  double ratio = 0.0;
};

// Worst-case plan against the sparsity-capped plan over a range of N.
std::vector<ComparisonRow> budget_comparison(int n_min, int n_max, int l, double alpha,
                                             double epsilon, int r,
                                             const TesterConfig& config);

// Fits c_prime so the planner's m at alpha = 0.5 lands on the measured curve's
// 0.5 crossing (log-interpolated; clamped to the grid edge when the curve
// never straddles 0.5). q1 is alpha * m_expected at c_prime = 1.
double calibrate_c_prime(const ErrorCurve& curve, double q1);

// alpha * m_expected for the planner at c_prime = 1 (independent of alpha).
double planner_q1(int n, int l, double epsilon, Algorithm algorithm, int r = 1);

// The epsilon recommended for a known model: the smallest surrogate TV over
// the dependent triples (pairs with every conditioning set dependent use all
// their triples; exactly independent triples are skipped).
double weakest_dependent_tv(const BayesNet& model);

int resolve_workers(int requested);

}  // namespace cdsc
