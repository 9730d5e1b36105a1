#pragma once

#include <cstdint>
#include <memory>
#include <numbers>
#include <optional>
#include <utility>
#include <vector>

#include "cdsc/model.hpp"

namespace cdsc {

// Default slack constant in the acceptance threshold: 1 - 5/(2e).
inline constexpr double kDefaultGamma = 1.0 - 5.0 / (2.0 * std::numbers::e);

struct TesterConfig {
  double epsilon = 0.1;           // distance scale separating dependence from independence
  double c_prime = 1.0;           // calibration constant used by the sample planner
  double gamma = kDefaultGamma;   // threshold slack in (0, 1)
  std::optional<double> beta;     // optional scale factor for expected_m_from_beta
  std::uint64_t rng_seed = 0;
};

void validate_config(const TesterConfig& config);

struct CiDecision {
  bool independent = false;
  double statistic = 0.0;   // accumulated A
  double threshold = 0.0;   // tau
  long long bins_used = 0;  // conditioning bins holding at least 4 samples
  long long samples_drawn = 0;  // the Poisson draw K
};

// Rows a CI test consumes. reset() is called once per test with a per-test
// seed; next() fills one assignment and reports whether a row was produced.
class RowSource {
 public:
  virtual ~RowSource() = default;
  virtual const std::vector<Variable>& variables() const = 0;
  virtual void reset(std::uint64_t seed) = 0;
  virtual bool next(std::vector<int>& row) = 0;
};

// Streams ancestral samples from a Bayesian network.
class GenerativeSource : public RowSource {
 public:
  explicit GenerativeSource(BayesNet net);
  const std::vector<Variable>& variables() const override;
  void reset(std::uint64_t seed) override;
  bool next(std::vector<int>& row) override;

 private:
  struct Impl;
  std::shared_ptr<Impl> impl_;
};

// Replays a fixed dataset from row 0; runs dry when the dataset is exhausted.
class DatasetSource : public RowSource {
 public:
  explicit DatasetSource(const Dataset& data) : data_(&data) {}
  const std::vector<Variable>& variables() const override { return data_->variables; }
  void reset(std::uint64_t) override { pos_ = 0; }
  bool next(std::vector<int>& row) override;

 private:
  const Dataset* data_;
  std::size_t pos_ = 0;
};

// One exact Poisson draw, deterministic per seed, valid for means up to 1e9.
long long poisson_count(double m, std::uint64_t seed);

// Per-test distance scale: epsilon / sqrt(card_x * card_y).
double epsilon_prime(double epsilon, int card_x, int card_y);

// Expected sample count as a function of the scale factor beta:
// beta * max(M^(1/2)/eps^2, min(M^(7/8)/eps, M^(6/7)/eps^(8/7))).
double expected_m_from_beta(double beta, double m_support, double eps_eff);

// Acceptance threshold (gamma/2) * min(m*eps'^2, (m*eps')^4 / M^3).
double tau_threshold(double m, double m_support, double eps_prime, double gamma);

// Unbiased estimate of || P - P_X (x) P_Y ||_2^2 from at least 4 paired
// samples. Exactly unbiased for every fixed sample count K >= 4.
double phi_statistic(const std::vector<std::pair<int, int>>& pairs, int card_x,
                     int card_y);

// Same estimator evaluated on a card_x * card_y contingency table.
double phi_from_counts(const std::vector<long long>& counts, int card_x, int card_y);

// Finite-sample conditional independence test: draws K ~ Poisson(m) rows,
// bins them by the conditioning assignment, and accumulates |S_z| * phi(S_z)
// over bins with at least 4 rows. Declares independence iff the total stays
// at or below tau_threshold.
CiDecision ci_test(RowSource& source, int i, int j, const std::vector<int>& b,
                   const TesterConfig& config, double m, std::uint64_t seed);

inline CiDecision ci_test(RowSource& source, int i, int j, const std::vector<int>& b,
                          const TesterConfig& config, double m) {
  return ci_test(source, i, j, b, config, m, config.rng_seed);
}

}  // namespace cdsc
