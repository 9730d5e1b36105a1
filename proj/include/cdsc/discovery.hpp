#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "cdsc/citest.hpp"
#include "cdsc/patterns.hpp"

namespace cdsc {

struct TraceEntry {
  int i = 0, j = 0;
  std::vector<int> cond;
  bool from_oracle = false;
  bool independent = false;
  double statistic = 0.0;
  double threshold = 0.0;
  long long samples = 0;
};

struct DiscoveryTrace {
  std::vector<TraceEntry> entries;
};

// Answers conditional independence queries. Implementations decide whether
// an answer comes from exact computation, sampling, or recorded expertise.
class CiSource {
 public:
  virtual ~CiSource() = default;
  virtual const std::vector<Variable>& variables() const = 0;
  virtual TraceEntry query(int i, int j, const std::vector<int>& b) = 0;
  int node_count() const { return static_cast<int>(variables().size()); }
};

// Decides from the exact joint distribution.
class ExactOracleSource : public CiSource {
 public:
  explicit ExactOracleSource(JointTable joint) : joint_(std::move(joint)) {}
  const std::vector<Variable>& variables() const override { return joint_.variables; }
  TraceEntry query(int i, int j, const std::vector<int>& b) override;

 private:
  JointTable joint_;
};

// Runs the finite-sample test once per query; per-query seeds are derived
// from the config seed and the query index so runs reproduce exactly.
class FiniteSampleSource : public CiSource {
 public:
  FiniteSampleSource(std::shared_ptr<RowSource> rows, TesterConfig config, double m);
  const std::vector<Variable>& variables() const override { return rows_->variables(); }
  TraceEntry query(int i, int j, const std::vector<int>& b) override;

 private:
  std::shared_ptr<RowSource> rows_;
  TesterConfig config_;
  double m_;
};

// Answers queries found in the expertise map without spending samples and
// defers everything else to a fallback source.
class HybridSource : public CiSource {
 public:
  HybridSource(std::map<std::string, bool> answers, std::shared_ptr<CiSource> fallback)
      : answers_(std::move(answers)), fallback_(std::move(fallback)) {}
  const std::vector<Variable>& variables() const override {
    return fallback_->variables();
  }
  TraceEntry query(int i, int j, const std::vector<int>& b) override;

  static std::string key(int i, int j, const std::vector<int>& b);

 private:
  std::map<std::string, bool> answers_;
  std::shared_ptr<CiSource> fallback_;
};

struct DiscoveryResult {
  Pattern pattern;
  SepSets sepsets;
  DiscoveryTrace trace;
};

// Raised when conflicting query answers make orientation impossible.
struct RecoveryFailed : std::runtime_error {
  DiscoveryTrace trace;
  RecoveryFailed(const std::string& what, DiscoveryTrace t)
      : std::runtime_error(what), trace(std::move(t)) {}
};

// Edge-removal phase: pairs keep their edge unless some conditioning set up
// to max_cond (negative means unbounded) certifies independence. Conditioning
// sets are scanned by increasing size, lexicographic within a size, stopping
// at the first independence.
DiscoveryResult skeleton_step(CiSource& ci, int max_cond = -1);

// Full recovery: skeleton, collider orientation, then closure.
DiscoveryResult run_ic(CiSource& ci);

// Bounded-conditioning variant.
DiscoveryResult run_pc(CiSource& ci, int max_cond);

bool recovery_success(const Pattern& found, const Dag& truth);

}  // namespace cdsc
