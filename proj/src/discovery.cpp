#include "cdsc/discovery.hpp"

#include <algorithm>

#include "cdsc/rng.hpp"

namespace cdsc {

namespace {

// Lexicographic combinations of size k from pool (which is sorted).
bool next_combination(const std::vector<int>& pool, std::vector<int>& idx) {
  const int k = static_cast<int>(idx.size());
  const int n = static_cast<int>(pool.size());
  int p = k - 1;
  while (p >= 0 && idx[p] == n - k + p) --p;
  if (p < 0) return false;
  ++idx[p];
  for (int q = p + 1; q < k; ++q) idx[q] = idx[q - 1] + 1;
  return true;
}

bool directed_part_has_cycle(const Pattern& p) {
  std::vector<int> state(p.n, 0);
  std::vector<int> stack;
  for (int s = 0; s < p.n; ++s) {
    if (state[s]) continue;
    stack.push_back(s);
    while (!stack.empty()) {
      int u = stack.back();
      if (state[u] == 0) {
        state[u] = 1;
        for (auto [a, b] : p.directed)
          if (a == u) {
            if (state[b] == 1) return true;
            if (state[b] == 0) stack.push_back(b);
          }
      } else {
        state[u] = 2;
        stack.pop_back();
      }
    }
  }
  return false;
}

}  // namespace

TraceEntry ExactOracleSource::query(int i, int j, const std::vector<int>& b) {
  TraceEntry e;
  e.i = i;
  e.j = j;
  e.cond = b;
  e.from_oracle = true;
  e.independent = exact_ci(joint_, i, j, b);
  return e;
}

FiniteSampleSource::FiniteSampleSource(std::shared_ptr<RowSource> rows,
                                       TesterConfig config, double m)
    : rows_(std::move(rows)), config_(config), m_(m) {
  validate_config(config_);
  if (!(m_ > 0.0)) throw InvalidParameter("expected sample count must be positive");
}

TraceEntry FiniteSampleSource::query(int i, int j, const std::vector<int>& b) {
  std::uint64_t seed = mix_seed({config_.rng_seed, static_cast<std::uint64_t>(i),
                                 static_cast<std::uint64_t>(j)});
  for (int k : b) seed = mix_seed(seed, 0x636f6e64ULL + static_cast<std::uint64_t>(k));
  const CiDecision d = ci_test(*rows_, i, j, b, config_, m_, seed);
  TraceEntry e;
  e.i = i;
  e.j = j;
  e.cond = b;
  e.from_oracle = false;
  e.independent = d.independent;
  e.statistic = d.statistic;
  e.threshold = d.threshold;
  e.samples = d.samples_drawn;
  return e;
}

std::string HybridSource::key(int i, int j, const std::vector<int>& b) {
  if (i > j) std::swap(i, j);
  std::string s = std::to_string(i) + "," + std::to_string(j) + "|";
  std::vector<int> c = b;
  std::sort(c.begin(), c.end());
  for (int k : c) s += std::to_string(k) + ",";
  return s;
}

TraceEntry HybridSource::query(int i, int j, const std::vector<int>& b) {
  auto it = answers_.find(key(i, j, b));
  if (it == answers_.end()) return fallback_->query(i, j, b);
  TraceEntry e;
  e.i = i;
  e.j = j;
  e.cond = b;
  e.from_oracle = true;
  e.independent = it->second;
  return e;
}

DiscoveryResult skeleton_step(CiSource& ci, int max_cond) {
  const int n = ci.node_count();
  if (n < 2) throw InvalidParameter("skeleton needs at least 2 variables");

  DiscoveryResult res;
  res.pattern.n = n;
  const int cap = max_cond < 0 ? n - 2 : std::min(max_cond, n - 2);

  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      std::vector<int> pool;
      for (int k = 0; k < n; ++k)
        if (k != i && k != j) pool.push_back(k);

      bool separated = false;
      for (int size = 0; size <= cap && !separated; ++size) {
        std::vector<int> idx(size);
        for (int t = 0; t < size; ++t) idx[t] = t;
        bool more = true;
        while (more && !separated) {
          std::vector<int> b(size);
          for (int t = 0; t < size; ++t) b[t] = pool[idx[t]];
          TraceEntry e = ci.query(i, j, b);
          res.trace.entries.push_back(e);
          if (e.independent) {
            res.sepsets[{i, j}] = b;
            separated = true;
          }
          more = next_combination(pool, idx);
        }
      }
      if (!separated) res.pattern.undirected.insert({i, j});
    }
  return res;
}

namespace {

DiscoveryResult finish_orientation(DiscoveryResult res) {
  try {
    const auto vs = find_v_structures(res.pattern, res.sepsets);
    Pattern oriented = res.pattern;
    for (const auto& v : vs) {
      // Collider edges point into k; conflicting demands surface here.
      for (int tail : {v.i, v.j}) {
        if (oriented.has_directed(v.k, tail))
          throw OrientationConflict("collider orientation conflicts at edge " +
                                    std::to_string(tail) + "," + std::to_string(v.k));
        oriented.undirected.erase(std::minmax(tail, v.k));
        oriented.directed.insert({tail, v.k});
      }
    }
    if (directed_part_has_cycle(oriented))
      throw OrientationConflict("collider orientations form a directed cycle");
    res.pattern = meek_close(oriented);
    return res;
  } catch (const OrientationConflict& e) {
    throw RecoveryFailed(e.what(), std::move(res.trace));
  }
}

}  // namespace

DiscoveryResult run_ic(CiSource& ci) { return finish_orientation(skeleton_step(ci)); }

DiscoveryResult run_pc(CiSource& ci, int max_cond) {
  if (max_cond < 0) throw InvalidParameter("max_cond must be non-negative");
  return finish_orientation(skeleton_step(ci, max_cond));
}

bool recovery_success(const Pattern& found, const Dag& truth) {
  return patterns_equal(found, pattern_of_dag(truth));
}

}  // namespace cdsc
