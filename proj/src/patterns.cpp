#include "cdsc/patterns.hpp"

#include <algorithm>

#include "cdsc/errors.hpp"

namespace cdsc {

namespace {

std::pair<int, int> canon(int a, int b) { return a < b ? std::make_pair(a, b) : std::make_pair(b, a); }

// Directs a -> b in place. The edge must currently be undirected or already
// directed the same way.
void orient(Pattern& p, int a, int b) {
  if (p.has_directed(a, b)) return;
  if (p.has_directed(b, a))
    throw OrientationConflict("both directions demanded for edge " +
                              std::to_string(a) + "," + std::to_string(b));
  p.undirected.erase(canon(a, b));
  p.directed.insert({a, b});
}

}  // namespace

bool Pattern::adjacent(int a, int b) const {
  return has_undirected(a, b) || has_directed(a, b) || has_directed(b, a);
}

bool Pattern::has_undirected(int a, int b) const {
  return undirected.count(a < b ? std::make_pair(a, b) : std::make_pair(b, a)) > 0;
}

std::set<int> ancestors(const Dag& g, int i) {
  std::set<int> out;
  std::vector<int> stack{i};
  while (!stack.empty()) {
    int u = stack.back();
    stack.pop_back();
    for (auto [a, b] : g.edges)
      if (b == u && out.insert(a).second) stack.push_back(a);
  }
  return out;
}

Pattern pattern_of_dag(const Dag& g) {
  validate_dag(g);
  Pattern p;
  p.n = g.size();
  for (auto [a, b] : g.edges) p.undirected.insert(canon(a, b));
  // Colliders keep their DAG orientation; everything else starts undirected.
  for (int k = 0; k < p.n; ++k) {
    const auto par = g.parents_of(k);
    for (std::size_t s = 0; s < par.size(); ++s)
      for (std::size_t t = s + 1; t < par.size(); ++t)
        if (!g.adjacent(par[s], par[t])) {
          orient(p, par[s], k);
          orient(p, par[t], k);
        }
  }
  return meek_close(p);
}

std::set<VStructure> find_v_structures(const Pattern& skeleton, const SepSets& sep) {
  std::set<VStructure> out;
  for (int k = 0; k < skeleton.n; ++k)
    for (int i = 0; i < skeleton.n; ++i)
      for (int j = i + 1; j < skeleton.n; ++j) {
        if (i == k || j == k) continue;
        if (!skeleton.adjacent(i, k) || !skeleton.adjacent(j, k)) continue;
        if (skeleton.adjacent(i, j)) continue;
        auto it = sep.find({i, j});
        if (it == sep.end())
          throw MissingSepSet("no separating set recorded for pair " +
                              std::to_string(i) + "," + std::to_string(j));
        if (std::find(it->second.begin(), it->second.end(), k) == it->second.end())
          out.insert({i, k, j});
      }
  return out;
}

Pattern meek_close(const Pattern& p) {
  Pattern out = p;
  while (true) {
    // Premises are evaluated against the sweep-start state, so opposite
    // demands raised within one sweep surface as a conflict instead of being
    // resolved by scan order.
    const Pattern base = out;
    std::vector<std::pair<int, int>> demands;

    // R1: a -> b, b - c, a and c non-adjacent  =>  b -> c.
    for (auto [a, b] : base.directed)
      for (int c = 0; c < base.n; ++c)
        if (c != a && base.has_undirected(b, c) && !base.adjacent(a, c))
          demands.emplace_back(b, c);

    // R2: a -> b -> c with a - c  =>  a -> c.
    for (auto [a, c] : base.undirected)
      for (int b = 0; b < base.n; ++b) {
        if (base.has_directed(a, b) && base.has_directed(b, c))
          demands.emplace_back(a, c);
        if (base.has_directed(c, b) && base.has_directed(b, a))
          demands.emplace_back(c, a);
      }

    // R3: a - b, a - c, a - d, c -> b, d -> b, c and d non-adjacent  =>  a -> b.
    for (auto [x, y] : base.undirected)
      for (int rep = 0; rep < 2; ++rep) {
        const int a = rep == 0 ? x : y;
        const int b = rep == 0 ? y : x;
        bool fired = false;
        for (int c = 0; c < base.n && !fired; ++c) {
          if (!base.has_undirected(a, c) || !base.has_directed(c, b)) continue;
          for (int d = c + 1; d < base.n && !fired; ++d) {
            if (d == a || d == b) continue;
            if (base.has_undirected(a, d) && base.has_directed(d, b) &&
                !base.adjacent(c, d)) {
              demands.emplace_back(a, b);
              fired = true;
            }
          }
        }
      }

    // R4: a - b, a - c, c -> d, d -> b, b and c non-adjacent  =>  a -> b.
    // Sound because b -> a would force a - c into either a new collider at a
    // (c -> a <- b) or the cycle a -> c -> d -> b -> a.
    for (auto [x, y] : base.undirected)
      for (int rep = 0; rep < 2; ++rep) {
        const int a = rep == 0 ? x : y;
        const int b = rep == 0 ? y : x;
        bool fired = false;
        for (int c = 0; c < base.n && !fired; ++c) {
          if (c == b || !base.has_undirected(a, c) || base.adjacent(b, c)) continue;
          for (int d = 0; d < base.n && !fired; ++d) {
            if (d == a || d == b || d == c) continue;
            if (base.has_directed(c, d) && base.has_directed(d, b)) {
              demands.emplace_back(a, b);
              fired = true;
            }
          }
        }
      }

    if (demands.empty()) break;
    for (auto [a, b] : demands) orient(out, a, b);
  }
  return out;
}

bool patterns_equal(const Pattern& a, const Pattern& b) {
  return a.n == b.n && a.directed == b.directed && a.undirected == b.undirected;
}

}  // namespace cdsc
