#pragma once

#include <map>
#include <set>
#include <utility>
#include <vector>

#include "cdsc/model.hpp"

namespace cdsc {

// Partially directed graph. Undirected edges are stored once with i < j;
// a pair is never both directed and undirected.
struct Pattern {
  int n = 0;
  std::set<std::pair<int, int>> directed;
  std::set<std::pair<int, int>> undirected;

  bool adjacent(int a, int b) const;
  bool has_undirected(int a, int b) const;
  bool has_directed(int a, int b) const { return directed.count({a, b}) > 0; }
};

// Separating sets keyed by the unordered pair (stored with i < j).
using SepSets = std::map<std::pair<int, int>, std::vector<int>>;

struct VStructure {
  int i, k, j;  // i -> k <- j with i < j
  bool operator<(const VStructure& o) const {
    return std::tie(i, k, j) < std::tie(o.i, o.k, o.j);
  }
};

std::set<int> ancestors(const Dag& g, int i);

// The Markov equivalence pattern of a DAG: skeleton plus every edge whose
// orientation is shared by the whole equivalence class.
Pattern pattern_of_dag(const Dag& g);

// Collider detection over an undirected skeleton given separating sets.
// Throws MissingSepSet if a non-adjacent pair in a candidate triple has no entry.
std::set<VStructure> find_v_structures(const Pattern& skeleton, const SepSets& sep);

// Orientation-propagation closure. Applies the four standard rules until no
// rule fires. Throws OrientationConflict if both directions of an edge get demanded.
Pattern meek_close(const Pattern& p);

bool patterns_equal(const Pattern& a, const Pattern& b);

}  // namespace cdsc
