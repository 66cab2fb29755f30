#pragma once

// Hand-rolled random terrain generators for property tests. Elevations are
// drawn on a coarse lattice so that ties and touching intervals show up.

#include <algorithm>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "iflow/core.hpp"
#include "iflow/io.hpp"

namespace gen {

using iflow::Edge;
using iflow::ElevationInterval;
using iflow::ImpreciseTerrain;
using iflow::NodeId;
using iflow::NodeSet;
using iflow::Point2;
using Rng = std::mt19937_64;

inline int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
inline double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
inline bool coin(Rng& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

// Lattice value in [0, levels * step].
inline double level(Rng& rng, int levels, double step) { return uniform_int(rng, 0, levels) * step; }

inline ElevationInterval random_interval(Rng& rng, int levels = 20, double step = 0.5) {
  double a = level(rng, levels, step);
  double width = coin(rng, 0.2) ? 0.0 : level(rng, levels / 2, step);
  return {a, a + width};
}

// Connected geometric graph: random spanning tree plus extra edges, nodes
// at distinct lattice positions.
inline ImpreciseTerrain random_graph(Rng& rng, std::size_t n, double extra_edge_ratio = 0.8) {
  std::set<std::pair<int, int>> used;
  std::vector<Point2> pos;
  while (pos.size() < n) {
    int x = uniform_int(rng, 0, 15), y = uniform_int(rng, 0, 15);
    if (used.insert({x, y}).second) pos.push_back({double(x), double(y)});
  }
  std::vector<ElevationInterval> iv(n);
  for (auto& i : iv) i = random_interval(rng);
  std::set<std::pair<NodeId, NodeId>> es;
  for (NodeId v = 1; v < n; ++v) {
    NodeId u = static_cast<NodeId>(uniform_int(rng, 0, static_cast<int>(v) - 1));
    es.insert({u, v});
  }
  std::size_t extra = static_cast<std::size_t>(extra_edge_ratio * n);
  for (std::size_t i = 0; i < extra && n > 1; ++i) {
    NodeId a = static_cast<NodeId>(uniform_int(rng, 0, static_cast<int>(n) - 1));
    NodeId b = static_cast<NodeId>(uniform_int(rng, 0, static_cast<int>(n) - 1));
    if (a != b) es.insert({std::min(a, b), std::max(a, b)});
  }
  std::vector<Edge> edges;
  for (auto [a, b] : es) edges.push_back({a, b});
  return ImpreciseTerrain(std::move(pos), std::move(iv), std::move(edges));
}

inline iflow::io::GridSpec random_grid_spec(Rng& rng, std::size_t ncols, std::size_t nrows) {
  iflow::io::GridSpec g;
  g.ncols = ncols;
  g.nrows = nrows;
  g.cellsize = 1.0;
  for (std::size_t i = 0; i < ncols * nrows; ++i) {
    auto iv = random_interval(rng);
    g.low.push_back(iv.low);
    g.high.push_back(iv.high);
  }
  return g;
}

inline ImpreciseTerrain random_grid(Rng& rng, std::size_t ncols = 6, std::size_t nrows = 6) {
  return iflow::io::grid_terrain(random_grid_spec(rng, ncols, nrows));
}

// Either kind, for the mixed suites.
inline ImpreciseTerrain random_terrain(Rng& rng, std::size_t max_nodes = 50) {
  if (coin(rng)) return random_grid(rng);
  return random_graph(rng, static_cast<std::size_t>(uniform_int(rng, 2, static_cast<int>(max_nodes))));
}

// Center node 0 with 1..max_deg neighbors at random real offsets.
inline ImpreciseTerrain random_star(Rng& rng, int max_deg = 5) {
  int d = uniform_int(rng, 1, max_deg);
  std::vector<Point2> pos{{0, 0}};
  std::vector<ElevationInterval> iv{random_interval(rng, 10, 1.0)};
  std::vector<Edge> edges;
  for (int i = 1; i <= d; ++i) {
    pos.push_back({double(uniform_int(rng, -3, 3)) + 0.25 * i, double(uniform_int(rng, 1, 3))});
    iv.push_back(random_interval(rng, 10, 1.0));
    edges.push_back({0, static_cast<NodeId>(i)});
  }
  return ImpreciseTerrain(std::move(pos), std::move(iv), std::move(edges));
}

inline NodeSet random_subset(Rng& rng, std::size_t n, std::size_t max_size = 3) {
  std::size_t k = static_cast<std::size_t>(uniform_int(rng, 1, static_cast<int>(std::min(n, max_size))));
  std::vector<NodeId> ids;
  for (std::size_t i = 0; i < k; ++i) ids.push_back(static_cast<NodeId>(uniform_int(rng, 0, static_cast<int>(n) - 1)));
  return NodeSet(std::move(ids));
}

inline iflow::Realization random_realization(Rng& rng, const ImpreciseTerrain& t) {
  iflow::Realization r;
  r.elevation.resize(t.size());
  for (NodeId v = 0; v < t.size(); ++v) {
    double lo = t.low(v), hi = t.high(v);
    int pick = uniform_int(rng, 0, 3);
    r.elevation[v] = pick == 0 ? lo : pick == 1 ? hi : uniform(rng, lo, hi);
  }
  return r;
}

}  // namespace gen
