#pragma once

// Named terrains shared by the unit tests and the acceptance runner.

#include <string>
#include <vector>

#include "iflow/core.hpp"
#include "iflow/io.hpp"

namespace fixtures {

using iflow::Edge;
using iflow::ImpreciseTerrain;
using iflow::NodeId;

struct NodeSpec {
  double x, y, low, high;
};

inline ImpreciseTerrain make(const std::vector<NodeSpec>& nodes, const std::vector<Edge>& edges) {
  std::vector<iflow::Point2> pos;
  std::vector<iflow::ElevationInterval> iv;
  for (const auto& n : nodes) {
    pos.push_back({n.x, n.y});
    iv.push_back({n.low, n.high});
  }
  return ImpreciseTerrain(pos, iv, edges);
}

// a[5,5] - b[2,4] - c[0,1], unit spacing.
namespace chain {
inline constexpr NodeId a = 0, b = 1, c = 2;
inline ImpreciseTerrain terrain() {
  return make({{0, 0, 5, 5}, {1, 0, 2, 4}, {2, 0, 0, 1}}, {{0, 1}, {1, 2}});
}
}  // namespace chain

// a(2) with neighbors b(0) and c(1), both at distance 1; all fixed.
namespace fork {
inline constexpr NodeId a = 0, b = 1, c = 2;
inline ImpreciseTerrain terrain() {
  return make({{0, 0, 2, 2}, {1, 0, 0, 0}, {0, 1, 1, 1}}, {{0, 1}, {0, 2}});
}
}  // namespace fork

// Regular terrain whose persistent watershed of e is disconnected.
// Unit edges a-b, b-d, c-d and |de| = 1.6; a and e drop steeply into the
// sinks as and es. d flows to b only above 19/3 and c is never above 4.
namespace detour {
inline constexpr NodeId a = 0, b = 1, c = 2, d = 3, e = 4, as = 5, es = 6;
inline ImpreciseTerrain terrain() {
  return make(
      {
          {0, 2, 0, 0},            // a
          {0, 1, 2.375, 2.375},    // b
          {1, 0, 2, 4},            // c
          {0, 0, 1, 7},            // d
          {-1.6, 0, 0, 0},         // e
          {0, 3, -100, -100},      // as
          {-2.6, 0, -100, -100},   // es
      },
      {{a, b}, {b, d}, {c, d}, {d, e}, {a, as}, {e, es}});
}
}  // namespace detour

// Descending chain with overlapping intervals draining to q = 0: every
// node drains to q in every realization, yet every node but q can be a pit.
namespace valley {
inline constexpr NodeId q = 0;
inline constexpr std::size_t size = 6;
inline ImpreciseTerrain terrain() {
  std::vector<NodeSpec> nodes;
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < size; ++i) {
    nodes.push_back({static_cast<double>(i), 0, static_cast<double>(i), static_cast<double>(i) + 1.5});
    if (i) edges.push_back({static_cast<NodeId>(i - 1), static_cast<NodeId>(i)});
  }
  return make(nodes, edges);
}
}  // namespace valley

// Chain with disjoint, strictly ordered intervals draining to q = 0.
namespace staircase {
inline constexpr NodeId q = 0;
inline ImpreciseTerrain terrain() {
  return make({{0, 0, 0, 0.5}, {1, 0, 1, 1.5}, {2, 0, 2, 2.5}, {3, 0, 3, 3.5}, {4, 0, 4, 4.5}},
              {{0, 1}, {1, 2}, {2, 3}, {3, 4}});
}
}  // namespace staircase

// W-shaped chain: fixed pits at 1 and 3, wide imprecise apex at 2.
namespace w_chain {
inline constexpr NodeId left_pit = 1, apex = 2, right_pit = 3;
inline ImpreciseTerrain terrain() {
  return make({{0, 0, 5, 5}, {1, 0, 0, 0}, {2, 0, 1, 9}, {3, 0, 0, 0}, {4, 0, 5, 5}},
              {{0, 1}, {1, 2}, {2, 3}, {3, 4}});
}
}  // namespace w_chain

// Non-regular terrain on which persistent watersheds are not nested:
// p lies in PsWS(q) but PsWS(p) does not. Found by local search over small
// integer terrains; node t2 is isolated and only pads the id range.
namespace counter_nesting {
inline constexpr NodeId p = 0, q = 1, r = 2, s = 3, t = 4, t2 = 5, u = 6, v = 7, w = 8;
inline ImpreciseTerrain terrain() {
  return make(
      {
          {1, 2, 1, 3},    // p
          {2, 2, 3, 4},    // q
          {2, 1, 0, 7},    // r
          {0, 1, 8, 8},    // s
          {1, 0, 4, 4},    // t
          {4, 2, 10, 10},  // t2
          {4, 0, 2, 2},    // u
          {0, 2, 10, 10},  // v
          {2, 0, 8, 8},    // w
      },
      {{p, q}, {p, s}, {p, t}, {p, v}, {q, u}, {q, w}, {r, s}, {r, t}, {r, w}, {t, u}});
}
}  // namespace counter_nesting

// 5x3 D8 grid with two fixed pits at cells 6 and 8 and an imprecise saddle
// at cell 7 between them.
namespace two_pit {
inline constexpr NodeId left = 6, saddle = 7, right = 8;
inline iflow::io::GridSpec grid() {
  iflow::io::GridSpec g;
  g.ncols = 5;
  g.nrows = 3;
  g.cellsize = 1;
  g.low = {5, 5, 5, 5, 5, 5, 0, 3, 0, 5, 5, 5, 5, 5, 5};
  g.high = {6, 6, 6, 6, 6, 6, 0, 6, 0, 6, 6, 6, 6, 6, 6};
  return g;
}
inline ImpreciseTerrain terrain() { return iflow::io::grid_terrain(grid()); }
}  // namespace two_pit

}  // namespace fixtures
