#pragma once

// Slope diagrams and the per-edge elevation queries used by the sweeps.
//
// The diagram of a node p holds, for every neighbor q, the point
// (|pq|, high(q)). Only the lower-left convex chain of these points can ever
// be the steepest neighbor of p when all neighbors sit at their upper bound,
// so queries run on that chain. Candidate answers from the chain are then
// snapped to the exact binary64 steepest-descent predicate used by flowsim,
// which keeps canonical realizations verifiable with zero tolerance.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "iflow/core.hpp"

namespace iflow {

struct ChainPoint {
  double delta = 0.0;
  double high = 0.0;
  NodeId node = kNoNode;
  friend bool operator==(const ChainPoint&, const ChainPoint&) = default;
};

// Read-only view of one chain: points ordered by increasing distance
// (and strictly decreasing high); intercept[i] is where the line through
// points i and i+1 meets the vertical axis, so intercept has k-1 entries.
struct ChainView {
  std::span<const ChainPoint> points;
  std::span<const double> intercept;
  std::size_t size() const { return points.size(); }
};

struct SlopeDiagram {
  NodeId owner = kNoNode;
  std::vector<ChainPoint> points;
  std::vector<double> intercepts;
  ChainView view() const { return {points, intercepts}; }
};

namespace detail {

inline double intercept_of(const ChainPoint& a, const ChainPoint& b) {
  double s = (b.high - a.high) / (b.delta - a.delta);
  return a.high - s * a.delta;
}

// Lower-left convex chain of the given neighbor points.
inline void build_chain(std::vector<ChainPoint>& pts, std::vector<ChainPoint>& chain,
                        std::vector<double>& z) {
  std::sort(pts.begin(), pts.end(), [](const ChainPoint& a, const ChainPoint& b) {
    if (a.delta != b.delta) return a.delta < b.delta;
    if (a.high != b.high) return a.high < b.high;
    return a.node < b.node;
  });
  chain.clear();
  double minh = std::numeric_limits<double>::infinity();
  for (const auto& c : pts) {
    if (!(c.high < minh)) continue;  // dominated: not lower than something to its left
    minh = c.high;
    while (chain.size() >= 2) {
      const auto& a = chain[chain.size() - 2];
      const auto& b = chain.back();
      double cross = (b.delta - a.delta) * (c.high - a.high) - (b.high - a.high) * (c.delta - a.delta);
      if (cross > 0.0) break;
      chain.pop_back();
    }
    chain.push_back(c);
  }
  z.clear();
  for (std::size_t i = 0; i + 1 < chain.size(); ++i) z.push_back(intercept_of(chain[i], chain[i + 1]));
}

// Index of the chain vertex that is steepest from elevation z on the axis.
inline std::size_t active_vertex(const ChainView& c, double z) {
  auto it = std::partition_point(c.intercept.begin(), c.intercept.end(),
                                 [z](double zi) { return zi > z; });
  return static_cast<std::size_t>(it - c.intercept.begin());
}

// Axis intercept of the line through (dq, zq) and point c.
inline double line_intercept(double dq, double zq, const ChainPoint& c) {
  return (c.high * dq - zq * c.delta) / (dq - c.delta);
}

inline bool near_or_below(double a, double b) {
  return a <= b || (a - b) <= 1e-9 * (1.0 + std::abs(a) + std::abs(b));
}

}  // namespace detail

inline SlopeDiagram build_diagram(const ImpreciseTerrain& t, NodeId p) {
  if (t.degree(p) == 0)
    throw std::invalid_argument("slope diagram of isolated node " + std::to_string(p));
  std::vector<ChainPoint> pts;
  for (std::size_t k = t.adj_begin(p); k < t.adj_end(p); ++k)
    pts.push_back({t.adj_dist(k), t.high(t.adj_node(k)), t.adj_node(k)});
  SlopeDiagram d;
  d.owner = p;
  detail::build_chain(pts, d.points, d.intercepts);
  return d;
}

// Diagrams of all nodes of a terrain, stored contiguously. Holds a pointer
// to the terrain, which must outlive the index.
class SlopeIndex {
 public:
  explicit SlopeIndex(const ImpreciseTerrain& t) : t_(&t) {
    off_.assign(t.size() + 1, 0);
    zoff_.assign(t.size() + 1, 0);
    std::vector<ChainPoint> pts, chain;
    std::vector<double> z;
    const std::size_t half_edges = t.size() ? t.adj_end(static_cast<NodeId>(t.size() - 1)) : 0;
    pts_.reserve(half_edges);
    z_.reserve(half_edges);
    for (NodeId p = 0; p < t.size(); ++p) {
      pts.clear();
      for (std::size_t k = t.adj_begin(p); k < t.adj_end(p); ++k)
        pts.push_back({t.adj_dist(k), t.high(t.adj_node(k)), t.adj_node(k)});
      detail::build_chain(pts, chain, z);
      pts_.insert(pts_.end(), chain.begin(), chain.end());
      z_.insert(z_.end(), z.begin(), z.end());
      off_[p + 1] = pts_.size();
      zoff_[p + 1] = z_.size();
    }
  }

  const ImpreciseTerrain& terrain() const { return *t_; }
  ChainView chain(NodeId p) const {
    return {std::span<const ChainPoint>(pts_.data() + off_[p], off_[p + 1] - off_[p]),
            std::span<const double>(z_.data() + zoff_[p], zoff_[p + 1] - zoff_[p])};
  }

 private:
  const ImpreciseTerrain* t_;
  std::vector<std::size_t> off_, zoff_;
  std::vector<ChainPoint> pts_;
  std::vector<double> z_;
};

// True if, with `owner` at z_owner, the neighbor behind half-edge k at
// z_target and every other neighbor at its high value, the edge is a
// steepest-descent edge of owner with non-negative slope.
inline bool edge_is_steepest(const ImpreciseTerrain& t, NodeId owner, double z_owner, std::size_t k,
                             double z_target) {
  double s = steepness(z_owner, z_target, t.adj_dist(k));
  if (s < 0.0) return false;
  for (std::size_t j = t.adj_begin(owner); j < t.adj_end(owner); ++j) {
    if (j == k) continue;
    if (steepness(z_owner, t.high(t.adj_node(j)), t.adj_dist(j)) > s) return false;
  }
  return true;
}

namespace detail {

inline constexpr int kSnapSteps = 8;

// Bounds [lower, upper] on the owner elevation from the chain, real arithmetic.
struct UpBounds {
  double lower;
  double upper;
};

inline UpBounds up_bounds_chain(const ChainView& c, double dq, double zq) {
  const double inf = std::numeric_limits<double>::infinity();
  const auto& P = c.points;
  const std::size_t k = P.size();
  std::size_t j0 = static_cast<std::size_t>(
      std::partition_point(P.begin(), P.end(), [dq](const ChainPoint& a) { return a.delta < dq; }) -
      P.begin());
  double upper = inf;
  std::size_t jr = j0;
  if (j0 < k && P[j0].delta == dq) {
    if (P[j0].high < zq) upper = -inf;
    jr = j0 + 1;
  }
  double lower = -inf;
  if (jr < k) {
    // Intercepts over the right part rise then fall; find the peak.
    std::size_t lo = jr, hi = k - 1;
    while (lo < hi) {
      std::size_t mid = lo + (hi - lo) / 2;
      if (line_intercept(dq, zq, P[mid + 1]) <= line_intercept(dq, zq, P[mid]))
        hi = mid;
      else
        lo = mid + 1;
    }
    lower = line_intercept(dq, zq, P[lo]);
  }
  if (j0 > 0) {
    // Over the left part they fall then rise; find the valley.
    std::size_t lo = 0, hi = j0 - 1;
    while (lo < hi) {
      std::size_t mid = lo + (hi - lo) / 2;
      if (line_intercept(dq, zq, P[mid + 1]) >= line_intercept(dq, zq, P[mid]))
        hi = mid;
      else
        lo = mid + 1;
    }
    upper = std::min(upper, line_intercept(dq, zq, P[lo]));
  }
  return {lower, upper};
}

// Same bounds from every neighbor of p except the target half-edge.
inline UpBounds up_bounds_linear(const ImpreciseTerrain& t, NodeId p, std::size_t kq, double zq) {
  const double inf = std::numeric_limits<double>::infinity();
  const double dq = t.adj_dist(kq);
  UpBounds b{-inf, inf};
  for (std::size_t j = t.adj_begin(p); j < t.adj_end(p); ++j) {
    if (j == kq) continue;
    ChainPoint c{t.adj_dist(j), t.high(t.adj_node(j)), t.adj_node(j)};
    if (c.delta == dq) {
      if (c.high < zq) b.upper = -inf;
    } else if (c.delta > dq) {
      b.lower = std::max(b.lower, line_intercept(dq, zq, c));
    } else {
      b.upper = std::min(b.upper, line_intercept(dq, zq, c));
    }
  }
  return b;
}

inline std::optional<double> snap_up(const ImpreciseTerrain& t, NodeId p, std::size_t kq, double zq,
                                     UpBounds b) {
  const double floor_z = std::max(t.low(p), zq);
  const double cap = t.high(p);
  double z0 = std::max(floor_z, b.lower);
  if (!near_or_below(z0, std::min(cap, b.upper))) return std::nullopt;
  double z = std::min(z0, cap);
  auto pred = [&](double x) { return edge_is_steepest(t, p, x, kq, zq); };
  if (pred(z)) {
    for (int i = 0; i < kSnapSteps; ++i) {
      double zn = std::nextafter(z, -std::numeric_limits<double>::infinity());
      if (zn < floor_z || !pred(zn)) break;
      z = zn;
    }
    return z;
  }
  for (int i = 0; i < kSnapSteps; ++i) {
    z = std::nextafter(z, std::numeric_limits<double>::infinity());
    if (z > cap) break;
    if (pred(z)) return z;
  }
  return std::nullopt;
}

}  // namespace detail

// Minimum elevation of p in its interval at which (p,q) is a steepest
// descent edge with non-negative slope, q at z_q and all other neighbors of
// p at their high values. Nothing if no such elevation exists.
inline std::optional<double> min_elev_for_edge_flow(const ImpreciseTerrain& t, const ChainView& chain_p,
                                                    NodeId p, NodeId q, double z_q) {
  auto kq = t.find_edge(p, q);
  if (!kq) throw std::invalid_argument("min_elev_for_edge_flow: nodes are not adjacent");
  auto b = detail::up_bounds_chain(chain_p, t.adj_dist(*kq), z_q);
  if (auto z = detail::snap_up(t, p, *kq, z_q, b)) return z;
  // The chain only gives a candidate; confirm against every neighbor.
  auto bl = detail::up_bounds_linear(t, p, *kq, z_q);
  if (bl.lower == b.lower && bl.upper == b.upper) return std::nullopt;
  return detail::snap_up(t, p, *kq, z_q, bl);
}

inline std::optional<double> min_elev_for_edge_flow(const SlopeIndex& idx, NodeId p, NodeId q,
                                                    double z_q) {
  return min_elev_for_edge_flow(idx.terrain(), idx.chain(p), p, q, z_q);
}

inline std::optional<double> min_elev_for_edge_flow(const ImpreciseTerrain& t, NodeId p, NodeId q,
                                                    double z_q) {
  auto d = build_diagram(t, p);
  return min_elev_for_edge_flow(t, d.view(), p, q, z_q);
}

// Reference version scanning all neighbors; used to cross-check the chain.
inline std::optional<double> min_elev_for_edge_flow_linear(const ImpreciseTerrain& t, NodeId p,
                                                           NodeId q, double z_q) {
  auto kq = t.find_edge(p, q);
  if (!kq) throw std::invalid_argument("min_elev_for_edge_flow: nodes are not adjacent");
  return detail::snap_up(t, p, *kq, z_q, detail::up_bounds_linear(t, p, *kq, z_q));
}

namespace detail {

struct DownCandidate {
  double z_owner;
  double z_target;
  double owner_cap;
};

// Owner q ranges over [a, b]; maximize the target elevation at distance dp.
inline DownCandidate down_candidate_chain(const ChainView& c, double dp, double a, double b) {
  const auto& P = c.points;
  const std::size_t k = P.size();
  const double inf = std::numeric_limits<double>::infinity();
  double hmin = P[k - 1].high;
  std::size_t m = static_cast<std::size_t>(
      std::partition_point(P.begin(), P.end(), [dp](const ChainPoint& x) { return x.delta <= dp; }) -
      P.begin());
  double peak = m == 0 ? inf : (m == k ? -inf : c.intercept[m - 1]);
  double zc = std::clamp(std::max(hmin, peak), a, b);
  const auto& v = P[active_vertex(c, zc)];
  double tz = zc + (v.high - zc) * (dp / v.delta);
  return {zc, std::min(zc, tz), b};
}

// Reference: the objective is a concave minimum of lines in the owner
// elevation, so its maximum sits at an endpoint or at a crossing of two lines.
inline DownCandidate down_candidate_linear(const ImpreciseTerrain& t, NodeId q, std::size_t kp,
                                           double a, double b) {
  const double dp = t.adj_dist(kp);
  struct Line {
    double slope, icpt;
  };
  std::vector<Line> lines{{1.0, 0.0}};
  for (std::size_t j = t.adj_begin(q); j < t.adj_end(q); ++j) {
    if (j == kp) continue;
    double r = dp / t.adj_dist(j);
    lines.push_back({1.0 - r, t.high(t.adj_node(j)) * r});
  }
  auto f = [&](double z) {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& l : lines) m = std::min(m, l.slope * z + l.icpt);
    return m;
  };
  std::vector<double> cand{a, b};
  for (std::size_t i = 0; i < lines.size(); ++i)
    for (std::size_t j = i + 1; j < lines.size(); ++j) {
      double ds = lines[i].slope - lines[j].slope;
      if (ds == 0.0) continue;
      double z = (lines[j].icpt - lines[i].icpt) / ds;
      if (z > a && z < b) cand.push_back(z);
    }
  DownCandidate best{a, f(a), b};
  for (double z : cand) {
    double v = f(z);
    if (v > best.z_target || (v == best.z_target && z < best.z_owner)) best = {z, v, b};
  }
  return best;
}

inline std::optional<double> snap_down_at(const ImpreciseTerrain& t, NodeId q, std::size_t kp, double z_owner,
                                          double z_target) {
  const NodeId p = t.adj_node(kp);
  const double lo = t.low(p), cap = t.high(p);
  double v = std::min(z_target, cap);
  if (!near_or_below(lo, v)) return std::nullopt;
  v = std::max(v, lo);
  auto pred = [&](double x) { return edge_is_steepest(t, q, z_owner, kp, x); };
  if (pred(v)) {
    for (int i = 0; i < kSnapSteps; ++i) {
      double vn = std::nextafter(v, std::numeric_limits<double>::infinity());
      if (vn > cap || !pred(vn)) break;
      v = vn;
    }
    return v;
  }
  for (int i = 0; i < kSnapSteps; ++i) {
    v = std::nextafter(v, -std::numeric_limits<double>::infinity());
    if (v < lo) break;
    if (pred(v)) return v;
  }
  return std::nullopt;
}

inline bool within_ulps(double a, double b, int n) {
  for (int i = 0; i < n && a < b; ++i) a = std::nextafter(a, b);
  return a == b;
}

// A rounded owner elevation can miss the feasible set, or an interval
// endpoint that later ties depend on, by an ulp or two; nudge it both ways
// within [low(q), owner_cap].
inline std::optional<double> snap_down(const ImpreciseTerrain& t, NodeId q, std::size_t kp, DownCandidate c) {
  const double inf = std::numeric_limits<double>::infinity();
  const NodeId p = t.adj_node(kp);
  auto try_owners = [&](auto&& fn) -> std::optional<double> {
    if (auto v = fn(c.z_owner)) return v;
    double up = c.z_owner, dn = c.z_owner;
    for (int i = 0; i < kSnapSteps; ++i) {
      up = std::nextafter(up, inf);
      if (up <= c.owner_cap)
        if (auto v = fn(up)) return v;
      dn = std::nextafter(dn, -inf);
      if (dn >= t.low(q))
        if (auto v = fn(dn)) return v;
    }
    return std::nullopt;
  };
  auto v = try_owners([&](double zo) { return snap_down_at(t, q, kp, zo, c.z_target); });
  const double base = v ? *v : c.z_target;
  for (double a : {t.high(p), std::min(t.high(p), c.owner_cap)}) {
    if (v && *v >= a) continue;
    if (a < t.low(p) || !within_ulps(base, a, 4 * kSnapSteps)) continue;
    auto hit = try_owners([&](double zo) -> std::optional<double> {
      if (edge_is_steepest(t, q, zo, kp, a)) return a;
      return std::nullopt;
    });
    if (!hit && a <= c.owner_cap && edge_is_steepest(t, q, a, kp, a)) hit = a;
    if (hit) return hit;
  }
  return v;
}

}  // namespace detail

// Maximum elevation of p in its interval such that, for some elevation of q
// in [low(q), z_cap] and all other neighbors of q at high, (q,p) is a
// steepest-descent edge of q. Nothing if even low(p) is out of reach.
inline std::optional<double> max_elev_for_edge_receive(const ImpreciseTerrain& t, const ChainView& chain_q,
                                                       NodeId q, NodeId p, double z_cap) {
  auto kp = t.find_edge(q, p);
  if (!kp) throw std::invalid_argument("max_elev_for_edge_receive: nodes are not adjacent");
  auto c = detail::down_candidate_chain(chain_q, t.adj_dist(*kp), t.low(q), z_cap);
  if (auto z = detail::snap_down(t, q, *kp, c)) return z;
  auto cl = detail::down_candidate_linear(t, q, *kp, t.low(q), z_cap);
  if (cl.z_owner == c.z_owner && cl.z_target == c.z_target) return std::nullopt;
  return detail::snap_down(t, q, *kp, cl);
}

inline std::optional<double> max_elev_for_edge_receive(const SlopeIndex& idx, NodeId q, NodeId p,
                                                       double z_cap) {
  return max_elev_for_edge_receive(idx.terrain(), idx.chain(q), q, p, z_cap);
}

inline std::optional<double> max_elev_for_edge_receive_linear(const ImpreciseTerrain& t, NodeId q,
                                                              NodeId p, double z_cap) {
  auto kp = t.find_edge(q, p);
  if (!kp) throw std::invalid_argument("max_elev_for_edge_receive: nodes are not adjacent");
  return detail::snap_down(t, q, *kp, detail::down_candidate_linear(t, q, *kp, t.low(q), z_cap));
}

using Expansion = std::vector<std::pair<NodeId, double>>;

namespace detail {
inline void require_in_interval(const ImpreciseTerrain& t, NodeId v, double z) {
  if (!(z >= t.low(v) && z <= t.high(v)))
    throw std::invalid_argument("elevation outside the interval of node " + std::to_string(v));
}
}  // namespace detail

// Neighbors p of q that can drain into q while q sits anywhere in
// [z, high(q)], each with the lowest elevation at which that is possible.
inline Expansion expand_pws(const SlopeIndex& idx, NodeId q, double z) {
  const auto& t = idx.terrain();
  detail::require_in_interval(t, q, z);
  Expansion out;
  for (std::size_t k = t.adj_begin(q); k < t.adj_end(q); ++k) {
    NodeId p = t.adj_node(k);
    if (auto zp = min_elev_for_edge_flow(idx, p, q, z)) out.emplace_back(p, *zp);
  }
  return out;
}

// Neighbors p that q can drain into while q sits anywhere in [low(q), z],
// each with the highest elevation at which p still receives that water.
inline Expansion expand_down(const SlopeIndex& idx, NodeId q, double z) {
  const auto& t = idx.terrain();
  detail::require_in_interval(t, q, z);
  Expansion out;
  for (std::size_t k = t.adj_begin(q); k < t.adj_end(q); ++k) {
    NodeId p = t.adj_node(k);
    if (auto zp = max_elev_for_edge_receive(idx, q, p, z)) out.emplace_back(p, *zp);
  }
  return out;
}

}  // namespace iflow
