#pragma once

// Priority sweeps over an imprecise terrain: potential watersheds (upward,
// min-priority), their avoiding and tagged variants, and potential
// downstream areas (downward, max-priority).

#include <limits>
#include <queue>
#include <vector>

#include "iflow/core.hpp"
#include "iflow/slope.hpp"

namespace iflow {

enum class Direction { Upward, Downward };

struct SweepStats {
  std::size_t pushes = 0;
  std::size_t pops = 0;
  std::size_t finalized = 0;
};

struct ReachResult {
  NodeSet members;
  // Per node; NaN for non-members. Upward: canonical elevation.
  // Downward: highest elevation at which the node still receives water.
  std::vector<double> elevation;
  // Per node source tag, kNoNode for non-members. Empty unless tagged.
  std::vector<NodeId> tag;
  Direction direction = Direction::Upward;
  SweepStats stats;
};

struct Seed {
  NodeId node;
  double z;
  NodeId tag = kNoNode;
};

namespace detail {

struct HeapEntry {
  double z;
  NodeId id;
  NodeId tag;
};

// Orders entries so that the heap top is the next to extract: lowest
// elevation first when sweeping up, highest first when sweeping down; ties
// go to the lower node id, then the lower tag.
template <Direction D>
struct HeapAfter {
  bool operator()(const HeapEntry& a, const HeapEntry& b) const {
    if (a.z != b.z) return D == Direction::Upward ? a.z > b.z : a.z < b.z;
    if (a.id != b.id) return a.id > b.id;
    return a.tag > b.tag;
  }
};

template <Direction D>
bool better(double z, NodeId tag, double bz, NodeId btag) {
  if (z != bz) return D == Direction::Upward ? z < bz : z > bz;
  return tag < btag;
}

template <Direction D>
ReachResult sweep(const SlopeIndex& idx, const std::vector<Seed>& seeds, const std::vector<char>* avoid,
                  bool tagged) {
  const auto& t = idx.terrain();
  const std::size_t n = t.size();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const double worst = D == Direction::Upward ? std::numeric_limits<double>::infinity()
                                              : -std::numeric_limits<double>::infinity();
  ReachResult res;
  res.direction = D;
  res.elevation.assign(n, nan);
  if (tagged) res.tag.assign(n, kNoNode);
  std::vector<char> done(n, 0), member(n, 0);
  std::vector<double> best(n, worst);
  std::vector<NodeId> best_tag(n, kNoNode);
  std::priority_queue<HeapEntry, std::vector<HeapEntry>, HeapAfter<D>> heap;

  auto offer = [&](NodeId v, double z, NodeId tag) {
    if (done[v] || !better<D>(z, tag, best[v], best_tag[v])) return;
    best[v] = z;
    best_tag[v] = tag;
    heap.push({z, v, tag});
    ++res.stats.pushes;
  };
  for (const auto& s : seeds) {
    if (s.node >= n) throw ValidationError("seed node " + std::to_string(s.node) + " does not exist");
    offer(s.node, s.z, s.tag);
  }

  while (!heap.empty()) {
    HeapEntry e = heap.top();
    heap.pop();
    ++res.stats.pops;
    if (done[e.id]) continue;
    done[e.id] = 1;
    if (avoid && (*avoid)[e.id]) continue;
    member[e.id] = 1;
    ++res.stats.finalized;
    res.elevation[e.id] = e.z;
    if (tagged) res.tag[e.id] = e.tag;
    for (std::size_t k = t.adj_begin(e.id); k < t.adj_end(e.id); ++k) {
      NodeId p = t.adj_node(k);
      if (done[p]) continue;
      std::optional<double> zp = D == Direction::Upward
                                     ? min_elev_for_edge_flow(idx, p, e.id, e.z)
                                     : max_elev_for_edge_receive(idx, e.id, p, e.z);
      if (zp) offer(p, *zp, e.tag);
    }
  }
  res.members = NodeSet::from_mask(member);
  return res;
}

inline void require_nonempty(const NodeSet& Q, const char* what) {
  if (Q.empty()) throw PreconditionError(std::string(what) + ": empty node set");
}

}  // namespace detail

// PoWS(Q) together with its canonical realization.
inline ReachResult potential_watershed(const SlopeIndex& idx, const NodeSet& Q) {
  detail::require_nonempty(Q, "potential_watershed");
  require_nodes(idx.terrain(), Q);
  std::vector<Seed> seeds;
  for (NodeId q : Q) seeds.push_back({q, idx.terrain().low(q)});
  return detail::sweep<Direction::Upward>(idx, seeds, nullptr, false);
}

inline ReachResult potential_watershed(const ImpreciseTerrain& t, const NodeSet& Q) {
  SlopeIndex idx(t);
  return potential_watershed(idx, Q);
}

// Nodes with a potential flow path into S that does not pass `avoid` on the
// way. Avoided nodes are dropped when extracted but stay slope competitors.
inline ReachResult avoiding_potential_watershed(const SlopeIndex& idx, const NodeSet& avoid,
                                                const NodeSet& S) {
  const auto& t = idx.terrain();
  require_nodes(t, avoid);
  require_nodes(t, S);
  auto mask = avoid.mask(t.size());
  std::vector<Seed> seeds;
  for (NodeId s : S) seeds.push_back({s, t.low(s)});
  return detail::sweep<Direction::Upward>(idx, seeds, &mask, false);
}

inline ReachResult avoiding_potential_watershed(const ImpreciseTerrain& t, const NodeSet& avoid,
                                                const NodeSet& S) {
  SlopeIndex idx(t);
  return avoiding_potential_watershed(idx, avoid, S);
}

// Upward sweep from arbitrary seeds (used by the fuzzy boundary). Seeds
// must lie inside their node's interval.
inline ReachResult seeded_potential_watershed(const SlopeIndex& idx, const std::vector<Seed>& seeds,
                                              const NodeSet& avoid = {}) {
  const auto& t = idx.terrain();
  for (const auto& s : seeds) {
    if (s.node >= t.size()) throw ValidationError("seed node does not exist");
    detail::require_in_interval(t, s.node, s.z);
  }
  auto mask = avoid.mask(t.size());
  return detail::sweep<Direction::Upward>(idx, seeds, avoid.empty() ? nullptr : &mask, false);
}

struct TaggedResult {
  ReachResult reach;
  std::vector<Edge> separator;  // u < v, ascending, endpoints tagged differently
};

inline TaggedResult tagged_potential_watershed(const SlopeIndex& idx, const std::vector<NodeId>& sources) {
  const auto& t = idx.terrain();
  NodeSet distinct(sources);
  if (distinct.size() != sources.size())
    throw std::invalid_argument("tagged_potential_watershed: repeated source");
  require_nodes(t, distinct);
  std::vector<Seed> seeds;
  for (NodeId q : sources) seeds.push_back({q, t.low(q), q});
  TaggedResult out;
  out.reach = detail::sweep<Direction::Upward>(idx, seeds, nullptr, true);
  const auto& tag = out.reach.tag;
  for (const auto& e : t.edges())
    if (tag[e.u] != kNoNode && tag[e.v] != kNoNode && tag[e.u] != tag[e.v]) out.separator.push_back(e);
  return out;
}

// PoDel(Q): every node that can receive water from Q.
inline ReachResult potential_downstream(const SlopeIndex& idx, const NodeSet& Q) {
  detail::require_nonempty(Q, "potential_downstream");
  require_nodes(idx.terrain(), Q);
  std::vector<Seed> seeds;
  for (NodeId q : Q) seeds.push_back({q, idx.terrain().high(q)});
  return detail::sweep<Direction::Downward>(idx, seeds, nullptr, false);
}

inline ReachResult potential_downstream(const ImpreciseTerrain& t, const NodeSet& Q) {
  SlopeIndex idx(t);
  return potential_downstream(idx, Q);
}

// Result elevations on members, high elsewhere.
inline Realization canonical_realization(const ImpreciseTerrain& t, const ReachResult& r) {
  Realization out = uppermost(t);
  for (NodeId v : r.members) out.elevation[v] = r.elevation[v];
  return out;
}

}  // namespace iflow
