#pragma once

// Fuzzy watershed boundaries and fuzzy ridges on regular terrains.

#include <string>
#include <vector>

#include "iflow/flowsim.hpp"
#include "iflow/propagate.hpp"
#include "iflow/regular.hpp"

namespace iflow {

class NonRegularError : public PreconditionError {
 public:
  explicit NonRegularError(NodeSet minimum)
      : PreconditionError(describe(minimum)), minimum_(std::move(minimum)) {}
  const NodeSet& minimum() const { return minimum_; }

 private:
  static std::string describe(const NodeSet& m) {
    std::string s = "terrain is not regular: local minimum {";
    bool first = true;
    for (NodeId v : m) {
      s += (first ? "" : ",") + std::to_string(v);
      first = false;
    }
    return s + "} of the lowermost realization is not an imprecise minimum (regularize the terrain first)";
  }
  NodeSet minimum_;
};

inline void require_regular(const ImpreciseTerrain& t) {
  if (auto m = irregular_minimum(t)) throw NonRegularError(*m);
}

// PoWS(Q) minus PsWS(Q), seeded from the boundary edges of the lowermost
// watershed. Q itself is avoided so that targets which are not minima
// cannot leak into the result.
inline NodeSet fuzzy_boundary_area(const SlopeIndex& idx, const NodeSet& Q) {
  const auto& t = idx.terrain();
  detail::require_nonempty(Q, "fuzzy_boundary_area");
  require_nodes(t, Q);
  require_regular(t);
  std::vector<Seed> seeds;
  for (const auto& e : crossing(t, lowermost(t), Q)) {
    if (auto z = min_elev_for_edge_flow(idx, e.u, e.v, t.low(e.v))) seeds.push_back({e.u, *z});
    if (auto z = min_elev_for_edge_flow(idx, e.v, e.u, t.low(e.u))) seeds.push_back({e.v, *z});
  }
  return seeded_potential_watershed(idx, seeds, Q).members;
}

inline NodeSet fuzzy_boundary_area(const ImpreciseTerrain& t, const NodeSet& Q) {
  SlopeIndex idx(t);
  return fuzzy_boundary_area(idx, Q);
}

namespace detail {

inline NodeSet pairwise_unchecked(const SlopeIndex& idx, const std::vector<NodeId>& sources) {
  if (sources.size() < 2) return {};
  auto tagged = tagged_potential_watershed(idx, sources);
  const auto& z = tagged.reach.elevation;
  std::vector<Seed> seeds;
  for (const auto& e : tagged.separator) {
    if (auto zu = min_elev_for_edge_flow(idx, e.u, e.v, z[e.v])) seeds.push_back({e.u, *zu});
    if (auto zv = min_elev_for_edge_flow(idx, e.v, e.u, z[e.u])) seeds.push_back({e.v, *zv});
  }
  return seeded_potential_watershed(idx, seeds).members;
}

}  // namespace detail

// Union over pairs i != j of PoWS(q_i) ∩ PoWS(q_j). Requires that no source
// lies in another source's potential watershed; this is checked with one
// sweep per source.
inline NodeSet pairwise_intersections(const SlopeIndex& idx, const std::vector<NodeId>& sources) {
  NodeSet distinct(sources);
  require_nodes(idx.terrain(), distinct);
  if (distinct.size() != sources.size()) throw std::invalid_argument("pairwise_intersections: repeated source");
  if (sources.size() < 2) return {};
  for (NodeId a : sources) {
    auto pa = potential_watershed(idx, NodeSet{a}).members;
    for (NodeId b : sources)
      if (b != a && pa.contains(b))
        throw PreconditionError("pairwise_intersections: source " + std::to_string(b) +
                                " lies in the potential watershed of source " + std::to_string(a));
  }
  return detail::pairwise_unchecked(idx, sources);
}

inline NodeSet pairwise_intersections(const ImpreciseTerrain& t, const std::vector<NodeId>& sources) {
  SlopeIndex idx(t);
  return pairwise_intersections(idx, sources);
}

struct RidgeResult {
  NodeSet ridge;
  MinimaReport minima;
};

// Pairwise intersections of the potential watersheds of all imprecise
// minima, computed through their proxies. Proxies never lie in each other's
// potential watersheds, so the pairwise precondition holds by construction.
inline RidgeResult fuzzy_ridge(const SlopeIndex& idx) {
  const auto& t = idx.terrain();
  require_regular(t);
  RidgeResult r;
  r.minima = regularize_sweep(t);
  r.ridge = detail::pairwise_unchecked(idx, r.minima.proxy);
  return r;
}

inline RidgeResult fuzzy_ridge(const ImpreciseTerrain& t) {
  SlopeIndex idx(t);
  return fuzzy_ridge(idx);
}

}  // namespace iflow
