#pragma once

// Persistent watersheds and the brute-force core watershed.

#include <cstdint>
#include <functional>

#include "iflow/core.hpp"
#include "iflow/propagate.hpp"

namespace iflow {

// PsWS(Q): nodes that drain into Q in every realization, i.e. the complement
// of everything that can escape PoWS(Q) without passing Q.
inline NodeSet persistent_watershed(const SlopeIndex& idx, const NodeSet& Q) {
  const std::size_t n = idx.terrain().size();
  auto pows = potential_watershed(idx, Q).members;
  auto escape = avoiding_potential_watershed(idx, Q, pows.complement(n)).members;
  return escape.complement(n);
}

inline NodeSet persistent_watershed(const ImpreciseTerrain& t, const NodeSet& Q) {
  SlopeIndex idx(t);
  return persistent_watershed(idx, Q);
}

// Calls fn(subset) for every connected node set of size <= max_size, each
// exactly once, in a deterministic order. Returns false if more than `guard`
// sets would be produced (enumeration stops early).
inline bool for_each_connected_subset(const ImpreciseTerrain& t, std::size_t max_size, std::size_t guard,
                                      const std::function<void(const std::vector<NodeId>&)>& fn) {
  const std::size_t n = t.size();
  std::size_t count = 0;
  std::vector<NodeId> cur;
  std::vector<char> in(n, 0), blocked(n, 0);
  // Classic extension enumeration: every set is generated from its minimum
  // vertex, extending only with larger vertices via a frontier.
  std::function<bool(std::vector<NodeId>&, NodeId)> grow = [&](std::vector<NodeId>& frontier,
                                                               NodeId root) -> bool {
    if (++count > guard) return false;
    fn(cur);
    if (cur.size() == max_size) return true;
    std::vector<NodeId> local = frontier;
    while (!local.empty()) {
      NodeId w = local.back();
      local.pop_back();
      // Include w; later branches exclude it.
      std::vector<NodeId> next = local;
      std::vector<NodeId> added;
      for (std::size_t k = t.adj_begin(w); k < t.adj_end(w); ++k) {
        NodeId x = t.adj_node(k);
        if (x > root && !in[x] && !blocked[x]) {
          blocked[x] = 1;
          added.push_back(x);
          next.push_back(x);
        }
      }
      in[w] = 1;
      cur.push_back(w);
      bool ok = grow(next, root);
      cur.pop_back();
      in[w] = 0;
      for (NodeId x : added) blocked[x] = 0;
      if (!ok) return false;
    }
    return true;
  };
  for (NodeId r = 0; r < n; ++r) {
    if (max_size == 0) break;
    cur.assign(1, r);
    in[r] = 1;
    blocked[r] = 1;
    std::vector<NodeId> frontier;
    for (std::size_t k = t.adj_begin(r); k < t.adj_end(r); ++k) {
      NodeId x = t.adj_node(k);
      if (x > r && !blocked[x]) {
        blocked[x] = 1;
        frontier.push_back(x);
      }
    }
    bool ok = grow(frontier, r);
    for (NodeId x : frontier) blocked[x] = 0;
    blocked[r] = 0;
    in[r] = 0;
    if (!ok) return false;
  }
  return true;
}

// Union of connected sets r, disjoint from Q, that can be a flat local
// minimum in some realization.
inline NodeSet potential_minima_nodes(const ImpreciseTerrain& t, const NodeSet& Q, std::size_t max_size,
                                      std::size_t guard = 1'000'000) {
  auto inq = Q.mask(t.size());
  std::vector<char> hit(t.size(), 0);
  std::vector<char> mark(t.size(), 0);
  bool ok = for_each_connected_subset(t, max_size, guard, [&](const std::vector<NodeId>& r) {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    for (NodeId s : r) {
      if (inq[s]) return;
      lo = std::max(lo, t.low(s));
      hi = std::min(hi, t.high(s));
    }
    if (lo > hi) return;
    for (NodeId s : r) mark[s] = 1;
    // The flat level z = lo is the best choice: every neighbor must be
    // strictly higher than z while sitting at its high value.
    bool fits = true;
    for (NodeId s : r)
      for (std::size_t k = t.adj_begin(s); k < t.adj_end(s) && fits; ++k) {
        NodeId w = t.adj_node(k);
        if (!mark[w] && !(lo < t.high(w))) fits = false;
      }
    for (NodeId s : r) mark[s] = 0;
    if (fits)
      for (NodeId s : r) hit[s] = 1;
  });
  if (!ok)
    throw PreconditionError("core watershed: connected subset enumeration exceeds the guard of " +
                            std::to_string(guard));
  return NodeSet::from_mask(hit);
}

// CoWS(Q) by explicit enumeration of potential local minima. Exponential;
// meant for small terrains only.
inline NodeSet core_watershed_bruteforce(const ImpreciseTerrain& t, const NodeSet& Q, std::size_t max_subset_size,
                                         std::size_t guard = 1'000'000) {
  SlopeIndex idx(t);
  const std::size_t n = t.size();
  auto pows = potential_watershed(idx, Q).members;
  auto dest = potential_minima_nodes(t, Q, max_subset_size, guard).unite(pows.complement(n));
  return avoiding_potential_watershed(idx, Q, dest).members.complement(n);
}

}  // namespace iflow
