#pragma once

// Brute-force references for testing: realization enumeration over finite
// elevation grids, watershed unions, witness checks, exhaustive minima.
// Exponential by design; not for production use.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <vector>

#include "iflow/flowsim.hpp"
#include "iflow/propagate.hpp"
#include "iflow/watersheds.hpp"

namespace iflow::oracle {

// Finite candidate elevations per node.
struct LevelGrid {
  std::vector<std::vector<double>> candidates;
};

inline LevelGrid endpoint_grid(const ImpreciseTerrain& t) {
  LevelGrid g;
  g.candidates.resize(t.size());
  for (NodeId v = 0; v < t.size(); ++v) g.candidates[v] = {t.low(v), t.high(v)};
  for (auto& c : g.candidates) {
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
  }
  return g;
}

// Adds per-node values (ignored where NaN or outside the interval).
inline void add_levels(const ImpreciseTerrain& t, LevelGrid& g, const std::vector<double>& z) {
  for (NodeId v = 0; v < t.size(); ++v) {
    if (z[v] >= t.low(v) && z[v] <= t.high(v)) {
      auto& c = g.candidates[v];
      auto it = std::lower_bound(c.begin(), c.end(), z[v]);
      if (it == c.end() || *it != z[v]) c.insert(it, z[v]);
    }
  }
}

// Every interval endpoint of every node, clipped into each node's interval.
inline void add_cross_endpoints(const ImpreciseTerrain& t, LevelGrid& g) {
  for (NodeId u = 0; u < t.size(); ++u) {
    std::vector<double> z(t.size());
    for (NodeId v = 0; v < t.size(); ++v) z[v] = std::clamp(t.low(u), t.low(v), t.high(v));
    add_levels(t, g, z);
    for (NodeId v = 0; v < t.size(); ++v) z[v] = std::clamp(t.high(u), t.low(v), t.high(v));
    add_levels(t, g, z);
  }
}

inline double realization_count(const LevelGrid& g) {
  double c = 1.0;
  for (const auto& v : g.candidates) c *= static_cast<double>(v.size());
  return c;
}

// Calls fn for every combination of candidates, last node varying fastest.
inline void enumerate_realizations(const LevelGrid& g, const std::function<void(const Realization&)>& fn,
                                   double guard = 1e6) {
  double count = realization_count(g);
  if (count > guard)
    throw PreconditionError("enumeration of " + std::to_string(static_cast<long double>(count)) +
                            " realizations exceeds the guard");
  const std::size_t n = g.candidates.size();
  std::vector<std::size_t> at(n, 0);
  Realization r;
  r.elevation.resize(n);
  for (std::size_t v = 0; v < n; ++v) {
    if (g.candidates[v].empty()) return;
    r.elevation[v] = g.candidates[v][0];
  }
  while (true) {
    fn(r);
    std::size_t v = n;
    while (v > 0) {
      --v;
      if (++at[v] < g.candidates[v].size()) {
        r.elevation[v] = g.candidates[v][at[v]];
        break;
      }
      at[v] = 0;
      r.elevation[v] = g.candidates[v][0];
      if (v == 0) return;
    }
    if (n == 0) return;
  }
}

inline NodeSet pows_lower_bound(const ImpreciseTerrain& t, const NodeSet& Q, const LevelGrid& g,
                                double guard = 1e6) {
  std::vector<char> hit(t.size(), 0);
  enumerate_realizations(
      g,
      [&](const Realization& r) {
        for (NodeId v : watershed(t, r, Q)) hit[v] = 1;
      },
      guard);
  return NodeSet::from_mask(hit);
}

inline NodeSet podel_lower_bound(const ImpreciseTerrain& t, const NodeSet& Q, const LevelGrid& g,
                                 double guard = 1e6) {
  std::vector<char> hit(t.size(), 0);
  enumerate_realizations(
      g,
      [&](const Realization& r) {
        for (NodeId v : forward_reach(t, r, Q)) hit[v] = 1;
      },
      guard);
  return NodeSet::from_mask(hit);
}

// Union over enumerated realizations of the nodes whose flow reaches S
// without entering `avoid` first. Complementing the bound for
// S = complement of PoWS(Q), avoid = Q gives a superset of PsWS(Q).
inline NodeSet avws_lower_bound(const ImpreciseTerrain& t, const NodeSet& avoid, const NodeSet& S,
                                const LevelGrid& g, double guard = 1e6) {
  std::vector<char> hit(t.size(), 0);
  const auto blocked = avoid.mask(t.size());
  std::vector<NodeId> stack;
  std::vector<char> seen(t.size());
  enumerate_realizations(
      g,
      [&](const Realization& r) {
        auto fg = flow_graph(t, r);
        std::vector<std::vector<NodeId>> pred(t.size());
        for (NodeId u = 0; u < t.size(); ++u)
          for (std::size_t k = fg.begin(u); k < fg.end(u); ++k) pred[fg.at(k)].push_back(u);
        std::fill(seen.begin(), seen.end(), 0);
        stack.clear();
        for (NodeId s : S)
          if (!blocked[s]) {
            seen[s] = 1;
            stack.push_back(s);
          }
        while (!stack.empty()) {
          NodeId v = stack.back();
          stack.pop_back();
          hit[v] = 1;
          for (NodeId u : pred[v])
            if (!seen[u] && !blocked[u]) {
              seen[u] = 1;
              stack.push_back(u);
            }
        }
      },
      guard);
  return NodeSet::from_mask(hit);
}

// Builds the realization with the result's elevations on members and high
// elsewhere and checks that its exact watershed of Q is the member set.
// Throws ValidationError if that realization leaves some interval.
inline bool verify_canonical_witness(const ImpreciseTerrain& t, const NodeSet& Q, const ReachResult& res) {
  Realization r = canonical_realization(t, res);
  require_valid_realization(t, r);
  return watershed(t, r, Q) == res.members;
}

// All imprecise minima by enumeration: connected sets whose bar lies below
// every neighbor low, keeping only those with no such proper subset.
// Terrain must have at most 64 nodes.
inline std::vector<NodeSet> imprecise_minima_exhaustive(const ImpreciseTerrain& t, std::size_t guard = 1'000'000) {
  if (t.size() > 64) throw std::invalid_argument("imprecise_minima_exhaustive: more than 64 nodes");
  std::vector<std::uint64_t> qualifying;
  bool ok = for_each_connected_subset(t, t.size(), guard, [&](const std::vector<NodeId>& s) {
    NodeSet S(s);
    double b = std::numeric_limits<double>::infinity();
    for (NodeId v : S) b = std::min(b, t.high(v));
    for (NodeId w : neighborhood(t, S))
      if (!(b < t.low(w))) return;
    std::uint64_t m = 0;
    for (NodeId v : S) m |= std::uint64_t{1} << v;
    qualifying.push_back(m);
  });
  if (!ok) throw PreconditionError("imprecise_minima_exhaustive: subset guard exceeded");
  std::vector<NodeSet> out;
  for (auto m : qualifying) {
    bool minimal = true;
    for (auto o : qualifying)
      if (o != m && (o & m) == o) {
        minimal = false;
        break;
      }
    if (!minimal) continue;
    std::vector<NodeId> ids;
    for (NodeId v = 0; v < t.size(); ++v)
      if (m >> v & 1) ids.push_back(v);
    out.emplace_back(ids);
  }
  std::sort(out.begin(), out.end(), [](const NodeSet& a, const NodeSet& b) { return a.ids() < b.ids(); });
  return out;
}

}  // namespace iflow::oracle
