#pragma once

// Imprecise minima, their proxies, and the regularizing plane sweep.

#include <algorithm>
#include <numeric>
#include <optional>
#include <tuple>
#include <vector>

#include "iflow/core.hpp"
#include "iflow/flowsim.hpp"

namespace iflow {

struct MinimaReport {
  std::vector<NodeSet> minima;  // ascending by proxy
  std::vector<NodeId> proxy;
  Realization M;
};

inline double bar(const ImpreciseTerrain& t, const NodeSet& S) {
  if (S.empty()) throw std::invalid_argument("bar of an empty set");
  double b = std::numeric_limits<double>::infinity();
  for (NodeId s : S) b = std::min(b, t.high(s));
  return b;
}

namespace detail {

inline bool is_connected(const ImpreciseTerrain& t, const NodeSet& S) {
  if (S.empty()) return false;
  auto in = S.mask(t.size());
  std::vector<char> seen(t.size(), 0);
  std::vector<NodeId> stack{S.front()};
  seen[S.front()] = 1;
  std::size_t count = 0;
  while (!stack.empty()) {
    NodeId v = stack.back();
    stack.pop_back();
    ++count;
    for (std::size_t k = t.adj_begin(v); k < t.adj_end(v); ++k) {
      NodeId w = t.adj_node(k);
      if (in[w] && !seen[w]) {
        seen[w] = 1;
        stack.push_back(w);
      }
    }
  }
  return count == S.size();
}

// bar(S) < low(t) for every t in N(S).
inline bool clears_neighborhood(const ImpreciseTerrain& t, const NodeSet& S) {
  double b = bar(t, S);
  for (NodeId w : neighborhood(t, S))
    if (!(b < t.low(w))) return false;
  return true;
}

}  // namespace detail

// S is an imprecise minimum iff bar(S) lies below every neighbor's low and
// no proper subset has that property. For the second part it suffices to
// look, for each s in S, at the set reachable from s through nodes whose low
// does not exceed high(s): any qualifying subset with bar high(s) contains it.
inline bool is_imprecise_minimum(const ImpreciseTerrain& t, const NodeSet& S) {
  require_nodes(t, S);
  if (!detail::is_connected(t, S)) throw std::invalid_argument("is_imprecise_minimum: set is not connected");
  if (!detail::clears_neighborhood(t, S)) return false;
  auto in = S.mask(t.size());
  std::vector<char> seen(t.size(), 0);
  std::vector<NodeId> stack, touched;
  for (NodeId s : S) {
    const double h = t.high(s);
    stack.assign(1, s);
    touched.assign(1, s);
    seen[s] = 1;
    bool inside = true;
    while (!stack.empty() && inside) {
      NodeId v = stack.back();
      stack.pop_back();
      for (std::size_t k = t.adj_begin(v); k < t.adj_end(v); ++k) {
        NodeId w = t.adj_node(k);
        if (seen[w] || !(t.low(w) <= h)) continue;
        if (!in[w]) {
          inside = false;
          break;
        }
        seen[w] = 1;
        touched.push_back(w);
        stack.push_back(w);
      }
    }
    bool proper = inside && touched.size() < S.size();
    for (NodeId v : touched) seen[v] = 0;
    if (proper) return false;
  }
  return true;
}

// Plane sweep over all low/high events. Low events precede high events at
// equal elevation, further ties go by node id.
inline MinimaReport regularize_sweep(const ImpreciseTerrain& t) {
  const std::size_t n = t.size();
  struct Event {
    double z;
    int kind;  // 0 = low, 1 = high
    NodeId v;
  };
  std::vector<Event> ev;
  ev.reserve(2 * n);
  for (NodeId v = 0; v < n; ++v) {
    ev.push_back({t.low(v), 0, v});
    ev.push_back({t.high(v), 1, v});
  }
  std::sort(ev.begin(), ev.end(), [](const Event& a, const Event& b) {
    return std::tie(a.z, a.kind, a.v) < std::tie(b.z, b.kind, b.v);
  });

  enum : char { Unseen, Pending, Final };
  std::vector<char> state(n, Unseen);
  std::vector<NodeId> parent(n);
  std::iota(parent.begin(), parent.end(), NodeId{0});
  std::vector<std::vector<NodeId>> comp(n);
  std::vector<double> maxlow(n, 0.0);
  auto find = [&](NodeId v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  auto unite = [&](NodeId a, NodeId b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (comp[a].size() < comp[b].size()) std::swap(a, b);
    parent[b] = a;
    comp[a].insert(comp[a].end(), comp[b].begin(), comp[b].end());
    comp[b].clear();
    comp[b].shrink_to_fit();
    maxlow[a] = std::max(maxlow[a], maxlow[b]);
  };

  MinimaReport rep;
  rep.M.elevation.assign(n, 0.0);
  auto finalize = [&](NodeId root, double z) {
    for (NodeId s : comp[root]) {
      state[s] = Final;
      rep.M.elevation[s] = z;
    }
    comp[root].clear();
    comp[root].shrink_to_fit();
  };

  for (const auto& e : ev) {
    const NodeId v = e.v;
    if (e.kind == 0) {
      state[v] = Pending;
      comp[v].assign(1, v);
      maxlow[v] = t.low(v);
      bool final_neighbor = false;
      for (std::size_t k = t.adj_begin(v); k < t.adj_end(v); ++k) {
        NodeId w = t.adj_node(k);
        if (state[w] == Pending) unite(v, w);
        else if (state[w] == Final) final_neighbor = true;
      }
      if (final_neighbor) finalize(find(v), t.low(v));
    } else {
      if (state[v] == Final) continue;
      if (state[v] != Pending) throw std::logic_error("regularize_sweep: high event before low event");
      NodeId r = find(v);
      rep.proxy.push_back(v);
      rep.minima.emplace_back(comp[r]);
      finalize(r, maxlow[r]);
    }
  }

  std::vector<std::size_t> order(rep.proxy.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return rep.proxy[a] < rep.proxy[b]; });
  MinimaReport sorted;
  sorted.M = std::move(rep.M);
  for (auto i : order) {
    sorted.proxy.push_back(rep.proxy[i]);
    sorted.minima.push_back(std::move(rep.minima[i]));
  }
  return sorted;
}

// T' with low'(v) = M(v); the original highs are kept.
inline ImpreciseTerrain regularized_terrain(const ImpreciseTerrain& t, const MinimaReport& rep) {
  std::vector<ElevationInterval> iv(t.size());
  for (NodeId v = 0; v < t.size(); ++v) iv[v] = {rep.M[v], t.high(v)};
  return t.with_intervals(std::move(iv));
}

inline ImpreciseTerrain regularized_terrain(const ImpreciseTerrain& t) {
  return regularized_terrain(t, regularize_sweep(t));
}

// First local minimum of the lowermost realization that is not an imprecise
// minimum, or nothing if the terrain is regular.
inline std::optional<NodeSet> irregular_minimum(const ImpreciseTerrain& t) {
  for (auto& m : local_minima(t, lowermost(t)))
    if (!is_imprecise_minimum(t, m)) return m;
  return std::nullopt;
}

inline bool is_regular(const ImpreciseTerrain& t) { return !irregular_minimum(t).has_value(); }

}  // namespace iflow
