#pragma once

// Exact steepest-descent flow on one fixed realization.

#include <deque>
#include <vector>

#include "iflow/core.hpp"

namespace iflow {

// Directed flow successors in CSR form.
class FlowGraph {
 public:
  FlowGraph() = default;
  FlowGraph(std::vector<std::size_t> off, std::vector<NodeId> succ)
      : off_(std::move(off)), succ_(std::move(succ)) {}

  std::size_t size() const { return off_.empty() ? 0 : off_.size() - 1; }
  std::vector<NodeId> successors(NodeId v) const {
    return {succ_.begin() + static_cast<std::ptrdiff_t>(off_[v]),
            succ_.begin() + static_cast<std::ptrdiff_t>(off_[v + 1])};
  }
  bool has_edge(NodeId p, NodeId q) const {
    for (std::size_t k = off_[p]; k < off_[p + 1]; ++k)
      if (succ_[k] == q) return true;
    return false;
  }
  std::size_t begin(NodeId v) const { return off_[v]; }
  std::size_t end(NodeId v) const { return off_[v + 1]; }
  NodeId at(std::size_t k) const { return succ_[k]; }

  friend bool operator==(const FlowGraph&, const FlowGraph&) = default;

 private:
  std::vector<std::size_t> off_{0};
  std::vector<NodeId> succ_;
};

using CrossingSet = std::vector<Edge>;  // directed: u inside, v outside

inline double slope(const ImpreciseTerrain& t, const Realization& r, NodeId p, NodeId q) {
  auto k = t.find_edge(p, q);
  if (!k) throw std::invalid_argument("slope: nodes are not adjacent");
  return steepness(r[p], r[q], t.adj_dist(*k));
}

inline FlowGraph flow_graph(const ImpreciseTerrain& t, const Realization& r) {
  std::vector<std::size_t> off(t.size() + 1, 0);
  std::vector<NodeId> succ;
  succ.reserve(t.size());
  for (NodeId p = 0; p < t.size(); ++p) {
    double best = 0.0;
    bool any = false;
    for (std::size_t k = t.adj_begin(p); k < t.adj_end(p); ++k) {
      double s = steepness(r[p], r[t.adj_node(k)], t.adj_dist(k));
      if (s >= 0.0 && (!any || s > best)) {
        best = s;
        any = true;
      }
    }
    if (any)
      for (std::size_t k = t.adj_begin(p); k < t.adj_end(p); ++k)
        if (steepness(r[p], r[t.adj_node(k)], t.adj_dist(k)) == best) succ.push_back(t.adj_node(k));
    off[p + 1] = succ.size();
  }
  return FlowGraph(std::move(off), std::move(succ));
}

inline std::vector<NodeSet> local_minima(const ImpreciseTerrain& t, const Realization& r) {
  std::vector<char> seen(t.size(), 0);
  std::vector<NodeSet> out;
  std::vector<NodeId> stack, comp;
  for (NodeId s = 0; s < t.size(); ++s) {
    if (seen[s]) continue;
    comp.clear();
    stack.assign(1, s);
    seen[s] = 1;
    bool is_min = true;
    while (!stack.empty()) {
      NodeId v = stack.back();
      stack.pop_back();
      comp.push_back(v);
      for (std::size_t k = t.adj_begin(v); k < t.adj_end(v); ++k) {
        NodeId w = t.adj_node(k);
        if (r[w] == r[v]) {
          if (!seen[w]) {
            seen[w] = 1;
            stack.push_back(w);
          }
        } else if (r[w] < r[v]) {
          is_min = false;
        }
      }
    }
    if (is_min) out.emplace_back(comp);
  }
  return out;
}

// Nodes whose water reaches Q: reverse reachability in the flow graph.
inline NodeSet watershed(const ImpreciseTerrain& t, const FlowGraph& g, const NodeSet& Q) {
  require_nodes(t, Q);
  std::vector<char> in(t.size(), 0);
  std::deque<NodeId> queue;
  for (NodeId q : Q) {
    in[q] = 1;
    queue.push_back(q);
  }
  while (!queue.empty()) {
    NodeId x = queue.front();
    queue.pop_front();
    for (std::size_t k = t.adj_begin(x); k < t.adj_end(x); ++k) {
      NodeId p = t.adj_node(k);
      if (!in[p] && g.has_edge(p, x)) {
        in[p] = 1;
        queue.push_back(p);
      }
    }
  }
  return NodeSet::from_mask(in);
}

inline NodeSet watershed(const ImpreciseTerrain& t, const Realization& r, const NodeSet& Q) {
  return watershed(t, flow_graph(t, r), Q);
}

// Nodes that receive water from Q: forward reachability in the flow graph.
inline NodeSet forward_reach(const ImpreciseTerrain& t, const FlowGraph& g, const NodeSet& Q) {
  require_nodes(t, Q);
  std::vector<char> in(t.size(), 0);
  std::deque<NodeId> queue;
  for (NodeId q : Q) {
    in[q] = 1;
    queue.push_back(q);
  }
  while (!queue.empty()) {
    NodeId x = queue.front();
    queue.pop_front();
    for (std::size_t k = g.begin(x); k < g.end(x); ++k) {
      NodeId y = g.at(k);
      if (!in[y]) {
        in[y] = 1;
        queue.push_back(y);
      }
    }
  }
  return NodeSet::from_mask(in);
}

inline NodeSet forward_reach(const ImpreciseTerrain& t, const Realization& r, const NodeSet& Q) {
  return forward_reach(t, flow_graph(t, r), Q);
}

inline CrossingSet crossing(const ImpreciseTerrain& t, const Realization& r, const NodeSet& Q) {
  CrossingSet out;
  if (Q.empty()) return out;
  auto in = watershed(t, r, Q).mask(t.size());
  for (NodeId u = 0; u < t.size(); ++u) {
    if (!in[u]) continue;
    for (std::size_t k = t.adj_begin(u); k < t.adj_end(u); ++k)
      if (!in[t.adj_node(k)]) out.push_back({u, t.adj_node(k)});
  }
  return out;
}

// Watershed overlay: per node, the lowest elevation among the listed
// realizations whose watershed contains it, high elsewhere.
inline Realization overlay(const ImpreciseTerrain& t,
                           const std::vector<std::pair<Realization, NodeSet>>& pairs) {
  Realization out = uppermost(t);
  std::vector<char> hit(t.size(), 0);
  for (const auto& [r, q] : pairs) {
    for (NodeId v : watershed(t, r, q)) {
      if (!hit[v] || r[v] < out.elevation[v]) out.elevation[v] = r[v];
      hit[v] = 1;
    }
  }
  return out;
}

}  // namespace iflow
