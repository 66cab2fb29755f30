#pragma once

// Imprecise terrain model: a geometric graph whose nodes carry elevation
// intervals. Everything else in iflow is built on these types.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace iflow {

using NodeId = std::uint32_t;
inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();

// Input data is malformed or violates a terrain/realization invariant.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input is well formed but an operation's precondition does not hold
// (empty target set, non-regular terrain, ...).
class PreconditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Point2 {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point2&, const Point2&) = default;
};

struct ElevationInterval {
  double low = 0.0;
  double high = 0.0;
  friend bool operator==(const ElevationInterval&, const ElevationInterval&) = default;
};

struct Edge {
  NodeId u = 0;
  NodeId v = 0;
  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

// Slope of descent from a node at z_from towards a neighbor at z_to, at
// planar distance dist. Every steepest-descent decision in the library goes
// through this one expression so that all modules agree bit for bit.
inline double steepness(double z_from, double z_to, double dist) {
  return (z_from - z_to) / dist;
}

// Sorted set of node ids. Iteration is always ascending.
class NodeSet {
 public:
  NodeSet() = default;
  NodeSet(std::initializer_list<NodeId> ids) : ids_(ids) { normalize(); }
  explicit NodeSet(std::vector<NodeId> ids) : ids_(std::move(ids)) { normalize(); }

  static NodeSet from_mask(const std::vector<char>& mask) {
    NodeSet s;
    for (NodeId v = 0; v < mask.size(); ++v)
      if (mask[v]) s.ids_.push_back(v);
    return s;
  }
  static NodeSet all(std::size_t n) {
    NodeSet s;
    s.ids_.resize(n);
    std::iota(s.ids_.begin(), s.ids_.end(), NodeId{0});
    return s;
  }

  std::vector<char> mask(std::size_t n) const {
    std::vector<char> m(n, 0);
    for (NodeId v : ids_) m[v] = 1;
    return m;
  }

  bool contains(NodeId v) const { return std::binary_search(ids_.begin(), ids_.end(), v); }
  bool empty() const { return ids_.empty(); }
  std::size_t size() const { return ids_.size(); }
  auto begin() const { return ids_.begin(); }
  auto end() const { return ids_.end(); }
  const std::vector<NodeId>& ids() const { return ids_; }
  NodeId front() const { return ids_.front(); }

  void insert(NodeId v) {
    auto it = std::lower_bound(ids_.begin(), ids_.end(), v);
    if (it == ids_.end() || *it != v) ids_.insert(it, v);
  }

  bool is_subset_of(const NodeSet& o) const {
    return std::includes(o.ids_.begin(), o.ids_.end(), ids_.begin(), ids_.end());
  }

  NodeSet unite(const NodeSet& o) const {
    NodeSet r;
    std::set_union(ids_.begin(), ids_.end(), o.ids_.begin(), o.ids_.end(),
                   std::back_inserter(r.ids_));
    return r;
  }
  NodeSet intersect(const NodeSet& o) const {
    NodeSet r;
    std::set_intersection(ids_.begin(), ids_.end(), o.ids_.begin(), o.ids_.end(),
                          std::back_inserter(r.ids_));
    return r;
  }
  NodeSet minus(const NodeSet& o) const {
    NodeSet r;
    std::set_difference(ids_.begin(), ids_.end(), o.ids_.begin(), o.ids_.end(),
                        std::back_inserter(r.ids_));
    return r;
  }
  NodeSet complement(std::size_t n) const { return all(n).minus(*this); }

  friend bool operator==(const NodeSet&, const NodeSet&) = default;

 private:
  void normalize() {
    std::sort(ids_.begin(), ids_.end());
    ids_.erase(std::unique(ids_.begin(), ids_.end()), ids_.end());
  }
  std::vector<NodeId> ids_;
};

struct Violation {
  enum class Kind { BadInterval, NonFinite, SelfLoop, DuplicateEdge, ZeroLengthEdge, BadNodeId };
  Kind kind;
  NodeId u = kNoNode;
  NodeId v = kNoNode;
  std::string message;
};

// Immutable imprecise terrain. Adjacency is stored in CSR form with each
// neighbor list sorted by id; dist(e) is the planar length of the half-edge.
class ImpreciseTerrain {
 public:
  ImpreciseTerrain() = default;

  // Edge lengths default to the Euclidean distance between positions. Grid
  // loaders pass explicit lengths (cellsize and cellsize*sqrt2).
  ImpreciseTerrain(std::vector<Point2> positions, std::vector<ElevationInterval> intervals,
                   std::vector<Edge> edges, std::vector<double> lengths = {})
      : pos_(std::move(positions)), iv_(std::move(intervals)), edges_(std::move(edges)) {
    if (pos_.size() != iv_.size())
      throw ValidationError("positions and intervals differ in size");
    const auto n = static_cast<NodeId>(pos_.size());
    if (!lengths.empty() && lengths.size() != edges_.size())
      throw ValidationError("edge length list differs in size from edge list");
    for (auto& e : edges_) {
      if (e.u >= n || e.v >= n)
        throw ValidationError("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                              ") references a missing node");
    }
    // Canonical edge order: u < v, ascending. Lengths follow their edge.
    std::vector<std::size_t> order(edges_.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (auto& e : edges_)
      if (e.u > e.v) std::swap(e.u, e.v);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return edges_[a] < edges_[b]; });
    std::vector<Edge> sorted(edges_.size());
    len_.resize(edges_.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
      sorted[i] = edges_[order[i]];
      len_[i] = lengths.empty() ? euclid(sorted[i].u, sorted[i].v) : lengths[order[i]];
    }
    edges_ = std::move(sorted);

    off_.assign(n + 1, 0);
    for (auto& e : edges_) {
      ++off_[e.u + 1];
      if (e.v != e.u) ++off_[e.v + 1];
    }
    for (NodeId v = 0; v < n; ++v) off_[v + 1] += off_[v];
    adj_.resize(off_[n]);
    adj_len_.resize(off_[n]);
    std::vector<std::size_t> fill(off_.begin(), off_.end() - 1);
    for (std::size_t i = 0; i < edges_.size(); ++i) {
      const auto& e = edges_[i];
      adj_[fill[e.u]] = e.v;
      adj_len_[fill[e.u]++] = len_[i];
      if (e.v != e.u) {
        adj_[fill[e.v]] = e.u;
        adj_len_[fill[e.v]++] = len_[i];
      }
    }
    // Edges are sorted by (u,v), so each list is built in ascending order
    // for the larger endpoint but not for the smaller; sort per node.
    for (NodeId v = 0; v < n; ++v) {
      std::vector<std::pair<NodeId, double>> tmp;
      for (std::size_t k = off_[v]; k < off_[v + 1]; ++k) tmp.emplace_back(adj_[k], adj_len_[k]);
      std::sort(tmp.begin(), tmp.end());
      for (std::size_t k = off_[v]; k < off_[v + 1]; ++k) {
        adj_[k] = tmp[k - off_[v]].first;
        adj_len_[k] = tmp[k - off_[v]].second;
      }
    }
  }

  std::size_t size() const { return pos_.size(); }
  const Point2& position(NodeId v) const { return pos_[v]; }
  const ElevationInterval& interval(NodeId v) const { return iv_[v]; }
  double low(NodeId v) const { return iv_[v].low; }
  double high(NodeId v) const { return iv_[v].high; }
  const std::vector<Point2>& positions() const { return pos_; }
  const std::vector<ElevationInterval>& intervals() const { return iv_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<double>& edge_lengths() const { return len_; }

  std::size_t degree(NodeId v) const { return off_[v + 1] - off_[v]; }
  std::size_t adj_begin(NodeId v) const { return off_[v]; }
  std::size_t adj_end(NodeId v) const { return off_[v + 1]; }
  NodeId adj_node(std::size_t k) const { return adj_[k]; }
  double adj_dist(std::size_t k) const { return adj_len_[k]; }

  // Half-edge index of (p,q) in p's list, or nullopt.
  std::optional<std::size_t> find_edge(NodeId p, NodeId q) const {
    auto b = adj_.begin() + static_cast<std::ptrdiff_t>(off_[p]);
    auto e = adj_.begin() + static_cast<std::ptrdiff_t>(off_[p + 1]);
    auto it = std::lower_bound(b, e, q);
    if (it == e || *it != q) return std::nullopt;
    return static_cast<std::size_t>(it - adj_.begin());
  }
  double distance(NodeId p, NodeId q) const {
    auto k = find_edge(p, q);
    if (!k) throw std::invalid_argument("nodes are not adjacent");
    return adj_len_[*k];
  }

  // Same nodes and edges with replaced intervals.
  ImpreciseTerrain with_intervals(std::vector<ElevationInterval> iv) const {
    ImpreciseTerrain t = *this;
    if (iv.size() != size()) throw ValidationError("interval count mismatch");
    t.iv_ = std::move(iv);
    return t;
  }

  friend bool operator==(const ImpreciseTerrain& a, const ImpreciseTerrain& b) {
    return a.pos_ == b.pos_ && a.iv_ == b.iv_ && a.edges_ == b.edges_ && a.len_ == b.len_;
  }

 private:
  double euclid(NodeId a, NodeId b) const {
    return std::hypot(pos_[a].x - pos_[b].x, pos_[a].y - pos_[b].y);
  }

  std::vector<Point2> pos_;
  std::vector<ElevationInterval> iv_;
  std::vector<Edge> edges_;
  std::vector<double> len_;
  std::vector<std::size_t> off_{0};
  std::vector<NodeId> adj_;
  std::vector<double> adj_len_;
};

inline std::vector<Violation> validate(const ImpreciseTerrain& t) {
  std::vector<Violation> out;
  for (NodeId v = 0; v < t.size(); ++v) {
    const auto& iv = t.interval(v);
    const auto& p = t.position(v);
    if (!std::isfinite(iv.low) || !std::isfinite(iv.high) || !std::isfinite(p.x) ||
        !std::isfinite(p.y)) {
      out.push_back({Violation::Kind::NonFinite, v, kNoNode,
                     "node " + std::to_string(v) + " has a non-finite value"});
    } else if (iv.low > iv.high) {
      out.push_back({Violation::Kind::BadInterval, v, kNoNode,
                     "node " + std::to_string(v) + " has low > high"});
    }
  }
  const auto& es = t.edges();
  const auto& ls = t.edge_lengths();
  for (std::size_t i = 0; i < es.size(); ++i) {
    const auto& e = es[i];
    if (e.u == e.v) {
      out.push_back({Violation::Kind::SelfLoop, e.u, e.v,
                     "self-loop at node " + std::to_string(e.u)});
      continue;
    }
    if (i > 0 && es[i - 1] == e) {
      out.push_back({Violation::Kind::DuplicateEdge, e.u, e.v,
                     "duplicate edge (" + std::to_string(e.u) + "," + std::to_string(e.v) + ")"});
    }
    if (!(ls[i] > 0.0) || !std::isfinite(ls[i])) {
      out.push_back({Violation::Kind::ZeroLengthEdge, e.u, e.v,
                     "edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                         ") has non-positive length"});
    }
  }
  return out;
}

// Throws ValidationError with all violations joined if the terrain is invalid.
inline void require_valid(const ImpreciseTerrain& t) {
  auto vs = validate(t);
  if (vs.empty()) return;
  std::string msg;
  for (const auto& v : vs) {
    if (!msg.empty()) msg += "; ";
    msg += v.message;
  }
  throw ValidationError(msg);
}

inline NodeSet neighborhood(const ImpreciseTerrain& t, const NodeSet& P) {
  auto in = P.mask(t.size());
  std::vector<char> out(t.size(), 0);
  for (NodeId p : P)
    for (std::size_t k = t.adj_begin(p); k < t.adj_end(p); ++k)
      if (!in[t.adj_node(k)]) out[t.adj_node(k)] = 1;
  return NodeSet::from_mask(out);
}

// A concrete elevation per node.
struct Realization {
  std::vector<double> elevation;

  double operator[](NodeId v) const { return elevation[v]; }
  std::size_t size() const { return elevation.size(); }
  friend bool operator==(const Realization&, const Realization&) = default;
};

inline Realization lowermost(const ImpreciseTerrain& t) {
  Realization r;
  r.elevation.reserve(t.size());
  for (const auto& iv : t.intervals()) r.elevation.push_back(iv.low);
  return r;
}

inline Realization uppermost(const ImpreciseTerrain& t) {
  Realization r;
  r.elevation.reserve(t.size());
  for (const auto& iv : t.intervals()) r.elevation.push_back(iv.high);
  return r;
}

inline bool is_valid_realization(const ImpreciseTerrain& t, const Realization& r) {
  if (r.size() != t.size()) return false;
  for (NodeId v = 0; v < t.size(); ++v)
    if (!(r[v] >= t.low(v) && r[v] <= t.high(v))) return false;
  return true;
}

inline void require_valid_realization(const ImpreciseTerrain& t, const Realization& r) {
  if (r.size() != t.size())
    throw ValidationError("realization has " + std::to_string(r.size()) + " nodes, terrain has " +
                          std::to_string(t.size()));
  for (NodeId v = 0; v < t.size(); ++v)
    if (!(r[v] >= t.low(v) && r[v] <= t.high(v)))
      throw ValidationError("elevation of node " + std::to_string(v) + " lies outside its interval");
}

inline void require_nodes(const ImpreciseTerrain& t, const NodeSet& s) {
  if (!s.empty() && s.ids().back() >= t.size())
    throw ValidationError("node " + std::to_string(s.ids().back()) + " does not exist");
}

}  // namespace iflow
