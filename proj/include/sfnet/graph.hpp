#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "sfnet/error.hpp"

namespace sfnet {

/// Dense node index in [0, node_count()). Never renumbered by removals.
using node_id = std::int32_t;

using edge_t = std::pair<node_id, node_id>;

/// Value -> relative frequency, ascending by value.
using histogram = std::map<std::size_t, double>;

/// Mutable undirected simple graph. Nodes are created up front; removal
/// marks a node dead and deletes its incident edges. Neighbor lists are kept
/// sorted by id so every traversal is deterministic.
class graph {
 public:
  graph() = default;
  explicit graph(std::size_t n) : adj_(n), alive_(n, 1), alive_count_(n) {}

  std::size_t node_count() const noexcept { return adj_.size(); }
  std::size_t alive_count() const noexcept { return alive_count_; }
  std::size_t edge_count() const noexcept { return edge_count_; }

  bool valid(node_id i) const noexcept {
    return i >= 0 && static_cast<std::size_t>(i) < adj_.size();
  }
  bool alive(node_id i) const noexcept { return valid(i) && alive_[i] != 0; }

  std::size_t degree(node_id i) const { return adj_[check(i)].size(); }

  std::span<const node_id> neighbors(node_id i) const { return adj_[check(i)]; }

  bool has_edge(node_id i, node_id j) const {
    if (!alive(i) || !alive(j)) return false;
    const auto& a = adj_[i];
    return std::binary_search(a.begin(), a.end(), j);
  }

  void add_edge(node_id i, node_id j) {
    check(i);
    check(j);
    if (i == j) throw error(errc::self_loop, "node " + std::to_string(i));
    if (!alive_[i] || !alive_[j])
      throw error(errc::dead_endpoint, edge_name(i, j));
    auto& ai = adj_[i];
    auto pos = std::lower_bound(ai.begin(), ai.end(), j);
    if (pos != ai.end() && *pos == j) throw error(errc::duplicate_edge, edge_name(i, j));
    ai.insert(pos, j);
    auto& aj = adj_[j];
    aj.insert(std::lower_bound(aj.begin(), aj.end(), i), i);
    ++edge_count_;
  }

  void remove_node(node_id i) {
    check(i);
    if (!alive_[i]) throw error(errc::already_dead, "node " + std::to_string(i));
    for (node_id j : adj_[i]) {
      auto& aj = adj_[j];
      aj.erase(std::lower_bound(aj.begin(), aj.end(), i));
    }
    edge_count_ -= adj_[i].size();
    adj_[i].clear();
    adj_[i].shrink_to_fit();
    alive_[i] = 0;
    --alive_count_;
  }

  std::vector<node_id> alive_nodes() const {
    std::vector<node_id> out;
    out.reserve(alive_count_);
    for (std::size_t i = 0; i < adj_.size(); ++i)
      if (alive_[i]) out.push_back(static_cast<node_id>(i));
    return out;
  }

  /// Alive edges as (u, v) with u < v, in ascending lexicographic order.
  std::vector<edge_t> edges() const {
    std::vector<edge_t> out;
    out.reserve(edge_count_);
    for (std::size_t i = 0; i < adj_.size(); ++i) {
      const auto u = static_cast<node_id>(i);
      for (node_id v : adj_[i])
        if (u < v) out.emplace_back(u, v);
    }
    return out;
  }

  std::vector<std::size_t> degrees() const {
    std::vector<std::size_t> out(adj_.size());
    for (std::size_t i = 0; i < adj_.size(); ++i) out[i] = adj_[i].size();
    return out;
  }

  friend bool operator==(const graph&, const graph&) = default;

 private:
  std::size_t check(node_id i) const {
    if (!valid(i)) throw error(errc::invalid_node, "node " + std::to_string(i));
    return static_cast<std::size_t>(i);
  }

  static std::string edge_name(node_id i, node_id j) {
    return "(" + std::to_string(i) + "," + std::to_string(j) + ")";
  }

  std::vector<std::vector<node_id>> adj_;
  std::vector<std::uint8_t> alive_;
  std::size_t alive_count_ = 0;
  std::size_t edge_count_ = 0;
};

inline graph make_graph(std::size_t n, std::span<const edge_t> edges) {
  graph g(n);
  for (auto [u, v] : edges) g.add_edge(u, v);
  return g;
}

inline graph make_graph(std::size_t n, std::initializer_list<edge_t> edges) {
  return make_graph(n, std::span<const edge_t>(edges.begin(), edges.size()));
}

struct component_report {
  std::vector<std::size_t> sizes;  // descending
  std::size_t lcc = 0;
  std::vector<std::int32_t> component_of;  // -1 for dead nodes
};

inline component_report components(const graph& g) {
  component_report report;
  const std::size_t n = g.node_count();
  report.component_of.assign(n, -1);
  std::vector<node_id> stack;
  std::int32_t next_id = 0;
  for (std::size_t s = 0; s < n; ++s) {
    const auto src = static_cast<node_id>(s);
    if (!g.alive(src) || report.component_of[s] >= 0) continue;
    std::size_t size = 0;
    report.component_of[s] = next_id;
    stack.push_back(src);
    while (!stack.empty()) {
      node_id u = stack.back();
      stack.pop_back();
      ++size;
      for (node_id v : g.neighbors(u)) {
        if (report.component_of[v] < 0) {
          report.component_of[v] = next_id;
          stack.push_back(v);
        }
      }
    }
    report.sizes.push_back(size);
    ++next_id;
  }
  std::sort(report.sizes.begin(), report.sizes.end(), std::greater<>());
  report.lcc = report.sizes.empty() ? 0 : report.sizes.front();
  return report;
}

inline std::size_t largest_component_size(const graph& g) { return components(g).lcc; }

/// Membership mask of the 2-core: nodes surviving iterative removal of
/// nodes with residual degree <= 1.
inline std::vector<std::uint8_t> two_core_mask(const graph& g) {
  const std::size_t n = g.node_count();
  std::vector<std::uint8_t> in_core(n, 0);
  std::vector<std::size_t> deg(n, 0);
  std::vector<node_id> queue;
  for (std::size_t i = 0; i < n; ++i) {
    const auto u = static_cast<node_id>(i);
    if (!g.alive(u)) continue;
    in_core[i] = 1;
    deg[i] = g.degree(u);
    if (deg[i] <= 1) queue.push_back(u);
  }
  while (!queue.empty()) {
    node_id u = queue.back();
    queue.pop_back();
    if (!in_core[u]) continue;
    in_core[u] = 0;
    for (node_id v : g.neighbors(u)) {
      if (in_core[v] && --deg[v] == 1) queue.push_back(v);
    }
  }
  return in_core;
}

inline std::vector<node_id> two_core(const graph& g) {
  const auto mask = two_core_mask(g);
  std::vector<node_id> out;
  for (std::size_t i = 0; i < mask.size(); ++i)
    if (mask[i]) out.push_back(static_cast<node_id>(i));
  return out;
}

/// A graph is a forest iff every component with c nodes has c - 1 edges.
inline bool is_forest(const graph& g) {
  const auto report = components(g);
  return g.edge_count() + report.sizes.size() == g.alive_count();
}

/// Reusable BFS scratch space. Visited marks are generation stamps so a
/// fresh search costs nothing to reset.
class bfs_workspace {
 public:
  void prepare(std::size_t n) {
    if (stamp_.size() < n) {
      stamp_.assign(n, 0);
      dist_.assign(n, 0);
      current_ = 0;
    }
    if (++current_ == 0) {
      std::fill(stamp_.begin(), stamp_.end(), 0);
      current_ = 1;
    }
    queue_.clear();
  }

  bool seen(node_id u) const { return stamp_[u] == current_; }
  void mark(node_id u, std::uint32_t d) {
    stamp_[u] = current_;
    dist_[u] = d;
  }
  std::uint32_t dist(node_id u) const { return dist_[u]; }
  std::vector<node_id>& queue() { return queue_; }

 private:
  std::vector<std::uint32_t> stamp_;
  std::vector<std::uint32_t> dist_;
  std::vector<node_id> queue_;
  std::uint32_t current_ = 0;
};

/// Hop distance from i to j with the edge (i, j) masked out; nullopt when
/// the edge is a bridge. The graph is not modified.
inline std::optional<std::size_t> shortest_path_len_excluding_edge(const graph& g, node_id i,
                                                                   node_id j, bfs_workspace& ws) {
  if (!g.has_edge(i, j))
    throw error(errc::no_such_edge, "(" + std::to_string(i) + "," + std::to_string(j) + ")");
  ws.prepare(g.node_count());
  auto& queue = ws.queue();
  ws.mark(i, 0);
  queue.push_back(i);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const node_id u = queue[head];
    const std::uint32_t du = ws.dist(u);
    for (node_id v : g.neighbors(u)) {
      if (u == i && v == j) continue;
      if (ws.seen(v)) continue;
      if (v == j) return du + 1;
      ws.mark(v, du + 1);
      queue.push_back(v);
    }
  }
  return std::nullopt;
}

inline std::optional<std::size_t> shortest_path_len_excluding_edge(const graph& g, node_id i,
                                                                   node_id j) {
  bfs_workspace ws;
  return shortest_path_len_excluding_edge(g, i, j, ws);
}

// Edge-list text format:
//   # nodes=<N> edges=<M>
//   u v        (0-based, u < v, ascending, one per line, LF)

inline void write_edge_list(std::ostream& os, const graph& g) {
  const auto edges = g.edges();
  os << "# nodes=" << g.node_count() << " edges=" << edges.size() << '\n';
  for (auto [u, v] : edges) os << u << ' ' << v << '\n';
}

inline std::string to_edge_list(const graph& g) {
  std::ostringstream os;
  write_edge_list(os, g);
  return os.str();
}

inline graph read_edge_list(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw error(errc::parse_error, "missing header line");
  long long n = -1;
  long long m = -1;
  {
    std::istringstream header(line);
    std::string hash, nodes_tok, edges_tok;
    header >> hash >> nodes_tok >> edges_tok;
    if (hash != "#" || nodes_tok.rfind("nodes=", 0) != 0 || edges_tok.rfind("edges=", 0) != 0)
      throw error(errc::parse_error, "bad header '" + line + "'");
    try {
      n = std::stoll(nodes_tok.substr(6));
      m = std::stoll(edges_tok.substr(6));
    } catch (const std::exception&) {
      throw error(errc::parse_error, "bad header '" + line + "'");
    }
    if (n < 0 || m < 0) throw error(errc::parse_error, "negative counts in header");
  }
  graph g(static_cast<std::size_t>(n));
  long long seen_edges = 0;
  std::size_t line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream row(line);
    long long u = -1;
    long long v = -1;
    std::string rest;
    if (!(row >> u >> v) || (row >> rest) || u < 0 || v < 0 || u >= n || v >= n)
      throw error(errc::parse_error, "line " + std::to_string(line_no) + ": '" + line + "'");
    g.add_edge(static_cast<node_id>(u), static_cast<node_id>(v));
    ++seen_edges;
  }
  if (seen_edges != m)
    throw error(errc::parse_error, "header declares " + std::to_string(m) + " edges, found " +
                                       std::to_string(seen_edges));
  return g;
}

inline graph parse_edge_list(const std::string& text) {
  std::istringstream is(text);
  return read_edge_list(is);
}

}  // namespace sfnet
