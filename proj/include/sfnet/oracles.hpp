#pragma once

// Exhaustive reference implementations used to validate the fast
// algorithms on small graphs. They share nothing with those algorithms
// beyond the graph type.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "sfnet/error.hpp"
#include "sfnet/graph.hpp"

namespace sfnet {

struct fvs_result {
  std::size_t size = 0;
  std::vector<node_id> witness;
};

namespace detail {

inline bool acyclic_without(const graph& g, const std::vector<std::uint8_t>& removed) {
  std::vector<node_id> parent(g.node_count());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](node_id v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  for (auto [u, v] : g.edges()) {
    if (removed[u] || removed[v]) continue;
    const node_id a = find(u);
    const node_id b = find(v);
    if (a == b) return false;
    parent[a] = b;
  }
  return true;
}

}  // namespace detail

/// Smallest node set whose removal leaves a forest, by subset enumeration
/// in increasing size.
inline fvs_result brute_force_min_fvs(const graph& g) {
  const auto nodes = g.alive_nodes();
  if (nodes.size() > 20) throw error(errc::too_large, "brute-force FVS limited to 20 nodes");
  std::vector<std::uint8_t> removed(g.node_count(), 0);
  for (std::size_t k = 0; k <= nodes.size(); ++k) {
    std::vector<std::size_t> pick(k);
    std::iota(pick.begin(), pick.end(), 0);
    while (true) {
      for (std::size_t idx : pick) removed[nodes[idx]] = 1;
      const bool ok = detail::acyclic_without(g, removed);
      for (std::size_t idx : pick) removed[nodes[idx]] = 0;
      if (ok) {
        fvs_result r{k, {}};
        for (std::size_t idx : pick) r.witness.push_back(nodes[idx]);
        return r;
      }
      // next combination in lexicographic order
      std::size_t i = k;
      while (i > 0 && pick[i - 1] == nodes.size() - k + i - 1) --i;
      if (i == 0) break;
      ++pick[i - 1];
      for (std::size_t j = i; j < k; ++j) pick[j] = pick[j - 1] + 1;
    }
  }
  return {nodes.size(), nodes};
}

/// Exact probability that each node is empty under the FVS spin model
/// (states empty / root / parent = neighbor; an occupied node may not name
/// an empty parent; two occupied neighbors must have exactly one naming the
/// other; weight exp(x * #occupied)), by enumerating every configuration.
/// Dead nodes get 0.
inline std::vector<double> exact_spin_marginals(const graph& g, double x) {
  const auto nodes = g.alive_nodes();
  if (nodes.size() > 8) throw error(errc::too_large, "exact spin marginals limited to 8 nodes");
  constexpr node_id empty = -2;
  constexpr node_id root = -1;
  const std::size_t n = nodes.size();

  // counts[occ] = number of valid configurations with occ occupied nodes;
  // empty_counts[i][occ] restricted to configurations where node i is empty.
  std::vector<double> counts(n + 1, 0.0);
  std::vector<std::vector<double>> empty_counts(n, std::vector<double>(n + 1, 0.0));
  std::vector<node_id> state(g.node_count(), empty);
  std::vector<std::uint8_t> assigned(g.node_count(), 0);

  auto compatible = [&](node_id i, node_id j) {
    const node_id ai = state[i];
    const node_id aj = state[j];
    if (ai == j && aj == empty) return false;
    if (aj == i && ai == empty) return false;
    if (ai != empty && aj != empty) return (ai == j) != (aj == i);
    return true;
  };

  auto recurse = [&](auto&& self, std::size_t idx, std::size_t occupied) -> void {
    if (idx == n) {
      counts[occupied] += 1.0;
      for (std::size_t k = 0; k < n; ++k)
        if (state[nodes[k]] == empty) empty_counts[k][occupied] += 1.0;
      return;
    }
    const node_id i = nodes[idx];
    std::vector<node_id> options{empty, root};
    for (node_id j : g.neighbors(i)) options.push_back(j);
    assigned[i] = 1;
    for (node_id option : options) {
      state[i] = option;
      bool ok = true;
      for (node_id j : g.neighbors(i))
        if (assigned[j] && j != i && !compatible(i, j)) {
          ok = false;
          break;
        }
      if (ok) self(self, idx + 1, occupied + (option == empty ? 0 : 1));
    }
    assigned[i] = 0;
    state[i] = empty;
  };
  recurse(recurse, 0, 0);

  auto log_weighted = [&](const std::vector<double>& c) {
    double top = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k <= n; ++k)
      if (c[k] > 0.0) top = std::max(top, std::log(c[k]) + x * static_cast<double>(k));
    double sum = 0.0;
    for (std::size_t k = 0; k <= n; ++k)
      if (c[k] > 0.0) sum += std::exp(std::log(c[k]) + x * static_cast<double>(k) - top);
    return top + std::log(sum);
  };
  const double log_z = log_weighted(counts);
  std::vector<double> out(g.node_count(), 0.0);
  for (std::size_t k = 0; k < n; ++k) out[nodes[k]] = std::exp(log_weighted(empty_counts[k]) - log_z);
  return out;
}

/// Length of the shortest simple cycle through each alive edge, in
/// g.edges() order, found by enumerating all simple cycles; nullopt when
/// the edge lies on no cycle.
inline std::vector<std::optional<std::size_t>> brute_force_shortest_loops(const graph& g) {
  if (g.alive_count() > 10) throw error(errc::too_large, "cycle enumeration limited to 10 nodes");
  const auto edges = g.edges();
  std::map<edge_t, std::size_t> best;
  std::vector<node_id> path;
  std::vector<std::uint8_t> on_path(g.node_count(), 0);

  auto record = [&]() {
    const std::size_t len = path.size();
    for (std::size_t k = 0; k < len; ++k) {
      node_id a = path[k];
      node_id b = path[(k + 1) % len];
      if (a > b) std::swap(a, b);
      auto it = best.find({a, b});
      if (it == best.end() || len < it->second) best[{a, b}] = len;
    }
  };

  // Cycles are enumerated from their smallest node.
  auto extend = [&](auto&& self, node_id start) -> void {
    const node_id tip = path.back();
    for (node_id v : g.neighbors(tip)) {
      if (v == start && path.size() >= 3) record();
      if (v <= start || on_path[v]) continue;
      on_path[v] = 1;
      path.push_back(v);
      self(self, start);
      path.pop_back();
      on_path[v] = 0;
    }
  };
  for (node_id s : g.alive_nodes()) {
    path.assign(1, s);
    on_path[s] = 1;
    extend(extend, s);
    on_path[s] = 0;
  }

  std::vector<std::optional<std::size_t>> out;
  out.reserve(edges.size());
  for (const auto& e : edges) {
    auto it = best.find(e);
    out.push_back(it == best.end() ? std::nullopt : std::optional<std::size_t>(it->second));
  }
  return out;
}

}  // namespace sfnet
