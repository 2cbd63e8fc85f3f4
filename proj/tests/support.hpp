#pragma once

// Random small-graph generators and the path-enumeration betweenness oracle
// shared by the unit and acceptance suites.

#include <cstdint>
#include <optional>
#include <vector>

#include "sfnet/error.hpp"
#include "sfnet/graph.hpp"
#include "sfnet/rng.hpp"

namespace sfnet::testkit {

/// Error code thrown by fn, or nullopt when it returns normally.
template <class F>
std::optional<errc> code_of(F&& fn) {
  try {
    fn();
  } catch (const error& e) {
    return e.code();
  }
  return std::nullopt;
}

/// G(n, p) on n nodes.
inline graph random_gnp(std::size_t n, double p, rng& gen) {
  graph g(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (gen.uniform01() < p) g.add_edge(static_cast<node_id>(i), static_cast<node_id>(j));
  return g;
}

/// Uniform random recursive tree: node i attaches to a uniform earlier node.
inline graph random_tree(std::size_t n, rng& gen) {
  graph g(n);
  for (std::size_t i = 1; i < n; ++i)
    g.add_edge(static_cast<node_id>(i), static_cast<node_id>(gen.below(i)));
  return g;
}

/// Random tree plus `extra` additional random links (connected by construction).
inline graph random_connected(std::size_t n, std::size_t extra, rng& gen) {
  graph g = random_tree(n, gen);
  for (std::size_t k = 0, tries = 0; k < extra && tries < 100 * (extra + 1); ++tries) {
    const auto u = static_cast<node_id>(gen.below(n));
    const auto v = static_cast<node_id>(gen.below(n));
    if (u == v || g.has_edge(u, v)) continue;
    g.add_edge(u, v);
    ++k;
  }
  return g;
}

/// Betweenness by listing every simple path between each unordered pair and
/// crediting intermediate nodes of the shortest ones. Exponential; tiny graphs only.
inline std::vector<double> betweenness_by_path_enumeration(const graph& g) {
  const std::size_t n = g.node_count();
  std::vector<double> score(n, 0.0);
  std::vector<node_id> path;
  std::vector<std::uint8_t> on_path(n, 0);
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t t = s + 1; t < n; ++t) {
      const auto src = static_cast<node_id>(s);
      const auto dst = static_cast<node_id>(t);
      if (!g.alive(src) || !g.alive(dst)) continue;
      std::vector<std::vector<node_id>> found;
      path.assign(1, src);
      on_path[src] = 1;
      auto dfs = [&](auto&& self) -> void {
        const node_id tip = path.back();
        if (tip == dst) {
          found.push_back(path);
          return;
        }
        for (node_id v : g.neighbors(tip)) {
          if (on_path[v]) continue;
          on_path[v] = 1;
          path.push_back(v);
          self(self);
          path.pop_back();
          on_path[v] = 0;
        }
      };
      dfs(dfs);
      on_path[src] = 0;
      if (found.empty()) continue;
      std::size_t shortest = found.front().size();
      for (const auto& p : found) shortest = std::min(shortest, p.size());
      std::vector<std::size_t> through(n, 0);
      std::size_t total = 0;
      for (const auto& p : found) {
        if (p.size() != shortest) continue;
        ++total;
        for (std::size_t k = 1; k + 1 < p.size(); ++k) ++through[p[k]];
      }
      for (std::size_t v = 0; v < n; ++v)
        score[v] += static_cast<double>(through[v]) / static_cast<double>(total);
    }
  }
  return score;
}

}  // namespace sfnet::testkit
