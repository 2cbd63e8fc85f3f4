#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "sfnet/error.hpp"
#include "sfnet/graph.hpp"
#include "sfnet/trace.hpp"

namespace sfnet {

/// R = (1/n) sum_{t=1..n} S(t)/n over the relative LCC curve.
inline double robustness_index(const attack_trace& trace, std::size_t n) {
  if (trace.lcc_curve.size() != n || n == 0)
    throw error(errc::length_mismatch, "trace has " + std::to_string(trace.lcc_curve.size()) +
                                           " entries, expected " + std::to_string(n));
  std::size_t sum = 0;
  for (std::size_t s : trace.lcc_curve) sum += s;
  const auto nn = static_cast<double>(n);
  return static_cast<double>(sum) / (nn * nn);
}

struct degree_stats {
  double mean = 0.0;
  double second_moment = 0.0;
  double variance = 0.0;
  std::size_t k_max = 0;
  histogram distribution;
  std::map<std::size_t, std::size_t> counts;
};

inline degree_stats compute_degree_stats(const graph& g) {
  if (g.alive_count() == 0) throw error(errc::empty_graph, "degree stats of empty graph");
  degree_stats out;
  auto& counts = out.counts;
  std::size_t sum = 0;
  std::size_t sum_sq = 0;
  for (node_id u : g.alive_nodes()) {
    const std::size_t k = g.degree(u);
    ++counts[k];
    sum += k;
    sum_sq += k * k;
    out.k_max = std::max(out.k_max, k);
  }
  const auto n = static_cast<double>(g.alive_count());
  out.mean = static_cast<double>(sum) / n;
  out.second_moment = static_cast<double>(sum_sq) / n;
  // Integer sums keep the moments exact; the variance is formed from them
  // as (n * sum_sq - sum^2) / n^2 to avoid cancellation.
  const double num = n * static_cast<double>(sum_sq) - static_cast<double>(sum) * static_cast<double>(sum);
  out.variance = std::max(0.0, num / (n * n));
  for (auto [k, c] : counts) out.distribution[k] = static_cast<double>(c) / n;
  return out;
}

struct loop_stats {
  histogram distribution;  // over links that lie on some cycle
  std::map<std::size_t, std::size_t> counts;
  std::optional<double> mean;  // nullopt when every link is a bridge
  std::size_t bridge_count = 0;
  std::size_t link_count = 0;

  bool no_loops() const noexcept { return !mean.has_value(); }
};

/// Shortest loop through each alive link (u, v), u < v, in edges() order;
/// nullopt for bridges. Loop length counts the link itself.
inline std::vector<std::optional<std::size_t>> shortest_loop_per_edge(const graph& g) {
  std::vector<std::optional<std::size_t>> out;
  bfs_workspace ws;
  for (auto [u, v] : g.edges()) {
    auto detour = shortest_path_len_excluding_edge(g, u, v, ws);
    out.push_back(detour ? std::optional<std::size_t>(*detour + 1) : std::nullopt);
  }
  return out;
}

inline loop_stats shortest_loop_stats(const graph& g) {
  loop_stats out;
  for (const auto& l : shortest_loop_per_edge(g)) {
    ++out.link_count;
    if (!l) {
      ++out.bridge_count;
      continue;
    }
    ++out.counts[*l];
  }
  const std::size_t looped = out.link_count - out.bridge_count;
  if (looped == 0) return out;
  double mean = 0.0;
  for (auto [l, c] : out.counts) {
    const double p = static_cast<double>(c) / static_cast<double>(looped);
    out.distribution[l] = p;
    mean += static_cast<double>(l) * p;
  }
  out.mean = mean;
  return out;
}

}  // namespace sfnet
