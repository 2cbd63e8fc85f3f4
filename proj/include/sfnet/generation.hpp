#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <unordered_set>
#include <vector>

#include "sfnet/error.hpp"
#include "sfnet/graph.hpp"
#include "sfnet/rng.hpp"

namespace sfnet {

/// Shift c that makes attachment weight k + c produce P(k) ~ k^-gamma for
/// a growth process adding m links per node: gamma = 3 + c / m.
inline double gamma_to_c(double gamma, int m) {
  if (m < 1) throw error(errc::invalid_params, "m must be >= 1");
  if (!(gamma > 2.0))
    throw error(errc::gamma_out_of_range, "gamma = " + std::to_string(gamma) + " requires gamma > 2");
  return m * (gamma - 3.0);
}

/// Continuum estimate of <k> for a pure power law with cutoff k_min.
inline double expected_avg_degree(double gamma, int k_min) {
  if (!(gamma > 2.0))
    throw error(errc::gamma_out_of_range, "gamma = " + std::to_string(gamma) + " requires gamma > 2");
  return (gamma - 1.0) / (gamma - 2.0) * k_min;
}

struct price_params {
  std::size_t n = 1000;
  int m = 2;
  double gamma = 3.0;

  double c() const { return gamma_to_c(gamma, m); }

  void validate() const {
    if (m < 1) throw error(errc::invalid_params, "m must be >= 1");
    if (!(gamma > 2.0))
      throw error(errc::gamma_out_of_range, "gamma = " + std::to_string(gamma) + " requires gamma > 2");
    if (n < static_cast<std::size_t>(m) + 1)
      throw error(errc::invalid_params, "n must be >= m + 1");
  }
};

/// Growing network: starts from the complete graph on m + 1 nodes, then
/// each new node links to m distinct existing nodes, drawn one at a time
/// with probability proportional to k_i + c (already chosen targets are
/// rejected and redrawn).
inline graph price_generate(const price_params& params, std::uint64_t seed) {
  params.validate();
  const double c = params.c();
  const auto m = static_cast<std::size_t>(params.m);
  rng gen(seed);
  graph g(params.n);
  for (std::size_t i = 0; i <= m; ++i)
    for (std::size_t j = i + 1; j <= m; ++j)
      g.add_edge(static_cast<node_id>(i), static_cast<node_id>(j));

  std::vector<double> weight(params.n, 0.0);
  for (std::size_t i = 0; i <= m; ++i) weight[i] = static_cast<double>(m) + c;

  std::vector<node_id> targets;
  targets.reserve(m);
  for (std::size_t t = m + 1; t < params.n; ++t) {
    // Sum of k_i + c over existing nodes, exact up to one rounding.
    const double total = 2.0 * static_cast<double>(g.edge_count()) + c * static_cast<double>(t);
    targets.clear();
    while (targets.size() < m) {
      const double u = gen.uniform01() * total;
      double acc = 0.0;
      node_id pick = static_cast<node_id>(t - 1);
      for (std::size_t i = 0; i < t; ++i) {
        acc += weight[i];
        if (u < acc) {
          pick = static_cast<node_id>(i);
          break;
        }
      }
      if (std::find(targets.begin(), targets.end(), pick) == targets.end()) targets.push_back(pick);
    }
    const auto self = static_cast<node_id>(t);
    for (node_id v : targets) {
      g.add_edge(self, v);
      weight[v] += 1.0;
    }
    weight[t] = static_cast<double>(m) + c;
    if (!(weight[t] > 0.0))
      throw error(errc::invalid_params, "non-positive attachment weight");
  }
  return g;
}

struct randomize_options {
  int local_retries = 100;
  int repair_attempts = 1000;
  int max_restarts = 10000;
};

namespace detail {

constexpr std::uint64_t edge_key(node_id a, node_id b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) | static_cast<std::uint32_t>(b);
}

}  // namespace detail

/// Configuration-model rewiring: cut every edge into two stubs, shuffle,
/// pair consecutive stubs. A pair that would form a self-loop or a
/// multi-link gets its partner redrawn from the unpaired stubs. If that
/// fails `local_retries` times, the pair (u, v) is placed by swapping with
/// a random already-placed link (a, b) -> (u, a) + (v, b), which keeps
/// every degree. Unrepairable or disconnected results restart the matching.
inline graph randomize_preserving_degrees(const graph& g, std::uint64_t seed,
                                          const randomize_options& opts = {}) {
  const std::size_t n = g.node_count();
  std::vector<node_id> stubs;
  stubs.reserve(2 * g.edge_count());
  for (std::size_t i = 0; i < n; ++i) {
    const auto u = static_cast<node_id>(i);
    if (!g.alive(u)) continue;
    if (g.degree(u) == 0)
      throw error(errc::invalid_params, "randomization requires min degree >= 1");
    stubs.insert(stubs.end(), g.degree(u), u);
  }
  if (components(g).sizes.size() != 1)
    throw error(errc::invalid_params, "randomization requires a connected input");

  rng gen(seed);
  std::vector<edge_t> placed;
  std::unordered_set<std::uint64_t> present;
  auto valid = [&](node_id a, node_id b) { return a != b && !present.contains(detail::edge_key(a, b)); };

  auto repair = [&](node_id u, node_id v) {
    for (int attempt = 0; attempt < opts.repair_attempts && !placed.empty(); ++attempt) {
      const std::size_t k = gen.below(placed.size());
      auto [a, b] = placed[k];
      if (gen.below(2) == 1) std::swap(a, b);
      present.erase(detail::edge_key(a, b));
      if (valid(u, a) && valid(v, b) && detail::edge_key(u, a) != detail::edge_key(v, b)) {
        placed[k] = {u, a};
        placed.emplace_back(v, b);
        present.insert(detail::edge_key(u, a));
        present.insert(detail::edge_key(v, b));
        return true;
      }
      present.insert(detail::edge_key(a, b));
    }
    return false;
  };

  for (int restart = 0; restart < opts.max_restarts; ++restart) {
    gen.shuffle(std::span<node_id>(stubs));
    placed.clear();
    present.clear();

    bool ok = true;
    for (std::size_t p = 0; ok && p + 1 < stubs.size(); p += 2) {
      const node_id u = stubs[p];
      bool done = false;
      for (int attempt = 0; attempt <= opts.local_retries; ++attempt) {
        const node_id v = stubs[p + 1];
        if (valid(u, v)) {
          placed.emplace_back(u, v);
          present.insert(detail::edge_key(u, v));
          done = true;
          break;
        }
        const std::size_t remaining = stubs.size() - (p + 2);
        if (remaining == 0) break;
        std::swap(stubs[p + 1], stubs[p + 2 + gen.below(remaining)]);
      }
      ok = done || repair(u, stubs[p + 1]);
    }
    if (!ok) continue;

    graph out(n);
    for (std::size_t i = 0; i < n; ++i)
      if (!g.alive(static_cast<node_id>(i))) out.remove_node(static_cast<node_id>(i));
    std::sort(placed.begin(), placed.end(), [](const edge_t& x, const edge_t& y) {
      return detail::edge_key(x.first, x.second) < detail::edge_key(y.first, y.second);
    });
    for (auto [a, b] : placed) out.add_edge(a, b);
    if (components(out).sizes.size() == 1) return out;
  }
  throw error(errc::randomization_failed,
              "no simple connected matching after " + std::to_string(opts.max_restarts) + " restarts");
}

struct power_law_fit {
  double slope = 0.0;
  double intercept = 0.0;
  double rms_residual = 0.0;
  double expected_slope = 0.0;  // -gamma
  std::size_t points = 0;
};

/// Least-squares line through (ln k, ln P(k)) for the tail k >= 2 k_min,
/// stopping at the first degree with no mass (the sparse hub region past it
/// is dominated by single counts). Diagnostic only.
inline power_law_fit checked_power_law_fit(const histogram& hist, double gamma) {
  auto first = std::find_if(hist.begin(), hist.end(), [](const auto& kv) { return kv.second > 0.0; });
  if (first == hist.end()) throw error(errc::degenerate_histogram, "empty histogram");
  const std::size_t k_min = std::max<std::size_t>(first->first, 1);

  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t k = 2 * k_min;; ++k) {
    auto it = hist.find(k);
    if (it == hist.end() || it->second <= 0.0) break;
    xs.push_back(std::log(static_cast<double>(k)));
    ys.push_back(std::log(it->second));
  }
  if (xs.size() < 3)
    throw error(errc::degenerate_histogram,
                "need >= 3 contiguous tail degrees, have " + std::to_string(xs.size()));

  const auto count = static_cast<double>(xs.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= count;
  my /= count;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  power_law_fit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
    ss += r * r;
  }
  fit.rms_residual = std::sqrt(ss / count);
  fit.expected_slope = -gamma;
  fit.points = xs.size();
  return fit;
}

}  // namespace sfnet
