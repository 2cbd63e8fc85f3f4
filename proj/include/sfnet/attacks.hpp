#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sfnet/error.hpp"
#include "sfnet/graph.hpp"
#include "sfnet/trace.hpp"

namespace sfnet {

enum class attack_kind { degree, betweenness, bp };

constexpr std::string_view to_string(attack_kind kind) {
  switch (kind) {
    case attack_kind::degree: return "degree";
    case attack_kind::betweenness: return "betweenness";
    case attack_kind::bp: return "bp";
  }
  return "unknown";
}

inline attack_kind parse_attack_kind(std::string_view name) {
  if (name == "degree") return attack_kind::degree;
  if (name == "betweenness") return attack_kind::betweenness;
  if (name == "bp") return attack_kind::bp;
  throw error(errc::invalid_config, "unknown attack '" + std::string(name) + "'");
}

struct bp_params {
  double x = 10.0;
  double tolerance = 1e-6;
  int max_sweeps = 1000;
  double damping = 0.5;
  // Fraction of the 2-core removed per BP convergence; 0 removes one node.
  double batch = 0.0;

  void validate() const {
    if (!(x > 0.0)) throw error(errc::invalid_params, "bp x must be > 0");
    if (!(tolerance > 0.0)) throw error(errc::invalid_params, "bp tolerance must be > 0");
    if (max_sweeps < 1) throw error(errc::invalid_params, "bp max_sweeps must be >= 1");
    if (!(damping >= 0.0 && damping < 1.0))
      throw error(errc::invalid_params, "bp damping must lie in [0, 1)");
    if (!(batch >= 0.0 && batch < 1.0))
      throw error(errc::invalid_params, "bp batch must lie in [0, 1)");
  }
};

struct attack_strategy {
  attack_kind kind = attack_kind::degree;
  bp_params bp;
};

namespace detail {

inline void require_nonempty(const graph& g) {
  if (g.alive_count() == 0) throw error(errc::empty_graph, "no alive nodes");
}

inline node_id smallest_alive(const graph& g) {
  for (std::size_t i = 0; i < g.node_count(); ++i)
    if (g.alive(static_cast<node_id>(i))) return static_cast<node_id>(i);
  throw error(errc::empty_graph, "no alive nodes");
}

/// First index of the maximum over alive nodes (ties -> smallest id).
inline node_id argmax_alive(const graph& g, std::span<const double> score) {
  node_id best = -1;
  double best_score = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    const auto u = static_cast<node_id>(i);
    if (g.alive(u) && score[i] > best_score) {
      best = u;
      best_score = score[i];
    }
  }
  if (best < 0) throw error(errc::empty_graph, "no alive nodes");
  return best;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Degree

inline node_id next_target_degree(const graph& g) {
  detail::require_nonempty(g);
  node_id best = -1;
  std::size_t best_deg = 0;
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    const auto u = static_cast<node_id>(i);
    if (!g.alive(u)) continue;
    if (best < 0 || g.degree(u) > best_deg) {
      best = u;
      best_deg = g.degree(u);
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// Betweenness

/// Brandes single-source accumulation restricted to a set of sources.
/// Adds the ordered-pair dependencies of each source to `score`.
class brandes_workspace {
 public:
  explicit brandes_workspace(std::size_t n) : dist_(n, -1), sigma_(n, 0.0), delta_(n, 0.0) {}

  void accumulate_from(const graph& g, node_id s, std::span<double> score) {
    order_.clear();
    order_.push_back(s);
    dist_[s] = 0;
    sigma_[s] = 1.0;
    for (std::size_t head = 0; head < order_.size(); ++head) {
      const node_id v = order_[head];
      for (node_id w : g.neighbors(v)) {
        if (dist_[w] < 0) {
          dist_[w] = dist_[v] + 1;
          order_.push_back(w);
        }
        if (dist_[w] == dist_[v] + 1) sigma_[w] += sigma_[v];
      }
    }
    for (std::size_t k = order_.size(); k-- > 0;) {
      const node_id w = order_[k];
      for (node_id v : g.neighbors(w))
        if (dist_[v] == dist_[w] - 1) delta_[v] += sigma_[v] / sigma_[w] * (1.0 + delta_[w]);
      if (w != s) score[w] += delta_[w];
    }
    for (node_id v : order_) {
      dist_[v] = -1;
      sigma_[v] = 0.0;
      delta_[v] = 0.0;
    }
  }

 private:
  std::vector<std::int32_t> dist_;
  std::vector<double> sigma_;
  std::vector<double> delta_;
  std::vector<node_id> order_;
};

/// Unnormalized shortest-path betweenness over unordered pairs, endpoints
/// excluded. Dead nodes score 0. Components with <= 2 nodes are skipped.
inline std::vector<double> betweenness(const graph& g) {
  const std::size_t n = g.node_count();
  std::vector<double> score(n, 0.0);
  const auto comps = components(g);
  std::vector<std::size_t> comp_size(comps.sizes.size() + 1, 0);
  for (std::size_t i = 0; i < n; ++i)
    if (comps.component_of[i] >= 0) ++comp_size[comps.component_of[i]];
  brandes_workspace ws(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto s = static_cast<node_id>(i);
    if (comps.component_of[i] < 0 || comp_size[comps.component_of[i]] < 3) continue;
    ws.accumulate_from(g, s, score);
  }
  for (double& v : score) v *= 0.5;
  return score;
}

inline node_id next_target_betweenness(const graph& g) {
  detail::require_nonempty(g);
  const auto score = betweenness(g);
  return detail::argmax_alive(g, score);
}

/// Recalculated betweenness for a shrinking graph. After a removal only the
/// component that held the removed node is recomputed; sources are visited
/// in ascending id order so scores are bit-identical to a full recompute.
class betweenness_tracker {
 public:
  explicit betweenness_tracker(const graph& g)
      : raw_(g.node_count(), 0.0), ws_(g.node_count()), seen_(g.node_count(), 0) {
    std::vector<node_id> all = g.alive_nodes();
    recompute(g, all);
  }

  node_id next(const graph& g) const {
    detail::require_nonempty(g);
    node_id best = -1;
    double best_score = -1.0;
    for (std::size_t i = 0; i < g.node_count(); ++i) {
      const auto u = static_cast<node_id>(i);
      if (g.alive(u) && raw_[i] > best_score) {
        best = u;
        best_score = raw_[i];
      }
    }
    return best;
  }

  /// Call after `removed` has been deleted from g; `former_neighbors` are
  /// its neighbors before removal.
  void on_removed(const graph& g, node_id removed, std::span<const node_id> former_neighbors) {
    raw_[removed] = 0.0;
    // Gather the union of components touched by the removal.
    std::vector<node_id> touched;
    ++epoch_;
    for (node_id start : former_neighbors) {
      if (seen_[start] == epoch_) continue;
      seen_[start] = epoch_;
      std::size_t head = touched.size();
      touched.push_back(start);
      for (; head < touched.size(); ++head)
        for (node_id v : g.neighbors(touched[head]))
          if (seen_[v] != epoch_) {
            seen_[v] = epoch_;
            touched.push_back(v);
          }
    }
    std::sort(touched.begin(), touched.end());
    recompute(g, touched);
  }

  std::vector<double> scores() const {
    std::vector<double> out = raw_;
    for (double& v : out) v *= 0.5;
    return out;
  }

 private:
  void recompute(const graph& g, std::span<const node_id> nodes) {
    for (node_id u : nodes) raw_[u] = 0.0;
    const auto comps = components(g);
    std::vector<std::size_t> comp_size(comps.sizes.size() + 1, 0);
    for (std::size_t i = 0; i < g.node_count(); ++i)
      if (comps.component_of[i] >= 0) ++comp_size[comps.component_of[i]];
    for (node_id s : nodes)
      if (comp_size[comps.component_of[s]] >= 3) ws_.accumulate_from(g, s, raw_);
  }

  std::vector<double> raw_;  // ordered-pair sums (twice the betweenness)
  brandes_workspace ws_;
  std::vector<std::uint32_t> seen_;
  std::uint32_t epoch_ = 0;
};

// ---------------------------------------------------------------------------
// Belief propagation on the feedback-vertex-set spin model.
//
// Each node takes a state A_i in {empty, root, parent = k} with k a
// neighbor. For every edge (i, j): a node may not name an empty neighbor
// as parent, and when both endpoints are occupied exactly one of them names
// the other as parent. Occupied nodes therefore induce components that are
// trees (one root) or contain a single cycle (no root). Configuration
// weight is exp(x * #occupied).
//
// Cavity message i -> j (graph without j) holds the probability that i is
// empty (q0) and that i has no parent among its remaining neighbors (qroot);
// the remainder is the probability that i names some other neighbor.
// With s_k = q0_{k->i} + qroot_{k->i} and t_k = 1 - q0_{k->i}:
//   q0_{i->j}    ~ exp(-x)
//   qroot_{i->j} ~ prod_{k != j} s_k
//   rest         ~ sum_{k != j} t_k prod_{l != j,k} s_l
// which is exact on trees.

class bp_messages {
 public:
  static constexpr double eps = 1e-12;

  /// Allocates a message per directed edge of g (alive edges at this time).
  explicit bp_messages(const graph& g) : offset_(g.node_count() + 1, 0) {
    const std::size_t n = g.node_count();
    for (std::size_t i = 0; i < n; ++i)
      offset_[i + 1] = offset_[i] + (g.alive(static_cast<node_id>(i)) ? g.degree(static_cast<node_id>(i)) : 0);
    target_.resize(offset_[n]);
    reverse_.resize(offset_[n]);
    for (std::size_t i = 0; i < n; ++i) {
      const auto u = static_cast<node_id>(i);
      if (!g.alive(u)) continue;
      auto nb = g.neighbors(u);
      std::copy(nb.begin(), nb.end(), target_.begin() + static_cast<std::ptrdiff_t>(offset_[i]));
    }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t e = offset_[i]; e < offset_[i + 1]; ++e) {
        const node_id j = target_[e];
        auto first = target_.begin() + static_cast<std::ptrdiff_t>(offset_[j]);
        auto last = target_.begin() + static_cast<std::ptrdiff_t>(offset_[j + 1]);
        reverse_[e] = static_cast<std::size_t>(std::lower_bound(first, last, static_cast<node_id>(i)) - target_.begin());
      }
    q0_.assign(target_.size(), 1.0 / 3.0);
    qroot_.assign(target_.size(), 1.0 / 3.0);
  }

  std::size_t directed_edge_count() const noexcept { return target_.size(); }

  /// One sequential (ascending node id) update of every message i -> j with
  /// both endpoints active. Returns the largest change of any component
  /// before damping.
  double sweep(std::span<const std::uint8_t> active, double x, double damping) {
    double max_change = 0.0;
    const std::size_t n = offset_.size() - 1;
    for (std::size_t i = 0; i < n; ++i) {
      if (!active[i]) continue;
      gather(i, active);
      const std::size_t deg = in_s_.size();
      if (deg == 0) continue;
      // prefix_[k] = combined pair over in-messages [0, k)
      prefix_.assign(deg + 1, pair_weight{});
      suffix_.assign(deg + 1, pair_weight{});
      for (std::size_t k = 0; k < deg; ++k) prefix_[k + 1] = prefix_[k].extend(in_s_[k], in_t_[k]);
      for (std::size_t k = deg; k-- > 0;) suffix_[k] = suffix_[k + 1].extend(in_s_[k], in_t_[k]);
      for (std::size_t k = 0; k < deg; ++k) {
        const std::size_t e = out_edge_[k];
        const pair_weight w = pair_weight::combine(prefix_[k], suffix_[k + 1]);
        double new_q0 = 0.0;
        double new_root = 0.0;
        normalize(w, x, new_q0, new_root);
        max_change = std::max({max_change, std::abs(new_q0 - q0_[e]), std::abs(new_root - qroot_[e])});
        q0_[e] = clamp(damping * q0_[e] + (1.0 - damping) * new_q0);
        qroot_[e] = clamp(damping * qroot_[e] + (1.0 - damping) * new_root);
      }
    }
    return max_change;
  }

  /// Marginal probability that each active node is empty; 0 for inactive.
  std::vector<double> empty_marginals(std::span<const std::uint8_t> active, double x) {
    const std::size_t n = offset_.size() - 1;
    std::vector<double> out(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      if (!active[i]) continue;
      gather(i, active);
      pair_weight w;
      for (std::size_t k = 0; k < in_s_.size(); ++k) w = w.extend(in_s_[k], in_t_[k]);
      double q0 = 0.0;
      double root = 0.0;
      normalize(w, x, q0, root);
      out[i] = q0;
    }
    return out;
  }

  /// Runs sweeps until the change drops below tolerance or max_sweeps.
  /// Returns the number of sweeps performed.
  int converge(std::span<const std::uint8_t> active, const bp_params& p) {
    for (int s = 1; s <= p.max_sweeps; ++s)
      if (sweep(active, p.x, p.damping) < p.tolerance) return s;
    return p.max_sweeps;
  }

  /// Message i -> j as (q0, qroot); requires the directed edge to exist.
  std::pair<double, double> message(node_id i, node_id j) const {
    const std::size_t e = slot(i, j);
    return {q0_[e], qroot_[e]};
  }

 private:
  // (a, b) scaled by exp(log_scale): a = prod s, b = sum t prod_{others} s.
  struct pair_weight {
    double a = 1.0;
    double b = 0.0;
    double log_scale = 0.0;

    pair_weight extend(double s, double t) const {
      pair_weight r{a * s, a * t + b * s, log_scale};
      r.rescale();
      return r;
    }

    static pair_weight combine(const pair_weight& l, const pair_weight& r) {
      pair_weight out{l.a * r.a, l.a * r.b + l.b * r.a, l.log_scale + r.log_scale};
      out.rescale();
      return out;
    }

    void rescale() {
      const double m = std::max(a, b);
      if (m > 0.0 && m < 1e-150) {
        a /= m;
        b /= m;
        log_scale += std::log(m);
      }
    }
  };

  static double clamp(double v) { return std::clamp(v, eps, 1.0 - eps); }

  // Weights relative to an occupied node: empty carries exp(-x).
  static void normalize(const pair_weight& w, double x, double& q0, double& root) {
    const double la = w.a > 0.0 ? std::log(w.a) + w.log_scale : -std::numeric_limits<double>::infinity();
    const double lb = w.b > 0.0 ? std::log(w.b) + w.log_scale : -std::numeric_limits<double>::infinity();
    const double lc = -x;
    const double top = std::max({la, lb, lc});
    const double ea = std::exp(la - top);
    const double eb = std::exp(lb - top);
    const double ec = std::exp(lc - top);
    const double z = ea + eb + ec;
    q0 = ec / z;
    root = ea / z;
  }

  void gather(std::size_t i, std::span<const std::uint8_t> active) {
    in_s_.clear();
    in_t_.clear();
    out_edge_.clear();
    for (std::size_t e = offset_[i]; e < offset_[i + 1]; ++e) {
      if (!active[target_[e]]) continue;
      const std::size_t back = reverse_[e];
      in_s_.push_back(q0_[back] + qroot_[back]);
      in_t_.push_back(1.0 - q0_[back]);
      out_edge_.push_back(e);
    }
  }

  std::size_t slot(node_id i, node_id j) const {
    auto first = target_.begin() + static_cast<std::ptrdiff_t>(offset_[i]);
    auto last = target_.begin() + static_cast<std::ptrdiff_t>(offset_[i + 1]);
    auto it = std::lower_bound(first, last, j);
    if (it == last || *it != j)
      throw error(errc::no_such_edge, "(" + std::to_string(i) + "," + std::to_string(j) + ")");
    return static_cast<std::size_t>(it - target_.begin());
  }

  std::vector<std::size_t> offset_;
  std::vector<node_id> target_;
  std::vector<std::size_t> reverse_;
  std::vector<double> q0_;
  std::vector<double> qroot_;

  std::vector<double> in_s_;
  std::vector<double> in_t_;
  std::vector<std::size_t> out_edge_;
  std::vector<pair_weight> prefix_;
  std::vector<pair_weight> suffix_;
};

/// Node of the largest tree whose removal minimizes the largest remaining
/// piece; ties -> smallest id. Requires g to be a forest.
inline node_id forest_centroid(const graph& g) {
  detail::require_nonempty(g);
  const auto comps = components(g);
  const std::size_t n = g.node_count();
  std::vector<std::size_t> comp_size(comps.sizes.size(), 0);
  for (std::size_t i = 0; i < n; ++i)
    if (comps.component_of[i] >= 0) ++comp_size[comps.component_of[i]];

  std::vector<std::size_t> sub(n, 0);
  std::vector<node_id> parent(n, -1);
  std::vector<std::uint8_t> done(n, 0);
  std::vector<node_id> order;
  node_id best = -1;
  std::size_t best_piece = std::numeric_limits<std::size_t>::max();
  for (std::size_t r = 0; r < n; ++r) {
    const auto root = static_cast<node_id>(r);
    if (!g.alive(root) || done[r]) continue;
    const std::size_t size = comp_size[comps.component_of[r]];
    order.clear();
    order.push_back(root);
    done[r] = 1;
    for (std::size_t head = 0; head < order.size(); ++head)
      for (node_id v : g.neighbors(order[head]))
        if (!done[v]) {
          done[v] = 1;
          parent[v] = order[head];
          order.push_back(v);
        }
    if (size != comps.lcc) continue;
    for (std::size_t k = order.size(); k-- > 0;) {
      const node_id v = order[k];
      sub[v] += 1;
      if (parent[v] >= 0) sub[parent[v]] += sub[v];
    }
    for (node_id v : order) {
      std::size_t piece = size - sub[v];
      for (node_id w : g.neighbors(v))
        if (w != parent[v]) piece = std::max(piece, sub[w]);
      if (piece < best_piece || (piece == best_piece && v < best)) {
        best_piece = piece;
        best = v;
      }
    }
  }
  return best;
}

/// Stateful BP dismantler: messages survive between removals so each
/// recalculation starts from the previous fixed point.
class bp_attacker {
 public:
  bp_attacker(const graph& g, bp_params params) : params_(params), messages_(g) {
    params_.validate();
  }

  /// Next nodes to remove (one unless batching is enabled).
  std::vector<node_id> next(const graph& g) {
    detail::require_nonempty(g);
    if (g.edge_count() == 0) {
      core_nonempty_ = false;
      return {detail::smallest_alive(g)};
    }
    const auto core = two_core_mask(g);
    std::vector<node_id> members;
    for (std::size_t i = 0; i < core.size(); ++i)
      if (core[i]) members.push_back(static_cast<node_id>(i));
    if (members.empty()) {
      core_nonempty_ = false;
      if (!is_forest(g)) throw std::logic_error("empty 2-core on a graph with cycles");
      return {forest_centroid(g)};
    }
    core_nonempty_ = true;
    last_sweeps_ = messages_.converge(core, params_);
    const auto q0 = messages_.empty_marginals(core, params_.x);
    if (params_.batch == 0.0) {
      // Marginals are only resolved to the convergence tolerance; anything
      // that close to the maximum counts as tied.
      double best = 0.0;
      for (node_id v : members) best = std::max(best, q0[v]);
      for (node_id v : members)
        if (q0[v] >= best - params_.tolerance) return {v};
    }
    std::stable_sort(members.begin(), members.end(),
                     [&](node_id a, node_id b) { return q0[a] > q0[b]; });
    const auto take = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::ceil(params_.batch * static_cast<double>(members.size()))));
    members.resize(std::min(take, members.size()));
    return members;
  }

  /// Whether the last call to next() found a non-empty 2-core.
  bool core_nonempty() const noexcept { return core_nonempty_; }
  int last_sweeps() const noexcept { return last_sweeps_; }

 private:
  bp_params params_;
  bp_messages messages_;
  bool core_nonempty_ = false;
  int last_sweeps_ = 0;
};

inline node_id next_target_bp(const graph& g, const bp_params& params = {}) {
  bp_attacker attacker(g, params);
  return attacker.next(g).front();
}

// ---------------------------------------------------------------------------

/// Removes every node of a working copy of g in the order chosen by the
/// strategy, recomputing the target after each removal.
inline attack_trace run_attack(const graph& g, const attack_strategy& strategy) {
  detail::require_nonempty(g);
  graph work = g;
  attack_trace trace;
  trace.removal_order.reserve(g.alive_count());
  trace.lcc_curve.reserve(g.alive_count());

  auto remove = [&](node_id v) {
    work.remove_node(v);
    trace.removal_order.push_back(v);
    trace.lcc_curve.push_back(largest_component_size(work));
  };

  switch (strategy.kind) {
    case attack_kind::degree:
      while (work.alive_count() > 0) remove(next_target_degree(work));
      break;
    case attack_kind::betweenness: {
      betweenness_tracker tracker(work);
      std::vector<node_id> former;
      while (work.alive_count() > 0) {
        const node_id v = tracker.next(work);
        auto nb = work.neighbors(v);
        former.assign(nb.begin(), nb.end());
        remove(v);
        tracker.on_removed(work, v, former);
      }
      break;
    }
    case attack_kind::bp: {
      bp_attacker attacker(work, strategy.bp);
      while (work.alive_count() > 0) {
        const auto targets = attacker.next(work);
        for (node_id v : targets) {
          if (attacker.core_nonempty()) ++trace.decycling_removals;
          remove(v);
        }
      }
      break;
    }
  }
  return trace;
}

}  // namespace sfnet
