#pragma once

#include <cstddef>
#include <vector>

#include "sfnet/graph.hpp"

namespace sfnet {

/// Result of dismantling a graph one node at a time.
struct attack_trace {
  std::vector<node_id> removal_order;
  // lcc_curve[t - 1] = LCC size after t removals; same length as removal_order.
  std::vector<std::size_t> lcc_curve;
  // Removals made while the 2-core was non-empty (BP strategy only).
  std::size_t decycling_removals = 0;

  std::size_t size() const noexcept { return removal_order.size(); }
};

}  // namespace sfnet
