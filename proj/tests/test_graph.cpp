#include <gtest/gtest.h>

#include <algorithm>
#include <sstream>

#include "sfnet/graph.hpp"
#include "sfnet/rng.hpp"
#include "support.hpp"

using namespace sfnet;
using sfnet::testkit::code_of;

namespace {

graph cycle(std::size_t n) {
  graph g(n);
  for (std::size_t i = 0; i < n; ++i)
    g.add_edge(static_cast<node_id>(i), static_cast<node_id>((i + 1) % n));
  return g;
}

graph complete(std::size_t n) {
  graph g(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) g.add_edge(static_cast<node_id>(i), static_cast<node_id>(j));
  return g;
}

graph path(std::size_t n) {
  graph g(n);
  for (std::size_t i = 0; i + 1 < n; ++i) g.add_edge(static_cast<node_id>(i), static_cast<node_id>(i + 1));
  return g;
}

void expect_consistent(const graph& g) {
  std::size_t degree_sum = 0;
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    const auto u = static_cast<node_id>(i);
    if (!g.alive(u)) {
      EXPECT_EQ(g.degree(u), 0u);
      continue;
    }
    degree_sum += g.degree(u);
    auto nb = g.neighbors(u);
    EXPECT_TRUE(std::is_sorted(nb.begin(), nb.end()));
    EXPECT_TRUE(std::adjacent_find(nb.begin(), nb.end()) == nb.end());
    for (node_id v : nb) {
      EXPECT_NE(u, v);
      EXPECT_TRUE(g.alive(v));
      EXPECT_TRUE(g.has_edge(v, u));
    }
  }
  EXPECT_EQ(degree_sum, 2 * g.edge_count());
}

}  // namespace

TEST(Graph, AddEdgeUpdatesBothSides) {
  graph g(2);
  g.add_edge(0, 1);
  EXPECT_EQ(g.degree(0), 1u);
  EXPECT_EQ(g.degree(1), 1u);
  EXPECT_EQ(g.edge_count(), 1u);
  EXPECT_TRUE(g.has_edge(1, 0));
}

TEST(Graph, AddEdgeRejections) {
  graph g(3);
  EXPECT_EQ(code_of([&] { g.add_edge(0, 0); }), errc::self_loop);
  g.add_edge(0, 1);
  EXPECT_EQ(code_of([&] { g.add_edge(0, 1); }), errc::duplicate_edge);
  EXPECT_EQ(code_of([&] { g.add_edge(1, 0); }), errc::duplicate_edge);
  g.remove_node(2);
  EXPECT_EQ(code_of([&] { g.add_edge(0, 2); }), errc::dead_endpoint);
  EXPECT_EQ(code_of([&] { g.add_edge(0, 7); }), errc::invalid_node);
  // rejected mutations leave the graph untouched
  EXPECT_EQ(g.edge_count(), 1u);
  EXPECT_EQ(g.degree(0), 1u);
}

TEST(Graph, RemoveNodeFromTriangle) {
  graph g = complete(3);
  g.remove_node(0);
  EXPECT_EQ(g.edges(), (std::vector<edge_t>{{1, 2}}));
  EXPECT_EQ(g.alive_count(), 2u);
  expect_consistent(g);
}

TEST(Graph, RemoveStarHub) {
  graph g = make_graph(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}});
  g.remove_node(0);
  EXPECT_EQ(g.edge_count(), 0u);
  for (node_id v = 1; v < 5; ++v) EXPECT_EQ(g.degree(v), 0u);
  EXPECT_EQ(largest_component_size(g), 1u);
}

TEST(Graph, RemoveTwiceIsAlreadyDead) {
  graph g = complete(3);
  g.remove_node(1);
  EXPECT_EQ(code_of([&] { g.remove_node(1); }), errc::already_dead);
}

TEST(Graph, ErrorMessageCarriesCodeName) {
  graph g(2);
  try {
    g.add_edge(1, 1);
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(std::string(e.what()).rfind("SelfLoop", 0), 0u);
  }
}

TEST(Components, TwoTriangles) {
  auto g = make_graph(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}});
  auto r = components(g);
  EXPECT_EQ(r.sizes, (std::vector<std::size_t>{3, 3}));
  EXPECT_EQ(r.lcc, 3u);
  EXPECT_EQ(r.component_of[0], r.component_of[2]);
  EXPECT_NE(r.component_of[0], r.component_of[3]);
}

TEST(Components, PathAndEmpty) {
  EXPECT_EQ(largest_component_size(path(5)), 5u);
  graph g = path(3);
  for (node_id v = 0; v < 3; ++v) g.remove_node(v);
  auto r = components(g);
  EXPECT_EQ(r.lcc, 0u);
  EXPECT_TRUE(r.sizes.empty());
  EXPECT_EQ(r.component_of[1], -1);
}

TEST(TwoCore, Examples) {
  EXPECT_TRUE(two_core(path(6)).empty());
  graph c5p = make_graph(6, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {0, 4}, {4, 5}});
  EXPECT_EQ(two_core(c5p), (std::vector<node_id>{0, 1, 2, 3, 4}));
  EXPECT_EQ(two_core(complete(4)), (std::vector<node_id>{0, 1, 2, 3}));
}

TEST(TwoCore, FixpointAndForestEquivalence) {
  rng gen(11);
  for (int trial = 0; trial < 300; ++trial) {
    graph g = testkit::random_gnp(3 + gen.below(10), 0.1 + 0.3 * gen.uniform01(), gen);
    const auto mask = two_core_mask(g);
    for (std::size_t i = 0; i < g.node_count(); ++i) {
      std::size_t inside = 0;
      for (node_id v : g.neighbors(static_cast<node_id>(i))) inside += mask[v];
      if (mask[i])
        EXPECT_GE(inside, 2u);
      else
        EXPECT_LT(inside, 2u);  // could not be added back
    }
    EXPECT_EQ(two_core(g).empty(), is_forest(g));
  }
}

TEST(ShortestPathExcludingEdge, Examples) {
  EXPECT_EQ(shortest_path_len_excluding_edge(cycle(4), 0, 1), 3u);
  EXPECT_EQ(shortest_path_len_excluding_edge(complete(4), 2, 3), 2u);
  EXPECT_FALSE(shortest_path_len_excluding_edge(path(3), 0, 1).has_value());
}

TEST(ShortestPathExcludingEdge, MissingEdge) {
  graph g = path(3);
  EXPECT_EQ(code_of([&] { (void)shortest_path_len_excluding_edge(g, 0, 2); }), errc::no_such_edge);
}

TEST(ShortestPathExcludingEdge, AtLeastTwoAndGraphUnchanged) {
  rng gen(5);
  for (int trial = 0; trial < 100; ++trial) {
    graph g = testkit::random_gnp(8, 0.45, gen);
    const graph before = g;
    for (auto [u, v] : g.edges()) {
      auto d = shortest_path_len_excluding_edge(g, u, v);
      if (d) EXPECT_GE(*d, 2u);
      EXPECT_EQ(d, shortest_path_len_excluding_edge(g, v, u));
    }
    EXPECT_EQ(g, before);
  }
}

TEST(Graph, InvariantsUnderRandomMutation) {
  rng gen(99);
  for (int trial = 0; trial < 50; ++trial) {
    graph g = testkit::random_gnp(15, 0.3, gen);
    std::size_t lcc = largest_component_size(g);
    expect_consistent(g);
    auto order = g.alive_nodes();
    gen.shuffle(std::span<node_id>(order));
    for (node_id v : order) {
      const std::size_t edges_before = g.edge_count();
      const std::size_t deg = g.degree(v);
      g.remove_node(v);
      EXPECT_EQ(g.edge_count(), edges_before - deg);
      expect_consistent(g);
      const std::size_t now = largest_component_size(g);
      EXPECT_LE(now, lcc);
      lcc = now;
    }
    EXPECT_EQ(lcc, 0u);
  }
}

TEST(EdgeList, RoundTripIsByteIdentical) {
  rng gen(3);
  for (int trial = 0; trial < 20; ++trial) {
    graph g = testkit::random_gnp(12, 0.3, gen);
    const std::string text = to_edge_list(g);
    graph back = parse_edge_list(text);
    EXPECT_EQ(back, g);
    EXPECT_EQ(to_edge_list(back), text);
  }
}

TEST(EdgeList, Format) {
  graph g = make_graph(4, {{2, 1}, {0, 3}, {0, 1}});
  EXPECT_EQ(to_edge_list(g), "# nodes=4 edges=3\n0 1\n0 3\n1 2\n");
}

TEST(EdgeList, ParseErrors) {
  EXPECT_EQ(code_of([] { (void)parse_edge_list("nodes=3\n0 1\n"); }), errc::parse_error);
  EXPECT_EQ(code_of([] { (void)parse_edge_list("# nodes=3 edges=2\n0 1\n"); }), errc::parse_error);
  EXPECT_EQ(code_of([] { (void)parse_edge_list("# nodes=3 edges=1\n0 x\n"); }), errc::parse_error);
  EXPECT_ANY_THROW((void)parse_edge_list("# nodes=3 edges=1\n0 5\n"));
}
