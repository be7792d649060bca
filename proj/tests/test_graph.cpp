#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "ising/graph.hpp"
#include "oracles.hpp"

using namespace ising;
namespace it = ising::testing;

TEST_CASE("build_graph basics") {
  auto g = it::k4();
  CHECK(g.n == 4);
  CHECK(g.max_degree() == 3);
  CHECK(g.has_edge(0, 3));
  CHECK_FALSE(g.has_edge(0, 0));

  std::vector<std::pair<int, int>> single{{0, 1}};
  auto k2 = build_graph(2, single);
  CHECK(k2.max_degree() == 1);

  auto isolated = build_graph(1, std::vector<std::pair<int, int>>{});
  CHECK(isolated.n == 1);
  CHECK(isolated.max_degree() == 0);
}

TEST_CASE("build_graph validation errors name the offending pair") {
  std::vector<std::pair<int, int>> loop{{1, 1}};
  CHECK_THROWS_WITH_AS(build_graph(3, loop), doctest::Contains("self-loop"), ValidationError);

  std::vector<std::pair<int, int>> dup{{0, 1}, {1, 0}};
  CHECK_THROWS_WITH_AS(build_graph(3, dup), doctest::Contains("(0,1)"), ValidationError);

  std::vector<std::pair<int, int>> oob{{0, 7}};
  CHECK_THROWS_WITH_AS(build_graph(3, oob), doctest::Contains("(0,7)"), ValidationError);
}

TEST_CASE("cayley trees") {
  auto t0 = cayley_tree(0, 2);
  CHECK(t0.n == 1);

  auto t1 = cayley_tree(1, 2);
  CHECK(t1.n == 3);
  CHECK(t1.degree(0) == 2);

  auto t2 = cayley_tree(2, 2);
  CHECK(t2.n == 7);
  CHECK(t2.degree(0) == 2);
  CHECK(t2.degree(1) == 3);

  CHECK_THROWS_AS(cayley_tree(-1, 2), ValidationError);
  CHECK_THROWS_AS(cayley_tree(2, 1), ValidationError);
}

TEST_CASE("cayley degree histogram matches the construction") {
  for (int d : {2, 3}) {
    for (int k = 1; k <= 4; ++k) {
      auto t = cayley_tree(k, d);
      CHECK(t.degree(0) == d);
      int leaves = 0, internal = 0;
      for (int v = 1; v < t.n; ++v) {
        if (t.degree(v) == 1) {
          ++leaves;
        } else {
          CHECK(t.degree(v) == d + 1);
          ++internal;
        }
      }
      CHECK(leaves + internal + 1 == t.n);
      // n(k) = 1 + d n(k-1)
      int expect = 1;
      for (int i = 0; i < k; ++i) expect = 1 + d * expect;
      CHECK(t.n == expect);
    }
  }
}

TEST_CASE("connected components partition the vertex set") {
  auto k3 = build_graph(3, std::vector<std::pair<int, int>>{{0, 1}, {1, 2}, {0, 2}});
  CHECK(connected_components(k3).size() == 1);

  auto two_edges = build_graph(4, std::vector<std::pair<int, int>>{{0, 2}, {1, 3}});
  auto comps = connected_components(two_edges);
  CHECK(comps.size() == 2);
  CHECK(comps[0].graph.n == 2);
  CHECK(comps[0].to_parent == std::vector<int>{0, 2});

  auto empty3 = build_graph(3, std::vector<std::pair<int, int>>{});
  CHECK(connected_components(empty3).size() == 3);

  it::Rng rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    int n = it::uniform_int(rng, 1, 12);
    std::vector<std::pair<int, int>> edges;
    for (int u = 0; u < n; ++u) {
      for (int v = u + 1; v < n; ++v) {
        if (it::uniform(rng, 0, 1) < 0.15) edges.emplace_back(u, v);
      }
    }
    auto g = build_graph(n, edges);
    std::vector<char> hit(n, 0);
    for (const auto& c : connected_components(g)) {
      for (int orig : c.to_parent) {
        CHECK_FALSE(hit[orig]);
        hit[orig] = 1;
      }
    }
    CHECK(std::count(hit.begin(), hit.end(), 1) == n);
  }
}

TEST_CASE("canonical edge ordering is lexicographic and deterministic") {
  auto k3 = build_graph(3, std::vector<std::pair<int, int>>{{0, 1}, {1, 2}, {0, 2}});
  auto ord = canonical_edge_ordering(k3);
  CHECK(ord.rank(0, 1) < ord.rank(0, 2));

  auto star = build_graph(4, std::vector<std::pair<int, int>>{{0, 1}, {0, 2}, {0, 3}});
  auto sord = canonical_edge_ordering(star);
  CHECK(sord.rank(0, 1) == 0);
  CHECK(sord.rank(0, 2) == 1);
  CHECK(sord.rank(0, 3) == 2);

  auto path = it::path_graph(3);
  auto pord = canonical_edge_ordering(path);
  CHECK(pord.rank(1, 0) < pord.rank(1, 2));

  auto again = canonical_edge_ordering(k3);
  CHECK(again.order == ord.order);
  CHECK_THROWS_AS(ord.rank(0, 0), ValidationError);
}

TEST_CASE("boundary conditions and the multiset convention") {
  BoundaryCondition tau;
  tau.fix(2, 1);
  CHECK(tau.at(2) == 1);
  CHECK_FALSE(tau.at(0).has_value());
  CHECK_FALSE(tau.infeasible());

  auto same = tau.with(2, 1);
  CHECK_FALSE(same.infeasible());
  auto conflict = tau.with(2, 0);
  CHECK(conflict.infeasible());
  CHECK_THROWS_AS(tau.fix(1, 7), ValidationError);
}

TEST_CASE("graph file loaders") {
  const char* jpath = "loader_test.json";
  {
    std::ofstream out(jpath);
    out << R"({"n": 3, "edges": [[0,1],[1,2]]})";
  }
  auto g = load_graph_json(jpath);
  CHECK(g.n == 3);
  CHECK(g.edges.size() == 2);
  CHECK(graph_to_json(g) == R"({"edges":[[0,1],[1,2]],"n":3})");

  const char* tpath = "loader_test.txt";
  {
    std::ofstream out(tpath);
    out << "# comment line\n3\n0 1\n\n1 2   # trailing comment\n";
  }
  auto h = load_graph_edgelist(tpath);
  CHECK(h.edges == g.edges);
  CHECK(load_graph_file(tpath).n == 3);

  {
    std::ofstream out(tpath);
    out << "3\n0 1\n1 2 9\n";
  }
  CHECK_THROWS_WITH_AS(load_graph_edgelist(tpath), doctest::Contains("line 3"), IoError);

  {
    std::ofstream out(tpath);
    out << "2\n0 5\n";
  }
  CHECK_THROWS_AS(load_graph_edgelist(tpath), IoError);

  {
    std::ofstream out(jpath);
    out << R"({"n": 2})";
  }
  CHECK_THROWS_AS(load_graph_json(jpath), IoError);

  std::remove(jpath);
  std::remove(tpath);
  CHECK_THROWS_AS(load_graph_json("no_such_file.json"), IoError);
}
