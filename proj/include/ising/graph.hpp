#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ising/errors.hpp"

namespace ising {

// Undirected simple graph on dense vertex ids 0..n-1. Immutable once built;
// safe for concurrent reads.
struct Graph {
  int n = 0;
  std::vector<std::pair<int, int>> edges;  // normalized u < v, sorted
  std::vector<std::vector<int>> adj;       // sorted neighbor lists

  int degree(int v) const { return static_cast<int>(adj.at(v).size()); }
  int max_degree() const;
  bool has_edge(int u, int v) const;
};

Graph build_graph(int vertex_count, std::span<const std::pair<int, int>> edge_list);

// Rooted Cayley tree T_{k,d}: vertex 0 is the root (degree d for k >= 1),
// internal vertices have degree d+1, vertex count n(k) = 1 + d*n(k-1).
Graph cayley_tree(int levels, int branching);

struct ComponentSplit {
  Graph graph;
  std::vector<int> to_parent;  // local id -> id in the parent graph
};
std::vector<ComponentSplit> connected_components(const Graph& g);

// Per-vertex total order over incident edges. The canonical order ranks the
// edge {v,w} at v by (min(v,w), max(v,w)) lexicographically, which at a fixed
// vertex is simply ascending neighbor id.
struct EdgeOrdering {
  std::vector<std::vector<int>> order;  // order[v] = neighbors of v in rank order

  int rank(int v, int w) const;
};
EdgeOrdering canonical_edge_ordering(const Graph& g);

// Partial assignment of spins {0,1}. Fixing an already-fixed vertex to a
// conflicting value marks the condition infeasible (the multiset convention:
// the constrained partition function is then 0).
class BoundaryCondition {
 public:
  BoundaryCondition() = default;

  void fix(int v, int spin);
  BoundaryCondition with(int v, int spin) const;

  std::optional<int> at(int v) const;
  bool infeasible() const { return infeasible_; }
  const std::map<int, int>& assignments() const { return fixed_; }
  bool empty() const { return fixed_.empty(); }

 private:
  std::map<int, int> fixed_;
  bool infeasible_ = false;
};

// Loaders. JSON format: {"n": int, "edges": [[u,v], ...]}.
// Edge-list text: first data line "n", then one "u v" per line; anything from
// '#' to end of line is a comment. Both reject malformed input with
// line-numbered errors.
Graph load_graph_json(const std::string& path);
Graph load_graph_edgelist(const std::string& path);
Graph load_graph_file(const std::string& path);  // dispatch on extension
std::string graph_to_json(const Graph& g);

}  // namespace ising
