#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ising/graph.hpp"
#include "ising/partition.hpp"

namespace ising {

inline constexpr std::int64_t kDefaultSawNodeCap = 1'000'000;

// Tree of self-avoiding walks from a base vertex. Node 0 is the root walk
// (v); every child walk extends its parent by one vertex. A walk whose last
// vertex closes a cycle becomes a leaf fixed by the edge-order rule: 0 when
// the closing edge ranks above the edge that started the cycle at the
// repeated vertex, 1 otherwise. Walks ending in a fixed leaf of G inherit
// that leaf's value.
struct SawTree {
  Graph tree;
  int root = 0;
  std::vector<int> parent;            // -1 at root
  std::vector<int> g_vertex;          // last vertex of each node's walk in G
  std::vector<signed char> fix;       // tau_G: -1 free, 0, 1

  std::vector<int> walk_of(int node) const;
  std::string dump_json() const;      // walks plus boundary assignments
};

SawTree build_saw_tree(const Graph& g, int base, const EdgeOrdering& ord,
                       const BoundaryCondition& sigma,
                       std::int64_t node_cap = kDefaultSawNodeCap);

// R_{G,sigma,v} computed through the SAW tree: builds T_SAW(G, v) with the
// canonical edge ordering and evaluates the tree recursion with each node
// carrying the field of its walk's last G-vertex.
SpherePoint ratio_via_saw(const Graph& g, int v, const ModelParams& p,
                          const BoundaryCondition& sigma,
                          std::int64_t node_cap = kDefaultSawNodeCap);

// Per-node fields for the tree recursion on a SawTree.
std::vector<Complex> saw_fields(const SawTree& t, const ModelParams& p);

}  // namespace ising
