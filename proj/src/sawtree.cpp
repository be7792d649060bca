#include "ising/sawtree.hpp"

#include <algorithm>

#include <json.hpp>

namespace ising {

std::vector<int> SawTree::walk_of(int node) const {
  std::vector<int> walk;
  for (int w = node; w >= 0; w = parent[w]) walk.push_back(g_vertex[w]);
  std::reverse(walk.begin(), walk.end());
  return walk;
}

std::string SawTree::dump_json() const {
  nlohmann::json j;
  j["root"] = root;
  auto nodes = nlohmann::json::array();
  for (int w = 0; w < tree.n; ++w) {
    nlohmann::json entry;
    entry["id"] = w;
    entry["walk"] = walk_of(w);
    if (fix[w] < 0) {
      entry["fix"] = nullptr;
    } else {
      entry["fix"] = static_cast<int>(fix[w]);
    }
    nodes.push_back(entry);
  }
  j["nodes"] = nodes;
  return j.dump();
}

SawTree build_saw_tree(const Graph& g, int base, const EdgeOrdering& ord,
                       const BoundaryCondition& sigma, std::int64_t node_cap) {
  if (base < 0 || base >= g.n) throw ValidationError("build_saw_tree: base vertex out of range");
  if (sigma.infeasible()) throw ValidationError("build_saw_tree: infeasible boundary condition");
  for (auto [u, spin] : sigma.assignments()) {
    (void)spin;
    if (u < 0 || u >= g.n) throw ValidationError("build_saw_tree: sigma vertex out of range");
    if (g.degree(u) != 1) {
      throw ValidationError("build_saw_tree: sigma fixes non-leaf vertex " + std::to_string(u));
    }
    if (u == base) {
      throw ValidationError("build_saw_tree: sigma must not fix the base vertex");
    }
  }
  {
    std::vector<char> seen(g.n, 0);
    std::vector<int> queue{base};
    seen[base] = 1;
    for (std::size_t i = 0; i < queue.size(); ++i) {
      for (int w : g.adj[queue[i]]) {
        if (!seen[w]) {
          seen[w] = 1;
          queue.push_back(w);
        }
      }
    }
    if (static_cast<int>(queue.size()) != g.n) {
      throw ValidationError("build_saw_tree: graph is not connected");
    }
  }

  SawTree out;
  out.root = 0;
  out.parent.push_back(-1);
  out.g_vertex.push_back(base);
  out.fix.push_back(-1);
  std::vector<std::pair<int, int>> tree_edges;

  // Walk-local DFS state: the current root-to-node walk in G and, for each
  // on-path G-vertex, its position so the edge that started a cycle can be
  // recovered.
  std::vector<int> path{base};
  std::vector<int> pos_in_path(g.n, -1);
  pos_in_path[base] = 0;

  struct DfsFrame {
    int node;          // tree id
    std::size_t next;  // cursor into ord.order[g_vertex]
  };
  std::vector<DfsFrame> stack{{0, 0}};

  auto add_node = [&](int parent_node, int gv, signed char fx) -> int {
    int id = static_cast<int>(out.parent.size());
    if (id >= node_cap) {
      throw ResourceError("build_saw_tree: node cap of " + std::to_string(node_cap) + " exceeded");
    }
    out.parent.push_back(parent_node);
    out.g_vertex.push_back(gv);
    out.fix.push_back(fx);
    tree_edges.emplace_back(parent_node, id);
    return id;
  };

  while (!stack.empty()) {
    DfsFrame& top = stack.back();
    int u = out.g_vertex[top.node];
    int prev = out.parent[top.node] < 0 ? -1 : out.g_vertex[out.parent[top.node]];
    const auto& neighbors = ord.order[u];
    if (top.next >= neighbors.size()) {
      pos_in_path[u] = -1;
      path.pop_back();
      stack.pop_back();
      continue;
    }
    int x = neighbors[top.next++];
    if (x == prev) continue;  // the same edge back is not a cycle
    if (pos_in_path[x] >= 0) {
      // Cycle-closing leaf: compare the closing edge {x,u} with the edge that
      // started the cycle at x, {x, successor-of-x-on-the-walk}.
      int successor = path[pos_in_path[x] + 1];
      signed char fx = ord.rank(x, u) > ord.rank(x, successor) ? 0 : 1;
      add_node(top.node, x, fx);
      continue;
    }
    signed char fx = -1;
    if (auto s = sigma.at(x)) fx = static_cast<signed char>(*s);
    int child = add_node(top.node, x, fx);
    if (fx < 0 && g.degree(x) > 1) {
      pos_in_path[x] = static_cast<int>(path.size());
      path.push_back(x);
      stack.push_back({child, 0});
    }
    // sigma-fixed leaves and G-leaves terminate their walk
  }

  out.tree = build_graph(static_cast<int>(out.parent.size()), tree_edges);
  return out;
}

std::vector<Complex> saw_fields(const SawTree& t, const ModelParams& p) {
  std::vector<Complex> fields(t.tree.n);
  for (int w = 0; w < t.tree.n; ++w) fields[w] = p.field_of(t.g_vertex[w]);
  return fields;
}

SpherePoint ratio_via_saw(const Graph& g, int v, const ModelParams& p,
                          const BoundaryCondition& sigma, std::int64_t node_cap) {
  SawTree t = build_saw_tree(g, v, canonical_edge_ordering(g), sigma, node_cap);
  auto fields = saw_fields(t, p);
  return tree_ratio_recursion(t.tree, t.root, t.fix, fields, p.b);
}

}  // namespace ising
