#include "ising/graph.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace ising {

int Graph::max_degree() const {
  int m = 0;
  for (const auto& nb : adj) m = std::max<int>(m, static_cast<int>(nb.size()));
  return m;
}

bool Graph::has_edge(int u, int v) const {
  if (u < 0 || u >= n || v < 0 || v >= n) return false;
  const auto& nb = adj[u];
  return std::binary_search(nb.begin(), nb.end(), v);
}

Graph build_graph(int vertex_count, std::span<const std::pair<int, int>> edge_list) {
  if (vertex_count < 0) throw ValidationError("build_graph: negative vertex count");
  Graph g;
  g.n = vertex_count;
  g.adj.assign(vertex_count, {});
  std::set<std::pair<int, int>> seen;
  for (auto [u, v] : edge_list) {
    if (u < 0 || u >= vertex_count || v < 0 || v >= vertex_count) {
      throw ValidationError("build_graph: endpoint out of range in edge (" + std::to_string(u) +
                            "," + std::to_string(v) + ")");
    }
    if (u == v) {
      throw ValidationError("build_graph: self-loop at vertex " + std::to_string(u));
    }
    auto e = std::minmax(u, v);
    if (!seen.insert({e.first, e.second}).second) {
      throw ValidationError("build_graph: duplicate edge (" + std::to_string(e.first) + "," +
                            std::to_string(e.second) + ")");
    }
  }
  g.edges.assign(seen.begin(), seen.end());
  for (auto [u, v] : g.edges) {
    g.adj[u].push_back(v);
    g.adj[v].push_back(u);
  }
  for (auto& nb : g.adj) std::sort(nb.begin(), nb.end());
  return g;
}

Graph cayley_tree(int levels, int branching) {
  if (levels < 0) throw ValidationError("cayley_tree: levels must be >= 0");
  if (branching < 2) throw ValidationError("cayley_tree: branching must be >= 2");
  std::vector<std::pair<int, int>> edges;
  std::vector<int> frontier{0};
  int next_id = 1;
  for (int level = 1; level <= levels; ++level) {
    std::vector<int> next_frontier;
    next_frontier.reserve(frontier.size() * branching);
    for (int p : frontier) {
      for (int c = 0; c < branching; ++c) {
        edges.emplace_back(p, next_id);
        next_frontier.push_back(next_id);
        ++next_id;
      }
    }
    frontier = std::move(next_frontier);
  }
  return build_graph(next_id, edges);
}

std::vector<ComponentSplit> connected_components(const Graph& g) {
  std::vector<ComponentSplit> out;
  std::vector<char> seen(g.n, 0);
  for (int s = 0; s < g.n; ++s) {
    if (seen[s]) continue;
    std::vector<int> members{s};
    seen[s] = 1;
    for (std::size_t i = 0; i < members.size(); ++i) {
      for (int w : g.adj[members[i]]) {
        if (!seen[w]) {
          seen[w] = 1;
          members.push_back(w);
        }
      }
    }
    std::sort(members.begin(), members.end());
    std::vector<int> local(g.n, -1);
    for (std::size_t i = 0; i < members.size(); ++i) local[members[i]] = static_cast<int>(i);
    std::vector<std::pair<int, int>> edges;
    for (auto [u, v] : g.edges) {
      if (local[u] >= 0 && local[v] >= 0) edges.emplace_back(local[u], local[v]);
    }
    out.push_back({build_graph(static_cast<int>(members.size()), edges), members});
  }
  return out;
}

int EdgeOrdering::rank(int v, int w) const {
  const auto& nb = order.at(v);
  auto it = std::find(nb.begin(), nb.end(), w);
  if (it == nb.end()) {
    throw ValidationError("EdgeOrdering: no edge (" + std::to_string(v) + "," +
                          std::to_string(w) + ")");
  }
  return static_cast<int>(it - nb.begin());
}

EdgeOrdering canonical_edge_ordering(const Graph& g) {
  EdgeOrdering ord;
  ord.order = g.adj;  // adjacency lists are already sorted ascending
  return ord;
}

void BoundaryCondition::fix(int v, int spin) {
  if (spin != 0 && spin != 1) throw ValidationError("BoundaryCondition: spin must be 0 or 1");
  auto [it, inserted] = fixed_.emplace(v, spin);
  if (!inserted && it->second != spin) infeasible_ = true;
}

BoundaryCondition BoundaryCondition::with(int v, int spin) const {
  BoundaryCondition out = *this;
  out.fix(v, spin);
  return out;
}

std::optional<int> BoundaryCondition::at(int v) const {
  auto it = fixed_.find(v);
  if (it == fixed_.end()) return std::nullopt;
  return it->second;
}

Graph load_graph_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw IoError(path + ": " + e.what());
  }
  if (!j.is_object() || !j.contains("n") || !j.contains("edges")) {
    throw IoError(path + ": expected object with keys \"n\" and \"edges\"");
  }
  if (!j["n"].is_number_integer()) throw IoError(path + ": \"n\" must be an integer");
  if (!j["edges"].is_array()) throw IoError(path + ": \"edges\" must be an array");
  std::vector<std::pair<int, int>> edges;
  for (const auto& e : j["edges"]) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer()) {
      throw IoError(path + ": each edge must be a pair of integers");
    }
    edges.emplace_back(e[0].get<int>(), e[1].get<int>());
  }
  try {
    return build_graph(j["n"].get<int>(), edges);
  } catch (const ValidationError& e) {
    throw IoError(path + ": " + e.what());
  }
}

Graph load_graph_edgelist(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::string line;
  int lineno = 0;
  std::optional<int> n;
  std::vector<std::pair<int, int>> edges;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    if (!n) {
      int v;
      if (ss >> v) {
        std::string rest;
        if (ss >> rest) {
          throw IoError(path + ": line " + std::to_string(lineno) +
                        ": expected a single vertex count");
        }
        n = v;
      } else if (!ss.eof()) {
        throw IoError(path + ": line " + std::to_string(lineno) + ": expected vertex count");
      }
      continue;
    }
    int u, v;
    if (ss >> u) {
      if (!(ss >> v)) {
        throw IoError(path + ": line " + std::to_string(lineno) + ": expected \"u v\" pair");
      }
      std::string rest;
      if (ss >> rest) {
        throw IoError(path + ": line " + std::to_string(lineno) + ": trailing tokens after pair");
      }
      edges.emplace_back(u, v);
    } else if (!ss.eof()) {
      throw IoError(path + ": line " + std::to_string(lineno) + ": expected \"u v\" pair");
    }
  }
  if (!n) throw IoError(path + ": missing vertex count line");
  try {
    return build_graph(*n, edges);
  } catch (const ValidationError& e) {
    throw IoError(path + ": " + e.what());
  }
}

Graph load_graph_file(const std::string& path) {
  auto dot = path.rfind('.');
  std::string ext = dot == std::string::npos ? "" : path.substr(dot);
  if (ext == ".json") return load_graph_json(path);
  return load_graph_edgelist(path);
}

std::string graph_to_json(const Graph& g) {
  nlohmann::json j;
  j["n"] = g.n;
  auto arr = nlohmann::json::array();
  for (auto [u, v] : g.edges) arr.push_back({u, v});
  j["edges"] = arr;
  return j.dump();
}

}  // namespace ising
