#include "ising/partition.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include <json.hpp>

#include "ising/util.hpp"

namespace ising {

PhysicalMap physical_to_model(const PhysicalParams& p) {
  if (!(p.temperature > 0.0)) throw DomainError("physical_to_model: temperature must be > 0");
  PhysicalMap out;
  out.xi = Complex{std::exp(-2.0 * p.field / p.temperature), 0.0};
  out.b = std::exp(-2.0 * p.coupling / p.temperature);
  out.log_prefactor_per_edge = p.coupling / p.temperature;
  out.log_prefactor_per_vertex = p.field / p.temperature;
  return out;
}

Complex XiPolynomial::eval(Complex xi) const {
  Complex acc{0.0, 0.0};
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * xi + *it;
  return acc;
}

std::string XiPolynomial::to_json() const {
  nlohmann::json j;
  j["b"] = b;
  j["coeffs"] = coeffs;
  return j.dump();
}

XiPolynomial XiPolynomial::from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  XiPolynomial p;
  p.b = j.at("b").get<double>();
  p.coeffs = j.at("coeffs").get<std::vector<double>>();
  if (p.coeffs.empty()) throw ValidationError("XiPolynomial: empty coefficient list");
  return p;
}

namespace {

enum : signed char { kFree = -1, kOut = 0, kIn = 1 };

struct EnumSetup {
  std::vector<signed char> state;   // kFree / kOut / kIn per vertex
  std::vector<int> free_vertices;
  Complex prefactor{1.0, 0.0};      // product of fields over fixed-in vertices
  int base_cut = 0;
};

EnumSetup prepare(const Graph& g, const ModelParams& p, const BoundaryCondition& tau, int cap,
                  const char* who) {
  EnumSetup s;
  s.state.assign(g.n, kFree);
  for (auto [v, spin] : tau.assignments()) {
    if (v < 0 || v >= g.n) throw ValidationError(std::string(who) + ": boundary vertex out of range");
    s.state[v] = spin == 1 ? kIn : kOut;
  }
  for (int v = 0; v < g.n; ++v) {
    if (s.state[v] == kFree) s.free_vertices.push_back(v);
    if (s.state[v] == kIn) s.prefactor *= p.field_of(v);
  }
  if (static_cast<int>(s.free_vertices.size()) > cap) {
    throw ResourceError(std::string(who) + ": " + std::to_string(s.free_vertices.size()) +
                        " free vertices exceed the enumeration cap of " + std::to_string(cap));
  }
  for (auto [u, v] : g.edges) {
    if ((s.state[u] == kIn) != (s.state[v] == kIn)) ++s.base_cut;
  }
  return s;
}

std::vector<double> b_powers(double b, int max_cut) {
  std::vector<double> pw(max_cut + 1);
  pw[0] = 1.0;
  for (int i = 1; i <= max_cut; ++i) pw[i] = pw[i - 1] * b;
  return pw;
}

}  // namespace

ZEval z_exact_scaled(const Graph& g, const ModelParams& p, const BoundaryCondition& tau, int cap) {
  if (tau.infeasible()) return {};
  EnumSetup s = prepare(g, p, tau, cap, "z_exact");
  const int m = static_cast<int>(s.free_vertices.size());
  const auto bpow = b_powers(p.b, static_cast<int>(g.edges.size()));

  std::vector<Complex> freefield(m);
  bool uniform = true;
  for (int i = 0; i < m; ++i) {
    freefield[i] = p.field_of(s.free_vertices[i]);
    if (freefield[i] != freefield[0]) uniform = false;
  }
  std::vector<Complex> xipow;
  if (uniform) {
    xipow.assign(m + 1, Complex{1.0, 0.0});
    for (int i = 1; i <= m; ++i) xipow[i] = xipow[i - 1] * (m > 0 ? freefield[0] : Complex{1.0, 0.0});
  }

  std::vector<char> in(g.n, 0);
  for (int v = 0; v < g.n; ++v) in[v] = s.state[v] == kIn;

  int cut = s.base_cut;
  int size = 0;
  int zero_fields_in = 0;       // free zero-field vertices currently included
  Complex running{1.0, 0.0};    // product of nonzero free fields currently included
  Complex sum{0.0, 0.0};
  double scale = 0.0;

  auto accumulate = [&] {
    Complex field_part;
    if (uniform) {
      field_part = xipow[size];
    } else {
      field_part = zero_fields_in > 0 ? Complex{0.0, 0.0} : running;
    }
    Complex term = s.prefactor * field_part * bpow[cut];
    sum += term;
    scale += std::abs(term);
  };

  accumulate();  // empty free subset
  const std::uint64_t total = std::uint64_t{1} << m;
  for (std::uint64_t step = 1; step < total; ++step) {
    int bit = std::countr_zero(step);
    int v = s.free_vertices[bit];
    int delta = 0;
    for (int w : g.adj[v]) delta += in[w] ? -1 : 1;
    if (in[v]) {
      cut -= delta;
      in[v] = 0;
      --size;
      if (!uniform) {
        if (freefield[bit] == Complex{0.0, 0.0}) {
          --zero_fields_in;
        } else {
          running /= freefield[bit];
        }
      }
    } else {
      cut += delta;
      in[v] = 1;
      ++size;
      if (!uniform) {
        if (freefield[bit] == Complex{0.0, 0.0}) {
          ++zero_fields_in;
        } else {
          running *= freefield[bit];
        }
      }
    }
    accumulate();
  }
  return {sum, scale};
}

Complex z_exact(const Graph& g, const ModelParams& p, const BoundaryCondition& tau, int cap) {
  return z_exact_scaled(g, p, tau, cap).value;
}

XiPolynomial xi_polynomial(const Graph& g, double b, int cap) {
  if (g.n > cap) {
    throw ResourceError("xi_polynomial: " + std::to_string(g.n) +
                        " vertices exceed the enumeration cap of " + std::to_string(cap));
  }
  const auto bpow = b_powers(b, static_cast<int>(g.edges.size()));
  XiPolynomial out;
  out.b = b;
  out.coeffs.assign(g.n + 1, 0.0);

  std::vector<char> in(g.n, 0);
  int cut = 0;
  int size = 0;
  out.coeffs[0] += 1.0;
  const std::uint64_t total = std::uint64_t{1} << g.n;
  for (std::uint64_t step = 1; step < total; ++step) {
    int v = std::countr_zero(step);
    int delta = 0;
    for (int w : g.adj[v]) delta += in[w] ? -1 : 1;
    if (in[v]) {
      cut -= delta;
      in[v] = 0;
      --size;
    } else {
      cut += delta;
      in[v] = 1;
      ++size;
    }
    out.coeffs[size] += bpow[cut];
  }
  return out;
}

namespace {

using Poly = std::vector<double>;  // coefficients, low degree first

Poly poly_mul(const Poly& a, const Poly& b) {
  Poly out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0.0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

Poly poly_pow(Poly base, int e) {
  Poly out{1.0};
  while (e > 0) {
    if (e & 1) out = poly_mul(out, base);
    e >>= 1;
    if (e > 0) base = poly_mul(base, base);
  }
  return out;
}

}  // namespace

XiPolynomial xi_polynomial_cayley(int levels, int branching, double b) {
  if (levels < 0) throw ValidationError("xi_polynomial_cayley: levels must be >= 0");
  if (branching < 2) throw ValidationError("xi_polynomial_cayley: branching must be >= 2");
  Poly z1{0.0, 1.0};  // Z_{0,1} = xi
  Poly z0{1.0};       // Z_{0,0} = 1
  for (int k = 1; k <= levels; ++k) {
    Poly merged_up(z1.size(), 0.0), merged_down(z1.size(), 0.0);
    for (std::size_t i = 0; i < z1.size(); ++i) {
      double c0 = i < z0.size() ? z0[i] : 0.0;
      merged_up[i] = z1[i] + b * c0;
      merged_down[i] = b * z1[i] + c0;
    }
    Poly pow_up = poly_pow(merged_up, branching);
    Poly pow_down = poly_pow(merged_down, branching);
    z1.assign(pow_up.size() + 1, 0.0);
    for (std::size_t i = 0; i < pow_up.size(); ++i) z1[i + 1] = pow_up[i];
    z0 = std::move(pow_down);
  }
  XiPolynomial out;
  out.b = b;
  out.coeffs.assign(z1.size(), 0.0);
  for (std::size_t i = 0; i < z1.size(); ++i) {
    out.coeffs[i] = z1[i] + (i < z0.size() ? z0[i] : 0.0);
  }
  for (double c : out.coeffs) {
    if (!std::isfinite(c)) {
      throw NumericalError("xi_polynomial_cayley: coefficient overflow at k = " +
                           std::to_string(levels));
    }
  }
  return out;
}

SpherePoint ratio_direct(const Graph& g, const BoundaryCondition& tau, int v,
                         const ModelParams& p, int cap) {
  if (v < 0 || v >= g.n) throw ValidationError("ratio_direct: vertex out of range");
  ZEval num = z_exact_scaled(g, p, tau.with(v, 1), cap);
  ZEval den = z_exact_scaled(g, p, tau.with(v, 0), cap);
  double scale = std::max(num.term_scale, den.term_scale);
  if (std::abs(num.value) <= 1e-14 * scale && std::abs(den.value) <= 1e-14 * scale) {
    throw IndeterminateRatioError("ratio_direct: numerator and denominator both vanish at vertex " +
                                  std::to_string(v));
  }
  if (den.value == Complex{0.0, 0.0}) return SpherePoint::infinity();
  return SpherePoint(num.value / den.value);
}

namespace {

struct Frame {
  int vertex;
  int parent;
  std::size_t next_neighbor = 0;
  Complex prod{1.0, 0.0};
  int inf_factors = 0;
  int zero_factors = 0;
};

// Incorporates a finished child ratio through g(R) = (R+b)/(bR+1).
void merge_child(Frame& f, const SpherePoint& child, double b, int child_vertex) {
  if (child.is_infinity()) {
    if (b == 0.0) {
      ++f.inf_factors;
    } else {
      f.prod *= Complex{1.0 / b, 0.0};
    }
    return;
  }
  Complex num = child.value() + b;
  Complex den = b * child.value() + 1.0;
  bool num_zero = num == Complex{0.0, 0.0};
  bool den_zero = den == Complex{0.0, 0.0};
  if (num_zero && den_zero) {
    throw IndeterminateRatioError("tree recursion: degenerate merge below vertex " +
                                  std::to_string(child_vertex));
  }
  if (den_zero) {
    ++f.inf_factors;
  } else if (num_zero) {
    ++f.zero_factors;
  } else {
    f.prod *= num / den;
  }
}

SpherePoint finish_vertex(const Frame& f, signed char fix, Complex field) {
  if (fix == 0) {
    // R = 0 unless some child factor forces the denominator Z_{v,0} to vanish.
    if (f.inf_factors > 0) {
      throw IndeterminateRatioError("tree recursion: 0/0 at vertex fixed to 0, id " +
                                    std::to_string(f.vertex));
    }
    return SpherePoint(Complex{0.0, 0.0});
  }
  if (fix == 1) {
    if (f.zero_factors > 0) {
      throw IndeterminateRatioError("tree recursion: 0/0 at vertex fixed to 1, id " +
                                    std::to_string(f.vertex));
    }
    return SpherePoint::infinity();
  }
  bool field_zero = field == Complex{0.0, 0.0};
  if (f.inf_factors > 0 && (f.zero_factors > 0 || field_zero)) {
    throw IndeterminateRatioError("tree recursion: 0*inf product at vertex " +
                                  std::to_string(f.vertex));
  }
  if (f.inf_factors > 0) return SpherePoint::infinity();
  if (f.zero_factors > 0 || field_zero) return SpherePoint(Complex{0.0, 0.0});
  return SpherePoint(field * f.prod);
}

}  // namespace

SpherePoint tree_ratio_recursion(const Graph& tree, int root, std::span<const signed char> fix,
                                 std::span<const Complex> fields, double b,
                                 const std::function<void(int, const SpherePoint&)>& visit) {
  std::vector<Frame> stack;
  stack.push_back({root, -1});
  SpherePoint finished;
  while (!stack.empty()) {
    Frame& top = stack.back();
    const auto& nb = tree.adj[top.vertex];
    bool descended = false;
    while (top.next_neighbor < nb.size()) {
      int w = nb[top.next_neighbor++];
      if (w == top.parent) continue;
      stack.push_back({w, top.vertex});
      descended = true;
      break;
    }
    if (descended) continue;
    finished = finish_vertex(top, fix[top.vertex], fields[top.vertex]);
    if (visit) visit(top.vertex, finished);
    int done_vertex = top.vertex;
    stack.pop_back();
    if (!stack.empty()) merge_child(stack.back(), finished, b, done_vertex);
  }
  return finished;
}

SpherePoint ratio_tree(const Graph& tree, const BoundaryCondition& tau, int v,
                       const ModelParams& p) {
  if (v < 0 || v >= tree.n) throw ValidationError("ratio_tree: vertex out of range");
  if (static_cast<int>(tree.edges.size()) != tree.n - 1) {
    throw ValidationError("ratio_tree: graph is not a tree (edge count)");
  }
  // connectivity check doubles as a cheap acyclicity proof given the edge count
  std::vector<char> seen(tree.n, 0);
  std::vector<int> queue{v};
  seen[v] = 1;
  for (std::size_t i = 0; i < queue.size(); ++i) {
    for (int w : tree.adj[queue[i]]) {
      if (!seen[w]) {
        seen[w] = 1;
        queue.push_back(w);
      }
    }
  }
  if (static_cast<int>(queue.size()) != tree.n) {
    throw ValidationError("ratio_tree: graph is not connected");
  }
  if (tau.infeasible()) {
    throw IndeterminateRatioError("ratio_tree: infeasible boundary condition");
  }

  std::vector<signed char> fix(tree.n, -1);
  for (auto [u, spin] : tau.assignments()) {
    if (u < 0 || u >= tree.n) throw ValidationError("ratio_tree: boundary vertex out of range");
    fix[u] = static_cast<signed char>(spin);
  }
  std::vector<Complex> fields(tree.n);
  for (int u = 0; u < tree.n; ++u) fields[u] = p.field_of(u);
  return tree_ratio_recursion(tree, v, fix, fields, p.b);
}

}  // namespace ising
