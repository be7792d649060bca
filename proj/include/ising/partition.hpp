#pragma once

#include <complex>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "ising/graph.hpp"
#include "ising/sphere.hpp"

namespace ising {

inline constexpr int kDefaultEnumerationCap = 24;

// Model-side parameters: edge interaction b, branching parameter d (degree
// bound d+1), a global external field xi scaled by r, and optional per-vertex
// field overrides. Free vertices may carry field 0 (the r = 0 ray); ratios of
// fixed vertices never depend on their field value.
struct ModelParams {
  double b = 0.5;
  int d = 2;
  Complex xi{1.0, 0.0};
  double scale = 1.0;  // r >= 0 multiplying xi
  std::vector<Complex> fields;  // empty = uniform scale*xi

  Complex field_of(int v) const {
    return fields.empty() ? scale * xi : fields.at(static_cast<std::size_t>(v));
  }
  bool uniform_fields() const { return fields.empty(); }
};

struct PhysicalParams {
  double coupling = 1.0;     // J
  double field = 0.0;        // h
  double temperature = 1.0;  // T > 0
};

struct PhysicalMap {
  Complex xi;
  double b;
  double log_prefactor_per_edge;    // J/T
  double log_prefactor_per_vertex;  // h/T
};

// xi = e^{-2h/T}, b = e^{-2J/T}; the spin-sum partition function equals
// exp(|E| J/T + |V| h/T) * Z(xi, b).
PhysicalMap physical_to_model(const PhysicalParams& p);

// Z_G(., b) as a coefficient sequence in xi: a_k = sum over |U| = k of
// b^{|cut(U)|}. Palindromic with a_0 = a_n = 1 and positive coefficients for
// b > 0.
struct XiPolynomial {
  double b = 0.0;
  std::vector<double> coeffs;  // a_0..a_n

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
  Complex eval(Complex xi) const;
  std::string to_json() const;
  static XiPolynomial from_json(const std::string& text);
};

struct ZEval {
  Complex value{0.0, 0.0};
  double term_scale = 0.0;  // sum of |term| over compatible subsets
};

// Exact boundary-conditioned partition sum over the free vertices, walked in
// Gray-code order with incremental cut updates. Infeasible tau gives 0.
// Throws ResourceError when the free-vertex count exceeds cap.
ZEval z_exact_scaled(const Graph& g, const ModelParams& p, const BoundaryCondition& tau,
                     int cap = kDefaultEnumerationCap);
Complex z_exact(const Graph& g, const ModelParams& p, const BoundaryCondition& tau,
                int cap = kDefaultEnumerationCap);

XiPolynomial xi_polynomial(const Graph& g, double b, int cap = kDefaultEnumerationCap);

// Z_{T_{k,d}} as a polynomial in xi, through the rooted pair recursion
//   Z_{k,1} = xi (Z_{k-1,1} + b Z_{k-1,0})^d,  Z_{k,0} = (b Z_{k-1,1} + Z_{k-1,0})^d,
// which handles Cayley trees far beyond the subset-enumeration cap.
XiPolynomial xi_polynomial_cayley(int levels, int branching, double b);

// Ratio R = Z_{tau_{v,1}} / Z_{tau_{v,0}} on the sphere; infinity exactly when
// the denominator vanishes. Throws IndeterminateRatioError when numerator and
// denominator are both below 1e-14 of the term scale.
SpherePoint ratio_direct(const Graph& g, const BoundaryCondition& tau, int v,
                         const ModelParams& p, int cap = kDefaultEnumerationCap);

// Same ratio through the subtree recursion R = xi_v prod (R_i+b)/(b R_i+1);
// linear in the tree size. Validates that the graph is a tree.
SpherePoint ratio_tree(const Graph& tree, const BoundaryCondition& tau, int v,
                       const ModelParams& p);

// Shared bottom-up evaluator over an explicit rooted tree: fix[w] is -1 for
// free vertices and 0/1 for fixed ones; visit (when set) observes every
// vertex ratio in post-order. Memory use beyond the tree itself is one
// root-to-leaf frontier.
SpherePoint tree_ratio_recursion(const Graph& tree, int root, std::span<const signed char> fix,
                                 std::span<const Complex> fields, double b,
                                 const std::function<void(int, const SpherePoint&)>& visit = {});

}  // namespace ising
