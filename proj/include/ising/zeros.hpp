#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "ising/graph.hpp"
#include "ising/partition.hpp"

namespace ising {

struct RootSet {
  std::vector<Complex> roots;      // with multiplicity; count = degree
  std::vector<double> residuals;   // |P(root)| / max |a_k|
  double coeff_scale = 0.0;        // max |a_k|
};

// All roots by Aberth-Ehrlich simultaneous iteration started on the circle of
// radius (a_0/a_n)^{1/n}, followed by a long-double Newton polish. Throws
// NumericalError when 500 sweeps do not converge or the residual contract
// (1e-10 relative to the coefficient scale) fails.
RootSet polynomial_roots(const XiPolynomial& p);

// max over roots of | |root| - 1 |; 0 for an empty set.
double lee_yang_deviation(const RootSet& rs);

struct ZeroAtlas {
  std::vector<RootSet> per_graph;
  std::vector<double> bin_centers;
  std::vector<long> counts;
  std::optional<double> theta_used;
  // roots with |Arg| < theta_b - 1e-6 while b sits in (b_c, 1); index into the
  // family plus the offending root
  std::vector<std::pair<int, Complex>> violations;
};

// Aggregated roots over a family plus an argument histogram over (-pi, pi].
// Root-finding runs in parallel across the family; results keep input order.
ZeroAtlas zero_atlas(std::span<const Graph> family, double b, int bins,
                     int cap = kDefaultEnumerationCap);

// Same aggregation for precomputed polynomials (the Cayley-tree path, whose
// members outgrow the enumeration cap). d_for_flagging <= 0 disables the
// zero-free-arc violation scan.
ZeroAtlas zero_atlas_polynomials(std::span<const XiPolynomial> polys, int d_for_flagging, double b,
                                 int bins);

std::string atlas_roots_csv(const ZeroAtlas& atlas);
std::string atlas_histogram_csv(const ZeroAtlas& atlas);

}  // namespace ising
