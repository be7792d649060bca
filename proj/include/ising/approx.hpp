#pragma once

#include <optional>
#include <string>

#include "ising/certify.hpp"
#include "ising/graph.hpp"
#include "ising/partition.hpp"

namespace ising {

// Truncated log-series of a XiPolynomial: l_k solves
// k a_k = sum_{j=1..k} j l_j a_{k-j}, so exp(sum l_k xi^k) approximates
// P(xi) / a_0 for small |xi|.
struct TaylorTruncation {
  int m = 0;
  std::vector<double> l_coeffs;  // index k in 1..m; index 0 unused
  double epsilon_target = 0.0;
};

TaylorTruncation log_z_coefficients(const XiPolynomial& p, int m);

// log P(mu) with the branch fixed by continuity along the ray from 0 to mu
// (P must be nonvanishing along the ray; guaranteed in certified regions).
Complex log_along_ray(const XiPolynomial& p, Complex mu);

struct ApproxResult {
  Complex approximation{0.0, 0.0};
  int m_used = 0;
  std::optional<Complex> exact;
  std::optional<double> log_error;  // footnote-style |a - b|
  bool epsilon_achieved = false;

  std::string to_json() const;
};

// Taylor-truncation approximation of Z_G(r xi, b): certifies the parameters,
// grows m until |l_m mu^m| < eps/2 (capped at the polynomial degree), and
// reports the achieved log-difference against the exact value. Throws
// DomainError when certification does not PASS.
ApproxResult approx_partition(const Graph& g, const ModelParams& p, double eps,
                              int cap = kDefaultEnumerationCap);

}  // namespace ising
