#include "ising/zeros.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "ising/dynamics.hpp"
#include "ising/util.hpp"

namespace ising {

namespace {

using LComplex = std::complex<long double>;

// Newton ratio P/P' plus a residual relative to the local evaluation scale
// sum |a_i| |z|^i. For |z| > 1 everything is computed through the reversed
// polynomial at w = 1/z, which keeps degree-500 evaluations with 1e150-scale
// coefficients clear of overflow: with P(z) = z^n Q(1/z),
//   P/P' = z Q(w) / (n Q(w) - w Q'(w)).
struct NewtonEval {
  Complex ratio;        // P / P'
  double rel_residual;  // |P(z)| / (sum |a_i| |z|^i)
  bool derivative_zero = false;
};

NewtonEval newton_ratio(const std::vector<double>& a, Complex z) {
  const int n = static_cast<int>(a.size()) - 1;
  NewtonEval out;
  if (std::abs(z) <= 1.0) {
    Complex p{0.0, 0.0}, dp{0.0, 0.0};
    double scale = 0.0;
    double az = std::abs(z);
    for (auto it = a.rbegin(); it != a.rend(); ++it) {
      dp = dp * z + p;
      p = p * z + *it;
      scale = scale * az + std::abs(*it);
    }
    out.rel_residual = scale > 0.0 ? std::abs(p) / scale : 0.0;
    if (dp == Complex{0.0, 0.0}) {
      out.derivative_zero = true;
      return out;
    }
    out.ratio = p / dp;
    return out;
  }
  Complex w = 1.0 / z;
  Complex q{0.0, 0.0}, dq{0.0, 0.0};
  double scale = 0.0;
  double aw = std::abs(w);
  for (auto it = a.begin(); it != a.end(); ++it) {  // reversed coefficients
    dq = dq * w + q;
    q = q * w + *it;
    scale = scale * aw + std::abs(*it);
  }
  out.rel_residual = scale > 0.0 ? std::abs(q) / scale : 0.0;
  Complex denom = static_cast<double>(n) * q - w * dq;
  if (denom == Complex{0.0, 0.0}) {
    out.derivative_zero = true;
    return out;
  }
  out.ratio = z * q / denom;
  return out;
}

std::pair<LComplex, LComplex> eval_with_derivative_ld(const std::vector<double>& a, LComplex z) {
  LComplex p{0.0L, 0.0L}, dp{0.0L, 0.0L};
  for (auto it = a.rbegin(); it != a.rend(); ++it) {
    dp = dp * z + p;
    p = p * z + static_cast<long double>(*it);
  }
  return {p, dp};
}

}  // namespace

RootSet polynomial_roots(const XiPolynomial& poly) {
  const int n = poly.degree();
  if (n < 1) throw ValidationError("polynomial_roots: degree must be >= 1");
  if (poly.coeffs[0] == 0.0) throw ValidationError("polynomial_roots: a_0 must be nonzero");
  if (poly.coeffs[static_cast<std::size_t>(n)] == 0.0) {
    throw ValidationError("polynomial_roots: leading coefficient must be nonzero");
  }
  RootSet out;
  out.coeff_scale = 0.0;
  for (double c : poly.coeffs) out.coeff_scale = std::max(out.coeff_scale, std::abs(c));
  std::vector<double> a(poly.coeffs.size());
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = poly.coeffs[i] / out.coeff_scale;

  double radius = std::pow(std::abs(a[0] / a[static_cast<std::size_t>(n)]), 1.0 / n);
  std::vector<Complex> z(n);
  for (int k = 0; k < n; ++k) {
    // slight radial jitter breaks the symmetry of palindromic root sets
    double r = radius * (1.0 + 0.05 * std::cos(3.7 * k + 0.9));
    double phi = 2.0 * kPi * k / n + 0.4;
    z[static_cast<std::size_t>(k)] = Complex{r * std::cos(phi), r * std::sin(phi)};
  }

  const double settle_tol = 8.0 * std::numeric_limits<double>::epsilon();
  bool converged = false;
  for (int sweep = 0; sweep < 500 && !converged; ++sweep) {
    double worst_step = 0.0;
    for (int k = 0; k < n; ++k) {
      auto& zk = z[static_cast<std::size_t>(k)];
      NewtonEval ev = newton_ratio(a, zk);
      if (ev.rel_residual <= settle_tol) continue;
      if (ev.derivative_zero) {
        zk += Complex{1e-8, 1e-8};
        worst_step = 1.0;
        continue;
      }
      Complex repulsion{0.0, 0.0};
      for (int j = 0; j < n; ++j) {
        if (j == k) continue;
        Complex diff = zk - z[static_cast<std::size_t>(j)];
        if (diff == Complex{0.0, 0.0}) diff = Complex{1e-10 * (k + 1), 1e-10};
        repulsion += 1.0 / diff;
      }
      Complex denom = 1.0 - ev.ratio * repulsion;
      Complex step = denom == Complex{0.0, 0.0} ? ev.ratio : ev.ratio / denom;
      double cap = 0.5 * (1.0 + std::abs(zk));
      double sn = std::abs(step);
      if (sn > cap) step *= cap / sn;
      zk -= step;
      if (!std::isfinite(zk.real()) || !std::isfinite(zk.imag())) {
        throw NumericalError("polynomial_roots: iterate diverged");
      }
      worst_step = std::max(worst_step, std::abs(step) / (1.0 + std::abs(zk)));
    }
    converged = worst_step < 1e-13;
  }
  if (!converged) {
    double worst = 0.0;
    for (const auto& zk : z) worst = std::max(worst, newton_ratio(a, zk).rel_residual);
    throw NumericalError("polynomial_roots: no convergence after 500 sweeps, worst residual " +
                         dtos(worst));
  }

  out.roots.resize(n);
  out.residuals.resize(n);
  for (int k = 0; k < n; ++k) {
    LComplex zl{z[static_cast<std::size_t>(k)].real(), z[static_cast<std::size_t>(k)].imag()};
    for (int it = 0; it < 3; ++it) {
      auto [p, dp] = eval_with_derivative_ld(a, zl);
      if (dp == LComplex{0.0L, 0.0L}) break;
      LComplex step = p / dp;
      if (std::abs(step) > 0.5L) break;  // polish only, never leave the basin
      zl -= step;
    }
    Complex zf{static_cast<double>(zl.real()), static_cast<double>(zl.imag())};
    out.roots[static_cast<std::size_t>(k)] = zf;
    // |P(root)| relative to max |a_k|; coefficients are already normalized
    out.residuals[static_cast<std::size_t>(k)] =
        static_cast<double>(std::abs(eval_with_derivative_ld(a, zl).first));
  }
  return out;
}

double lee_yang_deviation(const RootSet& rs) {
  double dev = 0.0;
  for (const auto& z : rs.roots) dev = std::max(dev, std::abs(std::abs(z) - 1.0));
  return dev;
}

namespace {

ZeroAtlas assemble_atlas(std::vector<RootSet> per_graph, int d_for_flagging, double b, int bins) {
  if (bins < 1) throw ValidationError("zero_atlas: bins must be >= 1");
  ZeroAtlas atlas;
  atlas.per_graph = std::move(per_graph);
  atlas.bin_centers.resize(bins);
  atlas.counts.assign(bins, 0);
  for (int j = 0; j < bins; ++j) {
    atlas.bin_centers[static_cast<std::size_t>(j)] = -kPi + (j + 0.5) * 2.0 * kPi / bins;
  }
  if (d_for_flagging >= 2) {
    double bc = critical_b(d_for_flagging);
    if (b > bc && b < 1.0) atlas.theta_used = solve_parabolic(d_for_flagging, b).theta_b;
  }
  for (std::size_t gi = 0; gi < atlas.per_graph.size(); ++gi) {
    for (const auto& z : atlas.per_graph[gi].roots) {
      double phi = std::arg(z);
      int bin = std::min(bins - 1, static_cast<int>((phi + kPi) / (2.0 * kPi) * bins));
      bin = std::max(0, bin);
      ++atlas.counts[static_cast<std::size_t>(bin)];
      if (atlas.theta_used && std::abs(phi) < *atlas.theta_used - 1e-6) {
        atlas.violations.emplace_back(static_cast<int>(gi), z);
      }
    }
  }
  return atlas;
}

}  // namespace

ZeroAtlas zero_atlas(std::span<const Graph> family, double b, int bins, int cap) {
  int max_deg = 0;
  for (const auto& g : family) max_deg = std::max(max_deg, g.max_degree());
  int d = std::max(2, max_deg - 1);
  std::vector<RootSet> sets(family.size());
  std::exception_ptr failure;
  parallel_for_index(family.size(), [&](std::size_t i) {
    try {
      sets[i] = polynomial_roots(xi_polynomial(family[i], b, cap));
    } catch (...) {
      if (!failure) failure = std::current_exception();
    }
  });
  if (failure) std::rethrow_exception(failure);
  return assemble_atlas(std::move(sets), d, b, bins);
}

ZeroAtlas zero_atlas_polynomials(std::span<const XiPolynomial> polys, int d_for_flagging, double b,
                                 int bins) {
  std::vector<RootSet> sets(polys.size());
  std::exception_ptr failure;
  parallel_for_index(polys.size(), [&](std::size_t i) {
    try {
      sets[i] = polynomial_roots(polys[i]);
    } catch (...) {
      if (!failure) failure = std::current_exception();
    }
  });
  if (failure) std::rethrow_exception(failure);
  return assemble_atlas(std::move(sets), d_for_flagging, b, bins);
}

std::string atlas_roots_csv(const ZeroAtlas& atlas) {
  std::ostringstream out;
  out << "graph_id,re,im,modulus,arg\n";
  for (std::size_t gi = 0; gi < atlas.per_graph.size(); ++gi) {
    for (const auto& z : atlas.per_graph[gi].roots) {
      out << gi << ',' << dtos(z.real()) << ',' << dtos(z.imag()) << ',' << dtos(std::abs(z))
          << ',' << dtos(std::arg(z)) << '\n';
    }
  }
  return out.str();
}

std::string atlas_histogram_csv(const ZeroAtlas& atlas) {
  std::ostringstream out;
  out << "bin_center,count\n";
  for (std::size_t j = 0; j < atlas.bin_centers.size(); ++j) {
    out << dtos(atlas.bin_centers[j]) << ',' << atlas.counts[j] << '\n';
  }
  return out.str();
}

}  // namespace ising
