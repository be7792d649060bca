#include "ising/certify.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "ising/sawtree.hpp"
#include "ising/util.hpp"

namespace ising {

bool cone_contains(const SpherePoint& r, const Cone& c, double slack) {
  if (r.is_infinity() || r.is_zero()) return true;
  return c.arc.contains_angle(std::arg(r.value()), slack);
}

SpherePoint multivariate_f(std::span<const SpherePoint> rs, Complex mu, double b) {
  if (mu == Complex{0.0, 0.0}) return SpherePoint(Complex{0.0, 0.0});
  int infs = 0;
  bool zero = false;
  Complex prod{1.0, 0.0};
  for (const auto& r : rs) {
    SpherePoint g = mobius_g(r, b);
    if (g.is_infinity()) {
      ++infs;
    } else if (g.is_zero()) {
      zero = true;
    } else {
      prod *= g.value();
    }
  }
  if (infs > 0 && zero) {
    throw IndeterminateRatioError("multivariate_f: 0*inf product");
  }
  if (infs > 0) return SpherePoint::infinity();
  if (zero) return SpherePoint(Complex{0.0, 0.0});
  return SpherePoint(mu * prod);
}

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::PASS:
      return "PASS";
    case Verdict::FAIL:
      return "FAIL";
    default:
      return "OUT_OF_DOMAIN";
  }
}

std::string Certificate::to_json() const {
  nlohmann::json j;
  j["verdict"] = verdict_name(verdict);
  j["d"] = d;
  j["b"] = b;
  j["xi"] = {xi.real(), xi.imag()};
  j["r"] = r;
  if (bound_kind.empty()) {
    j["bound_used"] = nullptr;
  } else {
    j["bound_used"] = {{"kind", bound_kind}, {"value", bound_value}};
  }
  auto comps = nlohmann::json::array();
  for (const auto& c : components) {
    nlohmann::json e;
    e["base"] = c.base_vertex;
    if (c.final_ratio.is_infinity()) {
      e["final_ratio"] = "inf";
    } else {
      e["final_ratio"] = {c.final_ratio.value().real(), c.final_ratio.value().imag()};
    }
    e["min_cone_margin"] = c.min_cone_margin;
    comps.push_back(e);
  }
  j["components"] = comps;
  if (brute_force_abs_z) {
    j["brute_force_abs_Z"] = *brute_force_abs_z;
  } else {
    j["brute_force_abs_Z"] = nullptr;
  }
  if (!reason.empty()) j["reason"] = reason;
  return j.dump();
}

namespace {

constexpr double kConeSlack = 1e-12;
constexpr double kBoundGuard = 1e-10;

Certificate out_of_domain(Certificate cert, std::string reason) {
  cert.verdict = Verdict::OUT_OF_DOMAIN;
  cert.reason = std::move(reason);
  return cert;
}

double cone_margin(const SpherePoint& r, const Cone& c) {
  if (r.is_infinity() || r.is_zero()) return kPi;
  double a = std::arg(r.value());
  return std::min(a - c.arc.lo, c.arc.hi - a);
}

}  // namespace

Certificate certify_nonvanishing(const Graph& g, const ModelParams& p, int brute_force_cap) {
  Certificate cert;
  cert.d = p.d;
  cert.b = p.b;
  cert.xi = p.xi;
  cert.r = p.scale;

  if (p.d < 2) return out_of_domain(cert, "d must be >= 2");
  if (g.max_degree() > p.d + 1) {
    return out_of_domain(cert, "max degree " + std::to_string(g.max_degree()) +
                                   " exceeds d+1 = " + std::to_string(p.d + 1));
  }
  if (!p.uniform_fields()) {
    return out_of_domain(cert, "per-vertex fields are outside the certified family");
  }
  double bc = critical_b(p.d);
  bool ferro = p.b > bc && p.b < 1.0;
  bool antiferro = p.b > 1.0 && p.b < 1.0 / bc;
  if (!ferro && !antiferro) {
    return out_of_domain(cert, "b = " + dtos(p.b) + " outside (" + dtos(bc) + ",1) u (1," +
                                   dtos(1.0 / bc) + ")");
  }
  cert.bound_kind = ferro ? "theta" : "alpha";
  double xi_mod = std::abs(p.xi);
  if (std::abs(xi_mod - 1.0) > 1e-9) {
    return out_of_domain(cert, "xi must have unit modulus (|xi| = " + dtos(xi_mod) + ")");
  }
  Complex xi = p.xi / xi_mod;
  if (!(p.scale >= 0.0)) return out_of_domain(cert, "scale r must be >= 0");
  if (ferro && p.scale != 1.0) {
    return out_of_domain(cert, "scale r != 1 is only certified for b > 1");
  }

  double bound;
  try {
    bound = ferro ? solve_parabolic(p.d, p.b).theta_b : solve_alpha(p.d, p.b);
  } catch (const Error& e) {
    return out_of_domain(cert, std::string("bound computation failed: ") + e.what());
  }
  cert.bound_value = bound;
  double vartheta = std::arg(xi);
  if (!(std::abs(vartheta) < bound - kBoundGuard)) {
    return out_of_domain(cert, "|Arg xi| = " + dtos(std::abs(vartheta)) + " not below " +
                                   cert.bound_kind + "_b - guard = " + dtos(bound - kBoundGuard));
  }

  try {
    Cone cone;
    if (ferro) {
      cone.arc = invariant_interval(DynamicsParams{xi, p.b, p.d});
    } else {
      cone.arc = CircularInterval{std::min(0.0, vartheta), std::max(0.0, vartheta)};
    }

    Complex mu = p.scale * xi;
    ModelParams params = p;
    params.xi = xi;

    for (const auto& comp : connected_components(g)) {
      ComponentCertificate cc;
      cc.base_vertex = comp.to_parent[0];
      cc.min_cone_margin = kPi;
      SawTree saw = build_saw_tree(comp.graph, 0, canonical_edge_ordering(comp.graph),
                                   BoundaryCondition{});
      std::vector<Complex> fields(saw.tree.n, mu);
      std::string violation;
      auto watch = [&](int node, const SpherePoint& ratio) {
        bool in = cone_contains(ratio, cone, kConeSlack);
        cc.trace.push_back({node, ratio, in});
        if (node != saw.root) {
          cc.min_cone_margin = std::min(cc.min_cone_margin, cone_margin(ratio, cone));
          if (!in && violation.empty()) {
            violation = "ratio at tree vertex " + std::to_string(node) + " left the cone";
          }
        }
      };
      cc.final_ratio =
          tree_ratio_recursion(saw.tree, saw.root, saw.fix, fields, p.b,
                               std::function<void(int, const SpherePoint&)>(watch));
      if (!violation.empty()) {
        cert.verdict = Verdict::FAIL;
        cert.reason = violation;
        cert.components.push_back(std::move(cc));
        return cert;
      }
      int root_children = saw.tree.degree(saw.root);
      if (root_children <= p.d) {
        cc.min_cone_margin = std::min(cc.min_cone_margin, cone_margin(cc.final_ratio, cone));
        if (!cone_contains(cc.final_ratio, cone, kConeSlack)) {
          cert.verdict = Verdict::FAIL;
          cert.reason = "root ratio left the cone";
          cert.components.push_back(std::move(cc));
          return cert;
        }
      } else if (!cc.final_ratio.is_infinity() && !cc.final_ratio.is_zero()) {
        // Degree-(d+1) root: g(R_{d+1}) * F(R_1..R_d) must stay off the
        // negative real axis.
        double a = std::abs(std::arg(cc.final_ratio.value()));
        if (!(a <= kPi - 1e-12)) {
          cert.verdict = Verdict::FAIL;
          cert.reason = "degree-(d+1) root ratio landed on the negative real axis";
          cert.components.push_back(std::move(cc));
          return cert;
        }
      }
      if (chordal_to_minus_one(cc.final_ratio) <= 1e-9) {
        cert.verdict = Verdict::FAIL;
        cert.reason = "final ratio indistinguishable from -1";
        cert.components.push_back(std::move(cc));
        return cert;
      }
      cert.components.push_back(std::move(cc));
    }

    if (g.n <= brute_force_cap) {
      ZEval z = z_exact_scaled(g, params, BoundaryCondition{});
      cert.brute_force_abs_z = std::abs(z.value);
      if (std::abs(z.value) <= 1e-12 * z.term_scale) {
        cert.verdict = Verdict::FAIL;
        cert.reason = "brute-force partition function vanished against the certificate";
        return cert;
      }
    }
  } catch (const Error& e) {
    cert.verdict = Verdict::FAIL;
    cert.reason = std::string("pipeline error: ") + e.what();
    return cert;
  }

  cert.verdict = Verdict::PASS;
  return cert;
}

OriginDisk antiferro_origin_disk(int d, double b) {
  if (d < 2) throw DomainError("antiferro_origin_disk: d must be >= 2");
  if (!(b > 1.0)) throw DomainError("antiferro_origin_disk: requires b > 1");
  auto mu_bound = [&](double r) {
    double q = (1.0 - b * r) / (r + b);
    double acc = r;
    for (int i = 0; i < d; ++i) acc *= q;
    return acc;
  };
  const double lo_limit = 0.0, hi_limit = 1.0 / b;
  // coarse scan to bracket the maximum, then golden section
  const int scan = 2000;
  int best = 1;
  double best_val = -1.0;
  for (int i = 1; i < scan; ++i) {
    double r = lo_limit + (hi_limit - lo_limit) * i / scan;
    double v = mu_bound(r);
    if (v > best_val) {
      best_val = v;
      best = i;
    }
  }
  double a = lo_limit + (hi_limit - lo_limit) * std::max(0, best - 1) / scan;
  double c = lo_limit + (hi_limit - lo_limit) * std::min(scan, best + 1) / scan;
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = c - inv_phi * (c - a);
  double x2 = a + inv_phi * (c - a);
  double f1 = mu_bound(x1), f2 = mu_bound(x2);
  while (c - a > 1e-12) {
    if (f1 > f2) {
      c = x2;
      x2 = x1;
      f2 = f1;
      x1 = c - inv_phi * (c - a);
      f1 = mu_bound(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (c - a);
      f2 = mu_bound(x2);
    }
  }
  double r_star = 0.5 * (a + c);
  return {r_star, mu_bound(r_star)};
}

}  // namespace ising
