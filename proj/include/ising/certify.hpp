#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ising/dynamics.hpp"
#include "ising/graph.hpp"
#include "ising/partition.hpp"

namespace ising {

// The nonnegative-real cone over the invariant arc I_b. Contains 0 and the
// point at infinity, never contains -1, and is closed under positive scaling.
struct Cone {
  CircularInterval arc;
};

bool cone_contains(const SpherePoint& r, const Cone& c, double slack = 1e-12);

// F_{mu,b}(R_1..R_d) = mu * prod g(R_i), with each argument passed through g
// first so that 0 and infinity inputs resolve to b and 1/b. mu = 0 maps to 0.
SpherePoint multivariate_f(std::span<const SpherePoint> rs, Complex mu, double b);

enum class Verdict { PASS, FAIL, OUT_OF_DOMAIN };

std::string verdict_name(Verdict v);

struct TraceEntry {
  int tree_vertex;
  SpherePoint ratio;
  bool in_cone;
};

struct ComponentCertificate {
  int base_vertex = 0;               // id in the input graph
  SpherePoint final_ratio;
  double min_cone_margin = 0.0;      // radians from the nearest arc endpoint
  std::vector<TraceEntry> trace;
};

struct Certificate {
  Verdict verdict = Verdict::OUT_OF_DOMAIN;
  std::string reason;
  int d = 0;
  double b = 0.0;
  Complex xi{1.0, 0.0};
  double r = 1.0;
  std::string bound_kind;  // "theta" or "alpha"
  double bound_value = 0.0;
  std::vector<ComponentCertificate> components;
  std::optional<double> brute_force_abs_z;

  std::string to_json() const;
};

// The full zero-freeness pipeline: domain checks, SAW tree per component,
// bottom-up cone membership for every vertex, the degree-(d+1) root step, the
// final not-minus-one check, and a brute-force |Z| cross-check for graphs
// within the enumeration cap.
Certificate certify_nonvanishing(const Graph& g, const ModelParams& p, int brute_force_cap = 16);

struct OriginDisk {
  double radius = 0.0;  // r with F_{mu,b}(D_r u {inf}) inside D_r for |mu| <= mu_max
  double mu_max = 0.0;
};

// Largest mu-radius for the forward-invariant disk at the origin, b > 1:
// maximizes r ((1-br)/(r+b))^d over r in (0, 1/b) by golden section.
OriginDisk antiferro_origin_disk(int d, double b);

}  // namespace ising
