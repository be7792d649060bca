#pragma once

#include <optional>
#include <vector>

#include "ising/sphere.hpp"

namespace ising {

// Parameters of the circle map f(R) = xi * g(R)^d with g(R) = (R+b)/(bR+1).
// |xi| = 1 is required for the circle dynamics; general complex xi is allowed
// for plain orbit evaluation.
struct DynamicsParams {
  Complex xi{1.0, 0.0};
  double b = 0.5;
  int d = 2;
};

// Mobius map g(R) = (R+b)/(bR+1), total on the sphere: g(inf) = 1/b and, in
// the degenerate case b = +-1 where the map collapses, the constant value b.
SpherePoint mobius_g(const SpherePoint& r, double b);

// f(R) = xi * g(R)^d via repeated multiplication. xi = 0 maps everything to 0.
SpherePoint apply_f(const SpherePoint& r, const DynamicsParams& p);

// f'(R) = xi d g(R)^{d-1} (1-b^2)/(bR+1)^2. Throws at the pole R = -1/b.
Complex f_derivative(Complex r, const DynamicsParams& p);

// b_c = (d-1)/(d+1), where |f'(1)| = 1 at xi = 1.
double critical_b(int d);

// Parabolic fixed-point data for b in (b_c,1) or (1,1/b_c): the unit-circle
// root R of R^2 + cR + 1 = 0 with positive imaginary part, the parameter
// xi = R / g(R)^d that fixes it, and theta_b = |Arg xi|.
struct CriticalData {
  double b_c = 0.0;
  double theta_b = 0.0;
  std::optional<double> alpha_b;  // filled for b > 1
  SpherePoint parabolic_r;
  Complex parabolic_xi;
  double raw_root_modulus_error = 0.0;  // | |R| - 1 | before renormalization
  double fixed_point_residual = 0.0;    // |f(R) - R|
  Complex multiplier;                   // f'(R): +1 for b < 1, -1 for b > 1
};
CriticalData solve_parabolic(int d, double b);

// Minimal alpha in (0,pi) with e^{i alpha} g(e^{i alpha})^d = 1, for
// b in (1, 1/b_c).
double solve_alpha(int d, double b);

// Residual of the defining equation of alpha, |e^{ia} g(e^{ia})^d - 1|.
double alpha_residual(int d, double b, double alpha);

struct CircleFixedPoint {
  SpherePoint point;
  double angle = 0.0;
  Complex multiplier;  // f'(R0), real up to roundoff on the circle
  bool parabolic = false;
};

// Damped Newton on the circle, seeded from R = 1. Throws NumericalError when
// no attracting or parabolic fixed point is reached within 200 iterations
// (expected for |Arg xi| > theta_b).
CircleFixedPoint attracting_fixed_point(const DynamicsParams& p);

// Closed arc {e^{i phi} : lo <= phi <= hi} with -pi <= lo <= hi <= pi. All
// arcs used here contain the angle 0 and never wrap through -1.
struct CircularInterval {
  double lo = 0.0;
  double hi = 0.0;

  double width() const { return hi - lo; }
  bool degenerate() const { return lo == hi; }
  bool contains_angle(double phi, double slack = 0.0) const {
    return phi >= lo - slack && phi <= hi + slack;
  }
};

// The forward-invariant arc I_b: boundary points 1 and the attracting fixed
// point for b < 1, boundary points 1 and xi for b > 1. Forward invariance is
// spot-checked on a 1000-point discretization; a failed check throws
// InvarianceViolationError.
CircularInterval invariant_interval(const DynamicsParams& p);

struct Orbit {
  std::vector<SpherePoint> points;              // points[0] = start
  std::optional<int> first_hit_minus_one;       // chordal distance <= 1e-9
};
Orbit orbit(const SpherePoint& start, const DynamicsParams& p, int steps);

struct ZeroParam {
  Complex xi;
  int iterations = 0;
  double residual = 0.0;  // chordal distance of f^n(xi) from -1
};

// Searches the arc for a parameter xi with f_{xi,b}^n(xi) = -1, n <= n_max.
// Tracks the continuously lifted argument of R_n(xi) along a discretized arc
// (refined until adjacent increments stay below pi) and bisects each sweep
// across the angle of -1. Empty result when nothing is found within n_max.
std::optional<ZeroParam> find_zero_param_in_arc(const CircularInterval& arc, double b, int d,
                                                int n_max);

}  // namespace ising
