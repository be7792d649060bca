#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ising/dynamics.hpp"
#include "ising/util.hpp"
#include "oracles.hpp"

using namespace ising;
namespace it = ising::testing;

namespace {

Complex unit(double phi) { return {std::cos(phi), std::sin(phi)}; }

}  // namespace

TEST_CASE("mobius_g special values") {
  double b = 0.7;
  CHECK(mobius_g(SpherePoint(Complex{1, 0}), b) == SpherePoint(Complex{1, 0}));
  CHECK(mobius_g(SpherePoint(Complex{0, 0}), b) == SpherePoint(Complex{b, 0}));
  CHECK(mobius_g(SpherePoint::infinity(), b) == SpherePoint(Complex{1.0 / b, 0}));
  CHECK(chordal_to_minus_one(mobius_g(SpherePoint(Complex{-1, 0}), b)) < 1e-15);
  CHECK(mobius_g(SpherePoint(Complex{-1.0 / b, 0}), b).is_infinity());
  CHECK(mobius_g(SpherePoint::infinity(), 0.0).is_infinity());
  // degenerate Mobius collapses to its constant value
  CHECK(mobius_g(SpherePoint(Complex{0.3, 0.2}), 1.0) == SpherePoint(Complex{1, 0}));
}

TEST_CASE("mobius_g preserves the unit circle") {
  it::Rng rng(201);
  for (int trial = 0; trial < 200; ++trial) {
    double b = it::uniform(rng, 0.05, 3.0);
    auto g = mobius_g(SpherePoint(it::random_unit(rng)), b);
    CHECK(std::abs(std::abs(g.value()) - 1.0) < 1e-12);
  }
}

TEST_CASE("apply_f special values and circle preservation") {
  DynamicsParams p{unit(0.4), 0.6, 3};
  CHECK(chordal_distance(apply_f(SpherePoint(Complex{1, 0}), p), SpherePoint(p.xi)) == 0.0);
  CHECK(apply_f(SpherePoint(Complex{-p.b, 0}), p).is_zero());
  CHECK(apply_f(SpherePoint(Complex{-1.0 / p.b, 0}), p).is_infinity());

  it::Rng rng(202);
  for (int trial = 0; trial < 200; ++trial) {
    DynamicsParams q{it::random_unit(rng), it::uniform(rng, 0.05, 3.0),
                     it::uniform_int(rng, 2, 5)};
    SpherePoint image = apply_f(SpherePoint(it::random_unit(rng)), q);
    CHECK(std::abs(std::abs(image.value()) - 1.0) < 1e-12);
  }
}

TEST_CASE("conjugation symmetry f(1/conj(R)) = 1/conj(f(R))") {
  it::Rng rng(203);
  for (int trial = 0; trial < 100; ++trial) {
    DynamicsParams p{it::random_unit(rng), it::uniform(rng, 0.1, 2.5), it::uniform_int(rng, 2, 4)};
    Complex r = it::random_unit(rng) * it::uniform(rng, 0.2, 3.0);
    Complex lhs = apply_f(SpherePoint(1.0 / std::conj(r)), p).value();
    Complex rhs = 1.0 / std::conj(apply_f(SpherePoint(r), p).value());
    CHECK(chordal_distance(SpherePoint(lhs), SpherePoint(rhs)) < 1e-12);
  }
}

TEST_CASE("f_derivative closed forms") {
  int d = 2;
  double b = 0.5;
  DynamicsParams p{Complex{1, 0}, b, d};
  CHECK(std::abs(std::abs(f_derivative({1, 0}, p)) - d * (1 - b) / (1 + b)) < 1e-14);
  CHECK(std::abs(std::abs(f_derivative({1, 0}, p)) - 2.0 / 3.0) < 1e-14);

  DynamicsParams crit{Complex{1, 0}, critical_b(3), 3};
  CHECK(std::abs(std::abs(f_derivative({1, 0}, crit)) - 1.0) < 1e-12);

  CHECK_THROWS_AS(f_derivative({-1.0 / b, 0.0}, p), DomainError);
}

TEST_CASE("|f'| is xi-independent and increases with |Arg R|") {
  it::Rng rng(204);
  for (int trial = 0; trial < 100; ++trial) {
    double b = it::uniform(rng, 0.1, 2.8);
    int d = it::uniform_int(rng, 2, 4);
    Complex r = it::random_unit(rng);
    double m1 = std::abs(f_derivative(r, {it::random_unit(rng), b, d}));
    double m2 = std::abs(f_derivative(r, {it::random_unit(rng), b, d}));
    CHECK(std::abs(m1 - m2) < 1e-12);
  }
  for (double b : {0.5, 2.0}) {
    DynamicsParams p{Complex{1, 0}, b, 2};
    double prev = std::abs(f_derivative({1, 0}, p));
    for (int i = 1; i < 1000; ++i) {
      double phi = kPi * i / 1000.0;
      double cur = std::abs(f_derivative(unit(phi), p));
      CHECK(cur >= prev - 1e-12);
      prev = cur;
    }
  }
}

TEST_CASE("circle map orientation and winding number") {
  for (double b : {0.5, 2.0}) {
    for (int d : {2, 3}) {
      DynamicsParams p{unit(0.3), b, d};
      const int grid = 4096;
      double lift = 0.0;
      double prev = std::arg(apply_f(SpherePoint(Complex{1, 0}), p).value());
      bool monotone = true;
      for (int i = 1; i <= grid; ++i) {
        double phi = 2.0 * kPi * i / grid;
        double cur = std::arg(apply_f(SpherePoint(unit(phi)), p).value());
        double inc = wrap_angle(cur - prev);
        monotone = monotone && ((b < 1.0) ? inc > 0 : inc < 0);
        lift += inc;
        prev = cur;
      }
      CHECK(monotone);
      CHECK(std::abs(lift - (b < 1.0 ? 1.0 : -1.0) * 2.0 * kPi * d) < 1e-9);
    }
  }
}

TEST_CASE("critical_b values") {
  CHECK(critical_b(2) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(critical_b(3) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(critical_b(11) == doctest::Approx(5.0 / 6.0).epsilon(1e-15));
  CHECK_THROWS_AS(critical_b(1), DomainError);
}

TEST_CASE("solve_parabolic ferromagnetic at d=2, b=1/2") {
  auto cd = solve_parabolic(2, 0.5);
  Complex r = cd.parabolic_r.value();
  CHECK(std::abs(r - Complex{0.25, std::sqrt(15.0) / 4.0}) < 1e-12);
  CHECK(cd.raw_root_modulus_error < 1e-10);
  CHECK(cd.fixed_point_residual < 1e-10);
  CHECK(std::abs(cd.multiplier - Complex{1, 0}) < 1e-8);
  CHECK(cd.theta_b == doctest::Approx(0.30739505108450343).epsilon(1e-10));
  CHECK_FALSE(cd.alpha_b.has_value());
}

TEST_CASE("solve_parabolic antiferromagnetic at d=2, b=2") {
  auto cd = solve_parabolic(2, 2.0);
  Complex r = cd.parabolic_r.value();
  CHECK(std::abs(r - Complex{0.25, std::sqrt(15.0) / 4.0}) < 1e-12);
  CHECK(std::abs(cd.multiplier - Complex{-1, 0}) < 1e-8);
  CHECK(cd.theta_b == doctest::Approx(2.3288370922208316).epsilon(1e-10));
  REQUIRE(cd.alpha_b.has_value());
  CHECK(*cd.alpha_b < cd.theta_b);
}

TEST_CASE("solve_parabolic domain handling") {
  CHECK_THROWS_AS(solve_parabolic(2, 0.2), DomainError);
  CHECK_THROWS_AS(solve_parabolic(2, 1.0), DomainError);
  CHECK_THROWS_AS(solve_parabolic(2, 3.5), DomainError);
  // near the edges theta approaches its limits
  CHECK(solve_parabolic(2, critical_b(2) + 1e-6).theta_b < 1e-2);
  CHECK(solve_parabolic(2, 1.0 - 1e-6).theta_b > kPi - 1e-2);
}

TEST_CASE("solve_alpha: exact value at b=2 and defining residual") {
  // e^{i 2pi/3} g(e^{i 2pi/3})^2 = 1 exactly at d=2, b=2
  double a = solve_alpha(2, 2.0);
  CHECK(a == doctest::Approx(2.0 * kPi / 3.0).epsilon(1e-12));
  CHECK(alpha_residual(2, 2.0, a) < 1e-12);

  it::Rng rng(205);
  for (int trial = 0; trial < 20; ++trial) {
    int d = it::uniform_int(rng, 2, 4);
    double hi = 1.0 / critical_b(d);
    double b = it::uniform(rng, 1.01, hi - 0.01);
    double alpha = solve_alpha(d, b);
    CHECK(alpha > 0.0);
    CHECK(alpha < kPi);
    CHECK(alpha_residual(d, b, alpha) < 1e-12);
  }
}

TEST_CASE("solve_alpha limits and continuity") {
  // b -> 1+ : alpha tends to pi (verified against the defining equation; the
  // crossing satisfies alpha ~ pi - 2 d (b-1) / pi)
  double near_one = solve_alpha(2, 1.0 + 1e-4);
  CHECK(std::abs(near_one - kPi) < 1e-2);
  CHECK(alpha_residual(2, 1.0 + 1e-4, near_one) < 1e-10);

  // b -> 1/b_c -: alpha tends to 0
  CHECK(solve_alpha(2, 2.999) < 0.1);

  double prev = solve_alpha(2, 2.5);
  for (int i = 1; i <= 40; ++i) {
    double b = 2.5 + 0.4 * i / 40.0;
    double cur = solve_alpha(2, b);
    CHECK(std::abs(cur - prev) < 0.05);
    prev = cur;
  }

  CHECK_THROWS_AS(solve_alpha(2, 0.9), DomainError);
  CHECK_THROWS_AS(solve_alpha(2, 3.0), DomainError);
}

TEST_CASE("attracting fixed point") {
  auto fp = attracting_fixed_point({Complex{1, 0}, 0.5, 2});
  CHECK(std::abs(fp.angle) < 1e-13);
  CHECK(std::abs(std::abs(fp.multiplier) - 2.0 / 3.0) < 1e-10);
  CHECK_FALSE(fp.parabolic);

  auto cd = solve_parabolic(2, 0.5);
  auto para = attracting_fixed_point({cd.parabolic_xi, 0.5, 2});
  CHECK(para.parabolic);

  DynamicsParams inside{unit(0.5 * cd.theta_b), 0.5, 2};
  auto fin = attracting_fixed_point(inside);
  CHECK(chordal_distance(apply_f(fin.point, inside), fin.point) < 1e-12);
  CHECK(std::abs(fin.multiplier) < 1.0);
  CHECK(std::abs(fin.multiplier.imag()) < 1e-9);  // real multiplier on the circle

  // b > 1: the circle fixed point has negative real multiplier
  auto anti = attracting_fixed_point({unit(0.3), 2.0, 2});
  CHECK(anti.multiplier.real() < 0.0);
  CHECK(std::abs(anti.multiplier) < 1.0);
  CHECK(std::abs(anti.multiplier.imag()) < 1e-9);

  // outside the attracting range
  CHECK_THROWS_AS(attracting_fixed_point({unit(0.9 * kPi), 0.5, 2}), NumericalError);
  CHECK_THROWS_AS(attracting_fixed_point({unit(0.2), 0.1, 2}), NumericalError);
}

TEST_CASE("invariant interval") {
  auto degenerate = invariant_interval({Complex{1, 0}, 0.5, 2});
  CHECK(degenerate.degenerate());
  CHECK(degenerate.lo == 0.0);

  auto cd = solve_parabolic(2, 0.5);
  DynamicsParams p{unit(0.5 * cd.theta_b), 0.5, 2};
  auto arc = invariant_interval(p);
  CHECK(arc.lo == 0.0);
  CHECK(arc.hi > 0.0);
  CHECK(arc.hi < kPi);
  CHECK_FALSE(arc.contains_angle(kPi, 1e-9));

  // orbit stays in the interval
  auto orb = orbit(SpherePoint(p.xi), p, 10000);
  for (const auto& pt : orb.points) {
    CHECK(arc.contains_angle(std::arg(pt.value()), 1e-9));
  }
  CHECK_FALSE(orb.first_hit_minus_one.has_value());

  double alpha = solve_alpha(2, 2.0);
  DynamicsParams q{unit(0.5 * alpha), 2.0, 2};
  auto arc2 = invariant_interval(q);
  CHECK(arc2.hi == doctest::Approx(0.5 * alpha).epsilon(1e-12));
  auto orb2 = orbit(SpherePoint(q.xi), q, 10000);
  for (const auto& pt : orb2.points) {
    CHECK(arc2.contains_angle(std::arg(pt.value()), 1e-9));
  }

  // negative angle mirrors the arc
  auto arc3 = invariant_interval({unit(-0.5 * cd.theta_b), 0.5, 2});
  CHECK(arc3.hi == 0.0);
  CHECK(arc3.lo < 0.0);
}

TEST_CASE("orbit bookkeeping") {
  DynamicsParams p{Complex{1, 0}, 0.5, 2};
  auto constant = orbit(SpherePoint(Complex{1, 0}), p, 5);
  REQUIRE(constant.points.size() == 6);
  for (const auto& pt : constant.points) CHECK(pt == SpherePoint(Complex{1, 0}));

  CHECK_THROWS_AS(orbit(SpherePoint(Complex{1, 0}), p, -1), ValidationError);

  // a parameter found by the density search lands exactly on -1 at step n
  auto zp = find_zero_param_in_arc({0.3, 0.4}, 0.2, 2, 60);
  REQUIRE(zp.has_value());
  DynamicsParams q{zp->xi, 0.2, 2};
  auto orb = orbit(SpherePoint(zp->xi), q, zp->iterations + 3);
  REQUIRE(orb.first_hit_minus_one.has_value());
  CHECK(*orb.first_hit_minus_one == zp->iterations);
}

TEST_CASE("find_zero_param_in_arc") {
  auto zp = find_zero_param_in_arc({0.3, 0.4}, 0.2, 2, 200);
  REQUIRE(zp.has_value());
  CHECK(zp->iterations <= 40);
  CHECK(zp->residual < 1e-8);
  double arg = std::arg(zp->xi);
  CHECK(arg >= 0.3 - 1e-12);
  CHECK(arg <= 0.4 + 1e-12);

  auto cd = solve_parabolic(2, 0.5);
  auto empty = find_zero_param_in_arc({0.1 * cd.theta_b, 0.85 * cd.theta_b}, 0.5, 2, 200);
  CHECK_FALSE(empty.has_value());

  auto outside = find_zero_param_in_arc({cd.theta_b + 0.05, cd.theta_b + 0.15}, 0.5, 2, 200);
  REQUIRE(outside.has_value());
  CHECK(outside->residual < 1e-8);

  CHECK_THROWS_AS(find_zero_param_in_arc({0.2, 0.2}, 0.5, 2, 50), ValidationError);
}

TEST_CASE("cayley orbit equivalence: ratio of T_{k,d} is the orbit point") {
  it::Rng rng(206);
  for (int d : {2, 3}) {
    for (double b : {0.5, 2.0}) {
      Complex xi = it::random_unit(rng);
      DynamicsParams p{xi, b, d};
      auto orb = orbit(SpherePoint(xi), p, 8);
      for (int k = 0; k <= (d == 2 ? 8 : 5); ++k) {
        ModelParams mp;
        mp.b = b;
        mp.xi = xi;
        SpherePoint tree_ratio = ratio_tree(cayley_tree(k, d), {}, 0, mp);
        CHECK(chordal_distance(tree_ratio, orb.points[static_cast<std::size_t>(k)]) < 1e-9);
      }
    }
  }
}
