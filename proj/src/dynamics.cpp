#include "ising/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ising/util.hpp"

namespace ising {

namespace {

Complex unit(double phi) { return {std::cos(phi), std::sin(phi)}; }

void validate_params(const DynamicsParams& p, bool forbid_b_one) {
  if (p.d < 2) throw DomainError("dynamics: d must be >= 2");
  if (forbid_b_one && p.b == 1.0) throw DomainError("dynamics: b = 1 is degenerate");
}

// d/dphi Arg f(e^{i phi}) for the circle map: Re(R f'(R) / f(R)).
double circle_multiplier(double phi, const DynamicsParams& p) {
  Complex r = unit(phi);
  Complex fr = apply_f(SpherePoint(r), p).value();
  Complex dfr = f_derivative(r, p);
  return (r * dfr / fr).real();
}

}  // namespace

SpherePoint mobius_g(const SpherePoint& r, double b) {
  if (b == 1.0 || b == -1.0) return SpherePoint(b);  // determinant 1-b^2 vanishes
  if (r.is_infinity()) {
    return b == 0.0 ? SpherePoint::infinity() : SpherePoint(Complex{1.0 / b, 0.0});
  }
  Complex num = r.value() + b;
  Complex den = b * r.value() + 1.0;
  if (den == Complex{0.0, 0.0}) return SpherePoint::infinity();
  return SpherePoint(num / den);
}

SpherePoint apply_f(const SpherePoint& r, const DynamicsParams& p) {
  if (p.xi == Complex{0.0, 0.0}) return SpherePoint(Complex{0.0, 0.0});
  SpherePoint gp = mobius_g(r, p.b);
  if (gp.is_infinity()) return SpherePoint::infinity();
  Complex acc = gp.value();
  for (int i = 1; i < p.d; ++i) acc *= gp.value();
  return SpherePoint(p.xi * acc);
}

Complex f_derivative(Complex r, const DynamicsParams& p) {
  Complex den = p.b * r + 1.0;
  if (den == Complex{0.0, 0.0}) throw DomainError("f_derivative: pole at R = -1/b");
  Complex g = (r + p.b) / den;
  Complex gpow{1.0, 0.0};
  for (int i = 1; i < p.d; ++i) gpow *= g;
  return p.xi * static_cast<double>(p.d) * gpow * (1.0 - p.b * p.b) / (den * den);
}

double critical_b(int d) {
  if (d < 2) throw DomainError("critical_b: d must be >= 2");
  return static_cast<double>(d - 1) / static_cast<double>(d + 1);
}

CriticalData solve_parabolic(int d, double b) {
  double bc = critical_b(d);
  bool ferro = b > bc && b < 1.0;
  bool antiferro = b > 1.0 && b < 1.0 / bc;
  if (!ferro && !antiferro) {
    throw DomainError("solve_parabolic: b must lie in (" + dtos(bc) + ",1) or (1," + dtos(1.0 / bc) +
                      "), got " + dtos(b));
  }
  double c = ferro ? (d * (b * b - 1.0) + (1.0 + b * b)) / b
                   : (d * (1.0 - b * b) + (1.0 + b * b)) / b;
  if (std::abs(c) > 2.0) {
    throw NumericalError("solve_parabolic: no unit-circle roots (|c| > 2) at b = " + dtos(b));
  }
  Complex r_raw{-c / 2.0, std::sqrt(std::max(0.0, 1.0 - c * c / 4.0))};
  double raw_err = std::abs(std::abs(r_raw) - 1.0);
  if (raw_err > 1e-8) {
    throw NumericalError("solve_parabolic: root off the unit circle by " + dtos(raw_err));
  }
  Complex r = r_raw / std::abs(r_raw);

  Complex g = mobius_g(SpherePoint(r), b).value();
  Complex gpow = g;
  for (int i = 1; i < d; ++i) gpow *= g;
  Complex xi = r / gpow;

  CriticalData out;
  out.b_c = bc;
  out.parabolic_r = SpherePoint(r);
  out.parabolic_xi = xi;
  out.raw_root_modulus_error = raw_err;
  out.theta_b = std::abs(std::arg(xi));

  DynamicsParams at{xi, b, d};
  Complex fr = apply_f(SpherePoint(r), at).value();
  out.fixed_point_residual = std::abs(fr - r);
  out.multiplier = f_derivative(r, at);
  double target = ferro ? 1.0 : -1.0;
  if (out.fixed_point_residual > 1e-10 || std::abs(out.multiplier - target) > 1e-8) {
    throw NumericalError("solve_parabolic: verification failed at b = " + dtos(b) +
                         " (fixed-point residual " + dtos(out.fixed_point_residual) + ")");
  }
  validate_params(at, true);
  if (antiferro) out.alpha_b = solve_alpha(d, b);
  return out;
}

namespace {

// Lifted argument of g(e^{i alpha}) for b > 1; Arg g decreases from 0 at
// alpha = 0 to -pi at alpha = pi, so the principal value only needs the +pi
// endpoint folded down.
double lifted_arg_g(double alpha, double b) {
  Complex w = (unit(alpha) + b) / (b * unit(alpha) + 1.0);
  double ph = std::arg(w);
  if (ph > 1e-9) ph -= 2.0 * kPi;
  return ph;
}

double alpha_h(double alpha, int d, double b) { return alpha + d * lifted_arg_g(alpha, b); }

double alpha_h_derivative(double alpha, int d, double b) {
  Complex r = unit(alpha);
  Complex den = b * r + 1.0;
  Complex g = (r + b) / den;
  Complex gprime = (1.0 - b * b) / (den * den);
  return 1.0 + d * (r * gprime / g).real();
}

}  // namespace

double solve_alpha(int d, double b) {
  double bc = critical_b(d);
  if (!(b > 1.0 && b < 1.0 / bc)) {
    throw DomainError("solve_alpha: b must lie in (1," + dtos(1.0 / bc) + "), got " + dtos(b));
  }
  // h(a) = a + d * Arg g(e^{ia}) rises from 0, peaks, then falls to -(d-1)pi.
  // The minimal positive solution of the defining equation is the descending
  // zero crossing of h.
  const int grid = 4096;
  double lo = 0.0, hi = -1.0;
  double prev = 0.0;
  for (int k = 1; k <= grid; ++k) {
    double a = kPi * k / grid;
    if (alpha_h(a, d, b) <= 0.0) {
      lo = prev;
      hi = a;
      break;
    }
    prev = a;
  }
  if (hi < 0.0) throw DomainError("solve_alpha: no root found in (0,pi) at b = " + dtos(b));
  for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
    double mid = 0.5 * (lo + hi);
    (alpha_h(mid, d, b) > 0.0 ? lo : hi) = mid;
  }
  double a = 0.5 * (lo + hi);
  for (int it = 0; it < 6; ++it) {
    double hp = alpha_h_derivative(a, d, b);
    if (std::abs(hp) < 1e-6) break;
    double step = alpha_h(a, d, b) / hp;
    double next = a - step;
    if (next <= 0.0 || next >= kPi) break;
    a = next;
  }
  return a;
}

double alpha_residual(int d, double b, double alpha) {
  Complex r = unit(alpha);
  SpherePoint image = apply_f(SpherePoint(r), DynamicsParams{r, b, d});
  return std::abs(image.value() - 1.0);
}

CircleFixedPoint attracting_fixed_point(const DynamicsParams& p) {
  validate_params(p, true);
  if (p.b <= 0.0) throw DomainError("attracting_fixed_point: b must be positive");
  double xan = std::abs(p.xi);
  if (std::abs(xan - 1.0) > 1e-9) {
    throw DomainError("attracting_fixed_point: xi must be unit modulus");
  }
  DynamicsParams q = p;
  q.xi /= xan;

  double phi = 0.0;
  auto residual = [&](double ph) {
    return wrap_angle(std::arg(apply_f(SpherePoint(unit(ph)), q).value()) - ph);
  };
  bool converged = false;
  double res = residual(phi);
  for (int it = 0; it < 200; ++it) {
    if (std::abs(res) < 1e-13) {
      converged = true;
      break;
    }
    double lambda = circle_multiplier(phi, q);
    double denom = lambda - 1.0;
    if (std::abs(denom) < 1e-300) break;
    double step = -res / denom;
    double next_res = 0.0;
    bool accepted = false;
    for (int half = 0; half < 60; ++half) {
      next_res = residual(phi + step);
      if (std::abs(next_res) < std::abs(res)) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
    phi += step;
    res = next_res;
  }
  if (!converged) {
    throw NumericalError("attracting_fixed_point: no convergence within 200 iterations");
  }

  CircleFixedPoint out;
  out.angle = wrap_angle(phi);
  out.point = SpherePoint(unit(out.angle));
  out.multiplier = f_derivative(unit(out.angle), q);
  double mag = std::abs(out.multiplier);
  if (mag > 1.0 + 1e-9) {
    throw NumericalError("attracting_fixed_point: converged to a repelling point (|f'| = " +
                         dtos(mag) + ")");
  }
  // At a parabolic parameter the root of the angle equation is double, so the
  // iterate lands within sqrt of the angle tolerance; the multiplier then
  // sits within ~3e-5 of 1.
  out.parabolic = std::abs(mag - 1.0) < 3e-5;
  return out;
}

CircularInterval invariant_interval(const DynamicsParams& p) {
  validate_params(p, true);
  double t;
  if (p.b < 1.0) {
    CircleFixedPoint fp = attracting_fixed_point(p);
    if (fp.parabolic) {
      throw DomainError("invariant_interval: parabolic parameter, no attracting interval");
    }
    t = fp.angle;
  } else {
    double xan = std::abs(p.xi);
    if (std::abs(xan - 1.0) > 1e-9) {
      throw DomainError("invariant_interval: xi must be unit modulus");
    }
    t = std::arg(p.xi / xan);
  }
  CircularInterval arc{std::min(0.0, t), std::max(0.0, t)};

  const int samples = 1000;
  for (int i = 0; i < samples; ++i) {
    double phi = arc.degenerate() ? arc.lo
                                  : arc.lo + arc.width() * static_cast<double>(i) / (samples - 1);
    SpherePoint image = apply_f(SpherePoint(unit(phi)), p);
    double y = std::arg(image.value());
    if (!arc.contains_angle(y, 1e-9)) {
      throw InvarianceViolationError("invariant_interval: image angle " + dtos(y) +
                                     " escapes [" + dtos(arc.lo) + "," + dtos(arc.hi) + "]");
    }
  }
  return arc;
}

Orbit orbit(const SpherePoint& start, const DynamicsParams& p, int steps) {
  if (steps < 0) throw ValidationError("orbit: steps must be >= 0");
  Orbit out;
  out.points.reserve(steps + 1);
  out.points.push_back(start);
  for (int i = 1; i <= steps; ++i) out.points.push_back(apply_f(out.points.back(), p));
  for (std::size_t i = 0; i < out.points.size(); ++i) {
    if (chordal_to_minus_one(out.points[i]) <= 1e-9) {
      out.first_hit_minus_one = static_cast<int>(i);
      break;
    }
  }
  return out;
}

std::optional<ZeroParam> find_zero_param_in_arc(const CircularInterval& arc, double b, int d,
                                                int n_max) {
  if (arc.degenerate()) throw ValidationError("find_zero_param_in_arc: arc is degenerate");
  if (d < 2) throw DomainError("find_zero_param_in_arc: d must be >= 2");
  if (b <= 0.0 || b == 1.0) throw DomainError("find_zero_param_in_arc: b must be positive, != 1");

  auto iterate_n = [&](double theta, int n) -> Complex {
    Complex xi = unit(theta);
    DynamicsParams p{xi, b, d};
    SpherePoint r{xi};
    for (int k = 0; k < n; ++k) r = apply_f(r, p);
    return r.value();  // stays on the circle, never hits infinity for |xi| = 1
  };

  for (int samples = 64; samples <= (1 << 17); samples *= 2) {
    std::vector<double> thetas(samples + 1);
    std::vector<Complex> r(samples + 1);
    std::vector<DynamicsParams> params(samples + 1);
    for (int j = 0; j <= samples; ++j) {
      thetas[j] = arc.lo + arc.width() * static_cast<double>(j) / samples;
      Complex xi = unit(thetas[j]);
      params[j] = DynamicsParams{xi, b, d};
      r[j] = xi;
    }
    bool aliased = false;
    std::vector<double> lift(samples + 1);
    for (int n = 1; n <= n_max && !aliased; ++n) {
      for (int j = 0; j <= samples; ++j) {
        r[j] = apply_f(SpherePoint(r[j]), params[j]).value();
      }
      lift[0] = std::arg(r[0]);
      for (int j = 1; j <= samples; ++j) {
        double inc = wrap_angle(std::arg(r[j]) - std::arg(r[j - 1]));
        if (std::abs(inc) >= kPi * 0.99) {
          aliased = true;
          break;
        }
        lift[j] = lift[j - 1] + inc;
      }
      if (aliased) break;
      for (int j = 1; j <= samples; ++j) {
        double a = std::min(lift[j - 1], lift[j]);
        double bb = std::max(lift[j - 1], lift[j]);
        // smallest odd multiple of pi that is >= a
        double k = std::ceil((a / kPi - 1.0) / 2.0);
        double target = (2.0 * k + 1.0) * kPi;
        if (target < a || target > bb) continue;
        // Bisect on the parameter angle; within the bracket the sweep moves
        // by less than pi, so the principal offset from -1 is single-valued.
        double tl = thetas[j - 1], tr = thetas[j];
        double sl = lift[j - 1] - target;
        for (int it = 0; it < 80 && tr - tl > 1e-15; ++it) {
          double tm = 0.5 * (tl + tr);
          double dm = wrap_angle(std::arg(iterate_n(tm, n)) - kPi);
          if ((dm < 0.0) == (sl < 0.0)) {
            tl = tm;
          } else {
            tr = tm;
          }
        }
        double tstar = 0.5 * (tl + tr);
        double residual = chordal_to_minus_one(SpherePoint(iterate_n(tstar, n)));
        if (residual < 1e-8) {
          return ZeroParam{unit(tstar), n, residual};
        }
      }
    }
    if (!aliased) return std::nullopt;  // every level swept cleanly, nothing found
  }
  return std::nullopt;
}

}  // namespace ising
