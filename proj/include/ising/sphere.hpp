#pragma once

#include <cmath>
#include <complex>
#include <utility>

#include "ising/errors.hpp"

namespace ising {

using Complex = std::complex<double>;

// A point of the extended complex plane: either a finite value or the point
// at infinity. Ratios of partition functions live here.
class SpherePoint {
 public:
  constexpr SpherePoint() = default;
  SpherePoint(Complex v) : value_(v) {}  // NOLINT: implicit by design
  SpherePoint(double v) : value_(v, 0.0) {}

  static SpherePoint infinity() {
    SpherePoint p;
    p.infinite_ = true;
    return p;
  }

  bool is_infinity() const { return infinite_; }

  Complex value() const {
    if (infinite_) throw DomainError("SpherePoint: value() called on the point at infinity");
    return value_;
  }

  bool is_zero() const { return !infinite_ && value_ == Complex{0.0, 0.0}; }

  friend bool operator==(const SpherePoint& a, const SpherePoint& b) {
    if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
    return a.value_ == b.value_;
  }

 private:
  bool infinite_ = false;
  Complex value_{0.0, 0.0};
};

// Chordal metric on the Riemann sphere, d(z,w) = 2|z-w| / sqrt((1+|z|^2)(1+|w|^2)),
// extended to infinity by d(z,inf) = 2/sqrt(1+|z|^2). Computed through
// homogeneous coordinates so that huge finite values neither overflow nor
// lose the isometry z -> 1/z.
inline double chordal_distance(const SpherePoint& p, const SpherePoint& q) {
  auto rep = [](const SpherePoint& s) -> std::pair<Complex, Complex> {
    if (s.is_infinity()) return {Complex{1.0, 0.0}, Complex{0.0, 0.0}};
    Complex a = s.value();
    double m = std::max({std::abs(a.real()), std::abs(a.imag()), 1.0});
    return {a / m, Complex{1.0 / m, 0.0}};
  };
  auto [ap, bp] = rep(p);
  auto [aq, bq] = rep(q);
  double num = 2.0 * std::abs(ap * bq - aq * bp);
  double den = std::hypot(std::abs(ap), std::abs(bp)) * std::hypot(std::abs(aq), std::abs(bq));
  return num / den;
}

inline double chordal_to_minus_one(const SpherePoint& p) {
  return chordal_distance(p, SpherePoint(Complex{-1.0, 0.0}));
}

}  // namespace ising
