#include "ising/approx.hpp"

#include <cmath>

#include <json.hpp>

#include "ising/util.hpp"

namespace ising {

TaylorTruncation log_z_coefficients(const XiPolynomial& p, int m) {
  if (m < 1 || m > p.degree()) {
    throw ValidationError("log_z_coefficients: m must lie in [1, degree]");
  }
  if (std::abs(p.coeffs[0] - 1.0) > 1e-12) {
    throw ValidationError("log_z_coefficients: requires a_0 = 1");
  }
  TaylorTruncation t;
  t.m = m;
  t.l_coeffs.assign(static_cast<std::size_t>(m) + 1, 0.0);
  for (int k = 1; k <= m; ++k) {
    double s = 0.0;
    for (int j = 1; j < k; ++j) {
      s += j * t.l_coeffs[static_cast<std::size_t>(j)] * p.coeffs[static_cast<std::size_t>(k - j)];
    }
    t.l_coeffs[static_cast<std::size_t>(k)] = p.coeffs[static_cast<std::size_t>(k)] - s / k;
  }
  return t;
}

Complex log_along_ray(const XiPolynomial& p, Complex mu) {
  const int steps = 1024;
  double lifted = 0.0;  // arg P(0) = arg a_0 = 0
  double prev_arg = 0.0;
  Complex val{1.0, 0.0};
  for (int i = 1; i <= steps; ++i) {
    val = p.eval(mu * (static_cast<double>(i) / steps));
    if (val == Complex{0.0, 0.0}) {
      throw NumericalError("log_along_ray: polynomial vanished on the ray");
    }
    double a = std::arg(val);
    lifted += wrap_angle(a - prev_arg);
    prev_arg = a;
  }
  return {std::log(std::abs(val)), lifted};
}

std::string ApproxResult::to_json() const {
  nlohmann::json j;
  j["m_used"] = m_used;
  j["approx"] = {approximation.real(), approximation.imag()};
  if (exact) {
    j["exact"] = {exact->real(), exact->imag()};
  } else {
    j["exact"] = nullptr;
  }
  if (log_error) {
    j["log_error"] = *log_error;
  } else {
    j["log_error"] = nullptr;
  }
  j["epsilon_achieved"] = epsilon_achieved;
  return j.dump();
}

ApproxResult approx_partition(const Graph& g, const ModelParams& p, double eps, int cap) {
  if (!(eps > 0.0)) throw ValidationError("approx_partition: eps must be positive");
  Certificate cert = certify_nonvanishing(g, p);
  if (cert.verdict != Verdict::PASS) {
    throw DomainError("approx_partition: certification " + verdict_name(cert.verdict) +
                      (cert.reason.empty() ? "" : " (" + cert.reason + ")"));
  }
  XiPolynomial poly = xi_polynomial(g, p.b, cap);
  TaylorTruncation full = log_z_coefficients(poly, poly.degree());
  Complex mu = p.scale * (p.xi / std::abs(p.xi));

  Complex mu_pow{1.0, 0.0};
  Complex partial{0.0, 0.0};
  int m_used = poly.degree();
  for (int k = 1; k <= poly.degree(); ++k) {
    mu_pow *= mu;
    Complex term = full.l_coeffs[static_cast<std::size_t>(k)] * mu_pow;
    partial += term;
    if (std::abs(term) < eps / 2.0) {
      m_used = k;
      break;
    }
  }

  ApproxResult out;
  out.m_used = m_used;
  out.approximation = std::exp(partial);
  Complex exact_log = log_along_ray(poly, mu);
  out.exact = poly.eval(mu);
  out.log_error = std::abs(exact_log - partial);
  out.epsilon_achieved = *out.log_error < eps;
  return out;
}

}  // namespace ising
