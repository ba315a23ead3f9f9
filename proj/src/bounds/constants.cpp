#include <cmath>

#include "pqfreq/bounds.hpp"

namespace pqfreq {

double unit_ball_volume(int N) {
  return std::pow(kPi, 0.5 * N) / std::tgamma(0.5 * N + 1.0);
}

double mu_lower_bound(const Exponents& e, double volume, double diameter) {
  if (e.q() < e.p()) throw ValidationError("mu_lower_bound: needs q >= p");
  if (!(volume > 0.0) || !(diameter > 0.0))
    throw ValidationError("mu_lower_bound: volume and diameter must be positive");
  const double N = e.N(), p = e.p(), iq = e.inv_q();
  const double omega = unit_ball_volume(e.N());
  double base = std::max(0.0, (1.0 / N - 1.0 / p + iq) / (1.0 - 1.0 / p + iq));
  return std::pow(N * std::pow(omega, 1.0 / N), p) * std::pow(volume / std::pow(diameter, N), p) *
         std::pow(base, p - 1.0 + p * iq) * std::pow(volume, 1.0 - p / N - p * iq);
}

ExtensionConstants extension_constants(const Exponents& e, double eccentricity) {
  if (!(eccentricity >= 1.0)) throw ValidationError("extension_constants: eccentricity must be >= 1");
  const double N = e.N(), p = e.p();
  auto a_at = [&](double ecc) {
    return std::exp((std::log(4.0) + (3.0 * N + p) * std::log(6.0)) / p +
                    (6.0 * N / p + 2.0) * std::log(ecc));
  };
  double B = std::exp((std::log(2.0) + N * std::log(6.0)) / p + 2.0 * N / p * std::log(eccentricity));
  return {a_at(eccentricity), B, a_at(std::sqrt(N))};
}

double mazya_constant(const Exponents& e, double ratio, std::optional<double> mu_ball) {
  const double N = e.N(), p = e.p(), iq = e.inv_q();
  if (!(ratio > 0.0) || !(ratio < 1.0 / std::sqrt(N)))
    throw ValidationError("mazya_constant: d/D must lie in (0, 1/sqrt(N))");
  if (e.q() < e.p()) throw ValidationError("mazya_constant: needs q >= p");
  const double omega = unit_ball_volume(e.N());
  double mu = mu_ball ? *mu_ball : mu_lower_bound(e, omega, 2.0);
  if (!(mu >= 0.0)) throw ValidationError("mazya_constant: ball constant must be non-negative");
  double alpha = extension_constants(e, 1.0).alpha;
  double bracket = std::pow(omega, iq) +
                   4.0 * std::pow(omega, 1.0 / p) / (1.0 - std::sqrt(N) * ratio) * std::pow(mu, -1.0 / p);
  return std::pow(ratio, 4.0 * N / p + N * iq) / (alpha * bracket);
}

void check_theta_exponents(const Exponents& e) {
  if (e.N() != 2) throw ValidationError("theta: only N = 2 is covered");
  if (e.q() < e.p())
    throw ValidationError(
        "theta: q < p is excluded; the lower bound in terms of the inradius already fails for "
        "convex sets (thin strips) when q < p");
  if (e.p() < 2.0 && !(e.q() < e.p_star()))
    throw ValidationError("theta: p < 2 needs q < p* = " + std::to_string(e.p_star()));
  if (e.p() == 2.0 && e.q_infinite()) throw ValidationError("theta: p = 2 needs q finite");
}

double theta(const Exponents& e, std::optional<double> mu_ball) {
  check_theta_exponents(e);
  const double p = e.p(), iq = e.inv_q();
  double C = mazya_constant(e, 0.5, mu_ball);
  return std::pow(C, p) / (std::pow(2.0, p) * std::pow(10.0, p - 1.0 + 2.0 * p * iq));
}

double theta_lower_bound(const Exponents& e, int k, double r) {
  if (k < 1) throw ValidationError("theta_lower_bound: k must be >= 1");
  if (!(r > 0.0)) throw ValidationError("theta_lower_bound: r must be positive");
  const double p = e.p(), iq = e.inv_q();
  return theta(e) * std::pow(std::sqrt(double(k)) * r, -(p - 2.0 + 2.0 * p * iq));
}

IntervalPointCapacity interval_point_capacity(double p, double a, double b, double x0) {
  if (!(p >= 1.0)) throw ValidationError("interval_point: p must be >= 1");
  if (!(a < x0 && x0 < b)) throw ValidationError("interval_point: needs a < x0 < b");
  double exact = p == 1.0 ? 2.0 : std::pow(x0 - a, 1.0 - p) + std::pow(b - x0, 1.0 - p);
  return {exact, std::pow(2.0, p) / std::pow(b - a, p - 1.0)};
}

double disk_relative_capacity(double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw ValidationError("disk_relative: needs 0 < eps < 1");
  return 2.0 * kPi / std::log(1.0 / eps);
}

double punctured_ball_value(int N, double p) {
  if (N < 1 || !(p > N)) throw ValidationError("punctured_ball_value: needs p > N");
  return N * unit_ball_volume(N) * std::pow((p - N) / (p - 1.0), p - 1.0);
}

double punctured_linf_lower(int N, double p) {
  if (N < 1 || !(p > N)) throw ValidationError("punctured_linf_lower: needs p > N");
  const double w = unit_ball_volume(N);
  return N / std::pow(2.0, p) * std::pow(w / std::pow(2.0, N), p) * std::pow((p - N) / (p - 1.0), p - 1.0) * w;
}

EndpointBounds endpoint_bounds(const Exponents& e, double r, double lambda_p_ball,
                               double lambda_inf_ball) {
  const double N = e.N(), p = e.p();
  if (!(p > N)) throw ValidationError("endpoint_bounds: needs p > N");
  if (!(r > 0.0)) throw ValidationError("endpoint_bounds: r must be positive");
  EndpointBounds out;
  out.hardy_term = std::pow((p - N) / p, p);
  out.poincare_term = lambda_p_ball / std::pow(std::sqrt(N) + 1.0, p);
  out.beta = std::max(out.hardy_term, out.poincare_term);
  out.lambda_p_lower = out.beta / std::pow(r, p);
  out.lambda_inf_lower = lambda_inf_ball / std::pow(r, p - N);
  if (e.q() >= p) {
    double t = p * e.inv_q();
    out.interpolated_lower = std::pow(out.beta, t) * std::pow(lambda_inf_ball, 1.0 - t) *
                             std::pow(r, -(p - N + N * t));
  }
  return out;
}

BuserBounds buser_bounds(int k, double h, double r) {
  if (k < 1 || !(h > 0.0) || !(r > 0.0))
    throw ValidationError("buser_bounds: needs k >= 1, h > 0, r > 0");
  double t11 = theta(Exponents(2, 1.0, 1.0));
  return {t11 / (std::sqrt(double(k)) * r), std::pow(kJ01 / t11, 2.0) * k * h * h, 0.25 * h * h};
}

double scaling_exponent(const Exponents& e) { return e.p() - e.N() + e.N() * e.p() * e.inv_q(); }

}  // namespace pqfreq
