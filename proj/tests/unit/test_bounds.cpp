#include <doctest.h>

#include <cmath>

#include "pqfreq/bounds.hpp"

using namespace pqfreq;

namespace {

// Independent evaluation of the closed forms, written from the formulas.
double oracle_mu(int N, double p, double q, double vol, double diam) {
  double wN = N == 1 ? 2.0 : N == 2 ? M_PI : 4.0 * M_PI / 3.0;
  double iq = std::isinf(q) ? 0.0 : 1.0 / q;
  double ratio = (1.0 / N - 1.0 / p + iq) / (1.0 - 1.0 / p + iq);
  return std::pow(N * std::pow(wN, 1.0 / N), p) * std::pow(vol / std::pow(diam, N), p) *
         std::pow(ratio, p - 1.0 + p * iq) * std::pow(vol, 1.0 - p / N - p * iq);
}

double oracle_A(int N, double p, double ecc) {
  return std::pow(4.0 * std::pow(6.0, 3 * N + p), 1.0 / p) * std::pow(ecc, 6.0 * N / p + 2.0);
}

double oracle_mazya(double p, double q, double ratio) {
  const int N = 2;
  double iq = std::isinf(q) ? 0.0 : 1.0 / q;
  double mu = oracle_mu(N, p, q, M_PI, 2.0);
  double bracket = std::pow(M_PI, iq) + 4.0 * std::pow(M_PI, 1.0 / p) / (1.0 - std::sqrt(2.0) * ratio) *
                                            std::pow(mu, -1.0 / p);
  return std::pow(ratio, 4.0 * N / p + N * iq) / (oracle_A(N, p, std::sqrt(2.0)) * bracket);
}

double oracle_theta(double p, double q) {
  double iq = std::isinf(q) ? 0.0 : 1.0 / q;
  return std::pow(oracle_mazya(p, q, 0.5), p) / (std::pow(2.0, p) * std::pow(10.0, p - 1.0 + 2.0 * p * iq));
}

}  // namespace

TEST_CASE("exponent admissibility") {
  CHECK(Exponents::admissible(2, 1.0, 2.0));
  CHECK_FALSE(Exponents::admissible(2, 1.0, 2.5));
  CHECK_FALSE(Exponents::admissible(2, 2.0, kInf));
  CHECK(Exponents::admissible(2, 4.0, kInf));
  CHECK(Exponents::admissible(1, 2.0, kInf));
  CHECK_THROWS_AS(Exponents(2, 0.5, 1.0), ValidationError);
  CHECK(Exponents(2, 1.5, 2.0).p_star() == doctest::Approx(6.0));
}

TEST_CASE("mu lower bound") {
  // frozen from the oracle
  CHECK(mu_lower_bound(Exponents(2, 1, 1), M_PI, 2.0) == doctest::Approx(0.785398163397448).epsilon(1e-13));
  CHECK(mu_lower_bound(Exponents(2, 2, 2), M_PI, 2.0) == doctest::Approx(0.616850275068085).epsilon(1e-13));
  for (auto [p, q] : {std::pair{1.5, 2.0}, {2.0, 5.0}, {4.0, kInf}, {3.0, 3.0}})
    CHECK(mu_lower_bound(Exponents(2, p, q), 1.7, 1.9) ==
          doctest::Approx(oracle_mu(2, p, q, 1.7, 1.9)).epsilon(1e-12));
  // dilation t: value scales by t^-(scaling exponent)
  double t = 1.7, v = mu_lower_bound(Exponents(2, 2, 2), M_PI, 2.0);
  CHECK(mu_lower_bound(Exponents(2, 2, 2), t * t * M_PI, 2.0 * t) == doctest::Approx(v / (t * t)).epsilon(1e-12));
}

TEST_CASE("extension constants") {
  CHECK(extension_constants(Exponents(2, 2, 2), std::sqrt(2.0)).alpha == doctest::Approx(41472.0).epsilon(1e-12));
  CHECK(extension_constants(Exponents(2, 1, 1), std::sqrt(2.0)).alpha == doctest::Approx(143327232.0).epsilon(1e-12));
  auto c = extension_constants(Exponents(2, 3, 3), 1.4);
  CHECK(c.A == doctest::Approx(oracle_A(2, 3, 1.4)).epsilon(1e-12));
  CHECK(c.B == doctest::Approx(std::pow(2.0 * 36.0, 1.0 / 3.0) * std::pow(1.4, 4.0 / 3.0)).epsilon(1e-12));
  // ecc = 1, large p: B -> 1, A -> 6
  auto big = extension_constants(Exponents(2, 400, 400), 1.0);
  CHECK(big.B == doctest::Approx(1.0).epsilon(0.02));
  CHECK(big.A == doctest::Approx(6.0).epsilon(0.05));
}

TEST_CASE("capacitary Poincare constant") {
  double c = mazya_constant(Exponents(2, 1, 1), 0.5);
  CHECK(c == doctest::Approx(1.17944150665935e-13).epsilon(1e-11));
  CHECK(c == doctest::Approx(oracle_mazya(1, 1, 0.5)).epsilon(1e-12));
  CHECK(mazya_constant(Exponents(2, 1, 1), 1.0 / std::sqrt(2.0) - 1e-9) < 1e-6 * c);
  CHECK_THROWS_AS(mazya_constant(Exponents(2, 1, 1), 0.75), ValidationError);
  // increasing in the plugged-in ball constant
  double mu = mu_lower_bound(Exponents(2, 2, 2), M_PI, 2.0);
  CHECK(mazya_constant(Exponents(2, 2, 2), 0.5, 2.0 * mu) > mazya_constant(Exponents(2, 2, 2), 0.5, mu));
}

TEST_CASE("theta values and composition") {
  CHECK(theta(Exponents(2, 1, 1)) == doctest::Approx(5.89720753329675e-16).epsilon(1e-11));
  CHECK(theta(Exponents(2, 2, 2)) == doctest::Approx(1.33625739064401e-19).epsilon(1e-11));
  CHECK(theta(Exponents(2, 4, kInf)) == doctest::Approx(5.24766635484306e-24).epsilon(1e-11));
  CHECK(theta(Exponents(2, 1, 1)) == doctest::Approx(mazya_constant(Exponents(2, 1, 1), 0.5) / 200.0));
  CHECK(theta(Exponents(2, 2, 2)) ==
        doctest::Approx(std::pow(mazya_constant(Exponents(2, 2, 2), 0.5), 2) / 8000.0));
  for (auto [p, q] : {std::pair{1.5, 2.0}, {2.0, 4.0}, {4.0, 4.0}, {1.0, 1.8}})
    CHECK(theta(Exponents(2, p, q)) == doctest::Approx(oracle_theta(p, q)).epsilon(1e-11));
  CHECK(theta_lower_bound(Exponents(2, 2, 2), 1, 1.0) < 5.7832);
}

TEST_CASE("theta rejects q < p") {
  CHECK_THROWS_AS(theta(Exponents(2, 2, 1)), ValidationError);
  CHECK_THROWS_AS(check_theta_exponents(Exponents(2, 2, 1.5)), ValidationError);
  CHECK_THROWS_AS(check_theta_exponents(Exponents(3, 2, 2)), ValidationError);
}

TEST_CASE("theta lower bound is non-increasing in k and r") {
  for (auto [p, q] : {std::pair{1.0, 1.0}, {1.5, 2.0}, {2.0, 2.0}, {2.0, 4.0}, {4.0, 4.0}, {4.0, kInf}}) {
    Exponents e(2, p, q);
    double prev_k = kInf;
    for (int k = 1; k <= 64; k *= 2) {
      double v = theta_lower_bound(e, k, 0.7);
      CHECK(v <= prev_k);
      prev_k = v;
    }
    double prev_r = kInf;
    for (double r = 0.1; r < 10; r *= 1.7) {
      double v = theta_lower_bound(e, 3, r);
      CHECK(v <= prev_r);
      prev_r = v;
    }
  }
}

TEST_CASE("bound evaluators are homogeneous of the scaling degree") {
  const double t = 2.3;
  for (auto [p, q] : {std::pair{1.0, 1.0}, {1.5, 2.0}, {2.0, 2.0}, {2.0, 4.0}, {4.0, 4.0}, {4.0, kInf}}) {
    Exponents e(2, p, q);
    double d = scaling_exponent(e);
    CHECK(theta_lower_bound(e, 5, t * 0.4) == doctest::Approx(theta_lower_bound(e, 5, 0.4) * std::pow(t, -d)).epsilon(1e-12));
    if (q >= p) {
      double v = mu_lower_bound(e, 1.3, 1.6);
      CHECK(mu_lower_bound(e, t * t * 1.3, t * 1.6) == doctest::Approx(v * std::pow(t, -d)).epsilon(1e-12));
    }
    if (p > 2) {
      EndpointBounds a = endpoint_bounds(e, 0.4, 1.3, 0.05), b = endpoint_bounds(e, t * 0.4, 1.3, 0.05);
      double va = std::isinf(q) ? a.lambda_inf_lower : *a.interpolated_lower;
      double vb = std::isinf(q) ? b.lambda_inf_lower : *b.interpolated_lower;
      CHECK(vb == doctest::Approx(va * std::pow(t, -d)).epsilon(1e-12));
    }
  }
}

TEST_CASE("scaling exponent") {
  CHECK(scaling_exponent(Exponents(2, 2, 2)) == 2.0);
  CHECK(scaling_exponent(Exponents(2, 3, 3)) == 3.0);
  CHECK(scaling_exponent(Exponents(2, 4, kInf)) == 2.0);
  CHECK(scaling_exponent(Exponents(2, 2, 1)) == doctest::Approx(4.0));
}

TEST_CASE("closed-form capacities") {
  auto mid = interval_point_capacity(2, 0, 1, 0.5);
  CHECK(mid.exact == doctest::Approx(4.0));
  CHECK(mid.lower_bound == doctest::Approx(4.0));
  auto quarter = interval_point_capacity(2, 0, 1, 0.25);
  CHECK(quarter.exact == doctest::Approx(16.0 / 3.0));
  CHECK(quarter.exact >= quarter.lower_bound);
  CHECK(interval_point_capacity(1, 0, 3, 1).exact == 2.0);
  CHECK(disk_relative_capacity(0.01) == doctest::Approx(2.0 * M_PI / std::log(100.0)));
  CHECK(punctured_ball_value(2, 4) == doctest::Approx(16.0 * M_PI / 27.0).epsilon(1e-14));
  CHECK_THROWS_AS(punctured_ball_value(2, 2), ValidationError);
  CHECK_THROWS_AS(interval_point_capacity(2, 0, 1, 1.5), ValidationError);
  CHECK_THROWS_AS(disk_relative_capacity(1.0), ValidationError);
}

TEST_CASE("point capacity lower bound holds across p and positions") {
  for (double p : {1.0, 1.5, 2.0, 3.0, 6.0})
    for (double x0 : {0.1, 0.3, 0.5, 0.77}) {
      auto c = interval_point_capacity(p, -0.5, 1.5, x0);
      CHECK(c.exact >= c.lower_bound * (1 - 1e-14));
    }
}

TEST_CASE("endpoint bounds") {
  Exponents e(2, 4, 4);
  EndpointBounds b = endpoint_bounds(e, 1.0, 0.0, 1.0);
  CHECK(b.hardy_term == doctest::Approx(0.0625));
  CHECK(b.beta == doctest::Approx(0.0625));
  EndpointBounds c = endpoint_bounds(e, 0.5, 100.0, 1.0);
  CHECK(c.beta == doctest::Approx(100.0 / std::pow(std::sqrt(2.0) + 1.0, 4)));
  CHECK(c.lambda_p_lower == doctest::Approx(c.beta / std::pow(0.5, 4)));
  CHECK(*c.interpolated_lower == doctest::Approx(c.lambda_p_lower));
  EndpointBounds d = endpoint_bounds(Exponents(2, 4, kInf), 0.5, 100.0, 1.3);
  CHECK(*d.interpolated_lower == doctest::Approx(d.lambda_inf_lower));
  CHECK(d.lambda_inf_lower == doctest::Approx(1.3 / 0.25));
  CHECK_THROWS_AS(endpoint_bounds(Exponents(2, 2, 2), 1.0, 1.0, 1.0), ValidationError);
}

TEST_CASE("punctured L-infinity lower bound sits below the radial value") {
  for (double p : {2.1, 3.0, 4.0, 8.0}) {
    double lo = punctured_linf_lower(2, p);
    CHECK(lo > 0.0);
    CHECK(lo < punctured_ball_value(2, p));
  }
}

TEST_CASE("Buser bounds") {
  BuserBounds b = buser_bounds(1, 2.0, 1.0);
  CHECK(b.lambda_lower == doctest::Approx(1.0));
  CHECK(b.lambda_lower <= 5.7832);
  CHECK(b.cheeger_lower == doctest::Approx(theta(Exponents(2, 1, 1))));
  CHECK(b.cheeger_lower < 1e-9);
  BuserBounds b2 = buser_bounds(1, 4.0, 1.0);
  CHECK(b2.buser_upper == doctest::Approx(4.0 * b.buser_upper));
  CHECK(buser_bounds(4, 1.0, 1.0).cheeger_lower == doctest::Approx(theta(Exponents(2, 1, 1)) / 2.0));
}

TEST_CASE("theta near the critical exponent stays in a positive bracket for p < 2") {
  // fixed positive ball constant; the closed-form mu bound degenerates at q = p*
  for (double p : {1.2, 1.5}) {
    double ps = 2.0 * p / (2.0 - p);
    double end = theta(Exponents(2, p, ps * (1 - 1e-6)), 0.5);
    for (double f : {0.9, 0.99, 0.999}) {
      double v = theta(Exponents(2, p, ps * f), 0.5);
      CHECK(v >= 0.5 * end);
      CHECK(v <= 2.0 * end);
    }
  }
}

TEST_CASE("bound rows") {
  BoundRow lo = lower_bound_row("x", 1.0, 1.05, 0.1);
  CHECK(lo.margin == doctest::Approx(-0.05));
  CHECK(lo.pass);
  BoundRow up = upper_bound_row("y", 2.0, 1.0, 0.5);
  CHECK(up.margin == doctest::Approx(-1.0));
  CHECK_FALSE(up.pass);
}
