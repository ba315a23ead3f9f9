#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pqfreq/common.hpp"

namespace pqfreq {

// (N, p, q) with q possibly infinite. Construction enforces the embedding
// admissibility: q <= p* for p < N, q < inf for p = N.
class Exponents {
 public:
  Exponents(int N, double p, double q);

  int N() const { return N_; }
  double p() const { return p_; }
  double q() const { return q_; }
  bool q_infinite() const { return q_ == kInf; }
  // 1/q, reading 0 at q = inf.
  double inv_q() const { return q_infinite() ? 0.0 : 1.0 / q_; }
  // Critical Sobolev exponent Np/(N-p); infinite for p >= N.
  double p_star() const;

  static bool admissible(int N, double p, double q);
  std::string to_string() const;

 private:
  int N_;
  double p_;
  double q_;
};

// Lower bound for the Poincare-Wirtinger constant of a convex set.
double mu_lower_bound(const Exponents& e, double volume, double diameter);

struct ExtensionConstants {
  double A;      // gradient bound factor
  double B;      // L^p bound factor
  double alpha;  // A at eccentricity sqrt(N)
};
ExtensionConstants extension_constants(const Exponents& e, double eccentricity);

// Constant of the capacitary Poincare inequality on cubes, for d/D in
// (0, 1/sqrt N). The ball constant mu_{p,q}(B_1) defaults to its closed-form
// lower bound; `mu_ball` overrides it.
double mazya_constant(const Exponents& e, double ratio, std::optional<double> mu_ball = std::nullopt);

// Exponent pairs accepted by the multiply-connected lower bound (N = 2):
// p <= q, q < p* for p < 2, q < inf for p = 2.
void check_theta_exponents(const Exponents& e);

double theta(const Exponents& e, std::optional<double> mu_ball = std::nullopt);
// theta(e) * (sqrt(k) r)^-(p - 2 + 2p/q)
double theta_lower_bound(const Exponents& e, int k, double r);

struct IntervalPointCapacity {
  double exact;
  double lower_bound;  // 2^p / (b - a)^(p-1)
};
IntervalPointCapacity interval_point_capacity(double p, double a, double b, double x0);
// cap_2(B_eps; B_1) in the plane.
double disk_relative_capacity(double eps);
// N w_N ((p-N)/(p-1))^(p-1): energy of the profile t^((p-N)/(p-1)) on B_1.
double punctured_ball_value(int N, double p);
// Proven lower bound for Lambda_{p,inf}(B_1 \ {0}):
// (N / 2^p) (w_N / 2^N)^p ((p-N)/(p-1))^(p-1) w_N.
double punctured_linf_lower(int N, double p);

struct EndpointBounds {
  double beta;
  double hardy_term;       // ((p-N)/p)^p
  double poincare_term;    // Lambda_p / (sqrt N + 1)^p
  double lambda_p_lower;   // beta / r^p
  double lambda_inf_lower; // Lambda_inf / r^(p-N)
  std::optional<double> interpolated_lower;  // for q given, p <= q <= inf
};
EndpointBounds endpoint_bounds(const Exponents& e, double r, double lambda_p_ball,
                               double lambda_inf_ball);

struct BuserBounds {
  double cheeger_lower;  // Theta_11 / (sqrt k r)
  double buser_upper;    // (j01 / Theta_11)^2 k h^2
  double lambda_lower;   // (h/2)^2
};
BuserBounds buser_bounds(int k, double h, double r);

// Degree d with lambda_{p,q}(t Omega) = t^-d lambda_{p,q}(Omega).
double scaling_exponent(const Exponents& e);

// One verification record. Lower bounds: margin = target - bound. Upper
// bounds: margin = bound - target. pass iff margin >= -tolerance.
struct BoundRow {
  std::string domain;
  std::string exponents;
  std::string label;
  std::string kind;  // "lower" or "upper"
  double r = 0.0;
  int k = 0;
  double volume = 0.0;
  double diameter = 0.0;
  double target = 0.0;
  double bound = 0.0;
  double tolerance = 0.0;
  double margin = 0.0;
  bool pass = false;
  bool solver_failed = false;
  std::string note;
};

BoundRow lower_bound_row(std::string label, double target, double bound, double tolerance);
BoundRow upper_bound_row(std::string label, double target, double bound, double tolerance);

}  // namespace pqfreq
