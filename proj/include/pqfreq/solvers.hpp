#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pqfreq/bounds.hpp"
#include "pqfreq/energy.hpp"
#include "pqfreq/geometry.hpp"
#include "pqfreq/linalg.hpp"

namespace pqfreq {

enum class Boundary { zero_extension, free };

struct Field {
  GridFrame frame;
  std::vector<double> values;  // one per grid node
  Boundary boundary = Boundary::zero_extension;
};

struct SolveOptions {
  double tol = 1e-8;        // relative change of the objective
  int max_iter = 10000;
  int refine = 1;           // 2: also solve at h/2 and Richardson-extrapolate
  LinearBackend backend = LinearBackend::cholesky;
  std::size_t node_budget = 16'000'000;
};

struct SolveReport {
  std::string quantity;
  double value = 0.0;
  std::optional<double> extrapolated;
  double h = 0.0;
  int iterations = 0;
  double residual = 0.0;
  bool converged = false;
  Field field;
  std::map<std::string, double> diagnostics;
};

// lambda_{p,q} over fields vanishing outside the domain. (2,2) is an
// eigenproblem, (2,1) a torsion solve, (1,1) the Cheeger constant; other
// pairs use preconditioned descent on the quotient. q = inf is rejected.
SolveReport principal_frequency(const GridDomain& domain, const Exponents& e,
                                const SolveOptions& options = {});

// lambda_{p,inf} = min over nodes z of cap_p({z}; domain), p > dim.
SolveReport linf_frequency(const GridDomain& domain, double p, const SolveOptions& options = {});

// Minimal discrete p-energy over fields equal to 1 on the obstacle and 0
// outside the container. p = 1 is a minimum cut.
SolveReport capacity(const GridDomain& container, const ObstacleSet& obstacle, double p,
                     const SolveOptions& options = {});

enum class RadialMode { Lp, Linf };
// Punctured-ball constants on B_1 \ {0} in R^N through the radial reduction.
SolveReport punctured_radial(int N, double p, RadialMode mode, int nodes = 2000,
                             const SolveOptions& options = {});

// mu_{p,q}: free-boundary quotient ||grad u||_p^p / min_t ||u - t||_q^p.
SolveReport neumann_constant(const GridDomain& domain, const Exponents& e,
                             const SolveOptions& options = {});

// Poincare constant of the domain with the listed inside nodes pinned to 0
// and free boundary elsewhere (punctured cells, pepper reference).
SolveReport pinned_poincare(const GridDomain& domain, const std::vector<std::size_t>& pins, double p,
                            const SolveOptions& options = {});

// Geo-cut perimeter of a node set over the 8-neighbourhood; nodes outside
// the domain never belong to the set.
double geo_perimeter(const GridDomain& domain, const std::vector<std::uint8_t>& in_set);
// Edge weights (length units) for axis and diagonal neighbours.
std::pair<double, double> geo_weights(double h);

// Minimum geo-cut separating the obstacle from the complement: the p = 1 capacity.
SolveReport cut_capacity(const GridDomain& container, const ObstacleSet& obstacle);

SolveReport cheeger_maxflow(const GridDomain& domain, const SolveOptions& options = {});

SolveReport lambda11_tv(const GridDomain& domain, const SolveOptions& options = {},
                        const std::optional<Field>& initial = std::nullopt);

struct ExtensionReport {
  Field extension;  // on a grid covering B_R(x0)
  double norm_u = 0.0, norm_ext = 0.0;
  double grad_u = 0.0, grad_ext = 0.0;
  double factor_lp = 0.0;    // 2^(1/p) (R/r)^(2N/p)
  double factor_grad = 0.0;  // 4^(1/p) (R/r)^(4N/p)
  double slack = 0.05;
  bool lp_ok = false;
  bool grad_ok = false;
};
// Kelvin extension of u from the disk B_r(x0) to B_R(x0). `u` lives on the
// disk's grid; values are read at inside nodes only.
ExtensionReport extend_inversion(const GridDomain& disk, const Field& u, std::array<double, 2> x0,
                                 double r, double R, double p);

struct SymmetrizeReport {
  Field field;
  double energy_before = 0.0;
  double energy_after = 0.0;
  double lp_before = 0.0;  // sum h^2 |u|^p
  double lp_after = 0.0;
};
// Reflection averaging sigma <- ((|sigma|^p + |sigma o R_i|^p)/2)^(1/p) over
// both axes of a square domain centred in its window.
SymmetrizeReport symmetrize(const GridDomain& cube, const Field& u, double p);
// Reflection-invariant discrete p-energy: mean over the four one-sided
// difference pairs, zero extension outside the domain.
double symmetric_energy(const GridDomain& domain, const Field& u, double p);

// Quotient machinery, exposed for gradient checks.
struct QuotientProblem {
  const DiscreteEnergy* energy = nullptr;
  double p = 2.0;
  double q = 2.0;
  bool shift = false;     // subtract the optimal constant t_u (free boundary)
  bool positive = true;   // replace iterates by |x| (zero-extension problems)
};
double optimal_shift(const Vec& x, const std::vector<double>& mass, double q);
double quotient_value(const QuotientProblem& prob, const Vec& x);
void quotient_gradient(const QuotientProblem& prob, const Vec& x, Vec& grad);

struct QuotientResult {
  double value = 0.0;
  Vec x;
  int iterations = 0;
  double residual = 0.0;
  bool converged = false;
};
QuotientResult minimize_quotient(const QuotientProblem& prob, Vec x0, const SolveOptions& options);

// Damped Newton on the fixed-boundary energy E(x) = sum w |G x|^p, started
// from the p = 2 minimizer. Used by capacity and the radial reduction.
QuotientResult minimize_energy(const DiscreteEnergy& energy, double p, const SolveOptions& options);

Field make_field(const DiscreteEnergy& energy, const Vec& x, Boundary boundary);

}  // namespace pqfreq
