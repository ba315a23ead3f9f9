#include <algorithm>
#include <cmath>
#include <optional>

#include "pqfreq/solvers.hpp"

namespace pqfreq {

namespace {

struct GridValue {
  double value = 0.0;
  Vec x;
  int iterations = 0;
  double residual = 0.0;
  bool converged = false;
};

// Smallest eigenvalue of E(x) = x^T K x against the lumped mass.
GridValue dirichlet_eigen(const DiscreteEnergy& E, const SolveOptions& options) {
  HessianAssembler H(E);
  const Eigen::Index n = static_cast<Eigen::Index>(E.num_free());
  const SpMat& K2 = H.assemble(Vec::Zero(n), 2.0, 0.0);
  SpdSolver T(options.backend);
  if (!T.compute(K2)) throw std::runtime_error("Dirichlet matrix is not positive definite");
  EigenOptions eo;
  eo.tol = std::min(options.tol, 1e-10);
  eo.max_iter = std::min(options.max_iter, 5000);
  auto res = smallest_eigenpair(K2, E.mass, Vec::Ones(n), T, eo);
  return {0.5 * res.value, res.vector.cwiseAbs(), res.iterations, res.residual, res.converged};
}

GridValue torsion(const DiscreteEnergy& E, const SolveOptions& options) {
  HessianAssembler H(E);
  const Eigen::Index n = static_cast<Eigen::Index>(E.num_free());
  const SpMat& K2 = H.assemble(Vec::Zero(n), 2.0, 0.0);
  SpdSolver T(options.backend);
  if (!T.compute(K2)) throw std::runtime_error("Dirichlet matrix is not positive definite");
  Vec m = Eigen::Map<const Vec>(E.mass.data(), n);
  Vec w = T.solve(m);  // K2 w = m, so K^{-1} m = 2w
  double mKm = 2.0 * m.dot(w);
  Vec x = w / m.dot(w);  // unit L^1 norm
  return {1.0 / mKm, x, 1, 0.0, true};
}

// Parabolic bumps on the inscribed disks at the deepest distance peaks.
std::vector<Vec> localized_starts(const GridDomain& dom, const DiscreteEnergy& E, std::size_t count) {
  const GridFrame& f = dom.frame();
  auto dist = squared_distance_transform(dom);
  std::vector<Vec> out;
  for (auto c : distance_peaks(dom, dist, count)) {
    std::vector<double> v(f.size(), 0.0);
    const double rho2 = dist[c];
    for (auto idx : dom.inside_nodes()) {
      double di = f.col(idx) - f.col(c), dj = f.row(idx) - f.row(c);
      v[idx] = std::max(0.0, 1.0 - (di * di + dj * dj) / rho2);
    }
    out.push_back(E.from_grid(v));
  }
  return out;
}

GridValue solve_on_grid(const GridDomain& dom, const DiscreteEnergy& E, const Exponents& e,
                        const SolveOptions& options) {
  const double p = e.p(), q = e.q();
  if (p == 2.0 && q == 2.0) return dirichlet_eigen(E, options);
  if (p == 2.0 && q == 1.0) return torsion(E, options);
  GridValue init = dirichlet_eigen(E, options);
  QuotientProblem prob{&E, p, q, false, true};
  auto res = minimize_quotient(prob, init.x, options);
  GridValue best{res.value, res.x, res.iterations + init.iterations, res.residual, res.converged};
  // q > p favours concentration; the symmetric branch can be a local minimum
  if (q > p && dom.dim() == 2) {
    SolveOptions rough = options;
    rough.tol = std::max(options.tol, 1e-5);
    std::optional<Vec> lead;
    double lead_value = best.value;
    for (const Vec& x0 : localized_starts(dom, E, 3)) {
      auto r = minimize_quotient(prob, x0, rough);
      best.iterations += r.iterations;
      if (r.value < lead_value) {
        lead_value = r.value;
        lead = r.x;
      }
    }
    if (lead) {
      auto r = minimize_quotient(prob, *lead, options);
      best.iterations += r.iterations;
      if (r.value < best.value) {
        best.value = r.value;
        best.x = r.x;
        best.residual = r.residual;
        best.converged = r.converged;
      }
    }
  }
  return best;
}

}  // namespace

SolveReport principal_frequency(const GridDomain& domain, const Exponents& e,
                                const SolveOptions& options) {
  if (e.N() != domain.dim())
    throw ValidationError("principal_frequency: exponent dimension N differs from the domain dimension");
  if (e.q_infinite())
    throw ValidationError("principal_frequency: q = inf is handled by linf_frequency (lambda-inf)");
  if (e.p() == 1.0) {
    if (e.q() != 1.0 || domain.dim() != 2)
      throw ValidationError("principal_frequency: p = 1 is only supported for q = 1 in 2D (Cheeger constant)");
    auto rep = cheeger_maxflow(domain, options);
    rep.quantity = "lambda";
    return rep;
  }

  DiscreteEnergy E = dirichlet_energy(domain);
  GridValue gv = solve_on_grid(domain, E, e, options);
  SolveReport rep;
  rep.quantity = "lambda";
  rep.value = gv.value;
  rep.h = domain.h();
  rep.iterations = gv.iterations;
  rep.residual = gv.residual;
  rep.converged = gv.converged;
  rep.field = make_field(E, gv.x, Boundary::zero_extension);

  if (options.refine >= 2 && domain.spec()) {
    DomainSpec fine = *domain.spec();
    fine.h *= 0.5;
    BuildOptions bo;
    bo.node_budget = options.node_budget;
    GridDomain d2 = build_domain(fine, bo);
    GridValue gv2 = solve_on_grid(d2, dirichlet_energy(d2), e, options);
    rep.diagnostics["value_half_h"] = gv2.value;
    rep.extrapolated = 2.0 * gv2.value - gv.value;
    rep.converged = rep.converged && gv2.converged;
  }
  return rep;
}

}  // namespace pqfreq
