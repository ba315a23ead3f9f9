#include <cmath>
#include <random>

#include "pqfreq/solvers.hpp"

namespace pqfreq {

namespace {

Vec tilted_start(const DiscreteEnergy& E, std::uint64_t seed) {
  const GridFrame& f = E.frame;
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> noise(-1e-3, 1e-3);
  Vec x(static_cast<Eigen::Index>(E.num_free()));
  for (std::size_t k = 0; k < E.num_free(); ++k) {
    std::size_t idx = E.grid_node[E.free_node[k]];
    double y = f.dim == 2 ? f.y(f.row(idx)) : 0.0;
    x[static_cast<Eigen::Index>(k)] = f.x(f.col(idx)) + 0.37 * y + noise(gen);
  }
  return x;
}

void remove_mean(Vec& v, const std::vector<double>& mass) {
  double s = 0.0, w = 0.0;
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    s += mass[k] * v[k];
    w += mass[k];
  }
  v.array() -= s / w;
}

SolveReport finish(const DiscreteEnergy& E, const GridDomain& domain, const char* quantity, double value,
                   const Vec& x, int iterations, double residual, bool converged) {
  SolveReport rep;
  rep.quantity = quantity;
  rep.value = value;
  rep.h = domain.h();
  rep.iterations = iterations;
  rep.residual = residual;
  rep.converged = converged;
  rep.field = make_field(E, x, Boundary::free);
  return rep;
}

}  // namespace

SolveReport neumann_constant(const GridDomain& domain, const Exponents& e, const SolveOptions& options) {
  if (e.N() != domain.dim())
    throw ValidationError("neumann_constant: exponent dimension N differs from the domain dimension");
  if (e.q_infinite()) throw ValidationError("neumann_constant: q must be finite");
  if (e.q() < e.p()) throw ValidationError("neumann_constant: needs q >= p");
  if (!(e.p() > 1.0)) throw ValidationError("neumann_constant: p = 1 is not supported (nonsmooth quotient)");
  if (domain.inside_count() < 2) throw ValidationError("neumann_constant: needs at least two inside nodes");

  DiscreteEnergy E = neumann_energy(domain);
  const Eigen::Index n = static_cast<Eigen::Index>(E.num_free());
  Vec x = tilted_start(E, 0x5eedULL);

  // p = q = 2 start (and answer): first nonconstant eigenpair
  HessianAssembler H(E);
  SpMat A = H.assemble(Vec::Zero(n), 2.0, 0.0);
  SpMat K2 = A;
  double sigma = 1.0;
  for (Eigen::Index k = 0; k < n; ++k) A.coeffRef(k, k) += sigma * E.mass[k];
  SpdSolver T(options.backend);
  if (!T.compute(A)) throw std::runtime_error("neumann_constant: shifted matrix not positive definite");
  EigenOptions eo;
  eo.tol = std::min(options.tol, 1e-10);
  eo.max_iter = std::min(options.max_iter, 5000);
  eo.project = [&](Vec& v) { remove_mean(v, E.mass); };
  auto eig = smallest_eigenpair(K2, E.mass, x, T, eo);
  if (e.p() == 2.0 && e.q() == 2.0)
    return finish(E, domain, "mu", 0.5 * eig.value, eig.vector, eig.iterations, eig.residual, eig.converged);

  QuotientProblem prob{&E, e.p(), e.q(), true, false};
  auto res = minimize_quotient(prob, eig.vector, options);
  return finish(E, domain, "mu", res.value, res.x, res.iterations + eig.iterations, res.residual,
                res.converged);
}

SolveReport pinned_poincare(const GridDomain& domain, const std::vector<std::size_t>& pins, double p,
                            const SolveOptions& options) {
  if (!(p > 1.0)) throw ValidationError("pinned_poincare: needs p > 1");
  if (pins.empty()) throw ValidationError("pinned_poincare: needs at least one pinned node");
  DiscreteEnergy E = pinned_neumann_energy(domain, pins);
  const Eigen::Index n = static_cast<Eigen::Index>(E.num_free());
  HessianAssembler H(E);
  SpMat K2 = H.assemble(Vec::Zero(n), 2.0, 0.0);
  SpdSolver T(options.backend);
  if (!T.compute(K2))
    throw ValidationError("pinned_poincare: some component of the domain has no pinned node");
  EigenOptions eo;
  eo.tol = std::min(options.tol, 1e-10);
  eo.max_iter = std::min(options.max_iter, 5000);
  auto eig = smallest_eigenpair(K2, E.mass, Vec::Ones(n), T, eo);
  if (p == 2.0)
    return finish(E, domain, "pinned", 0.5 * eig.value, eig.vector, eig.iterations, eig.residual,
                  eig.converged);
  QuotientProblem prob{&E, p, p, false, true};
  auto res = minimize_quotient(prob, eig.vector.cwiseAbs(), options);
  return finish(E, domain, "pinned", res.value, res.x, res.iterations + eig.iterations, res.residual,
                res.converged);
}

}  // namespace pqfreq
