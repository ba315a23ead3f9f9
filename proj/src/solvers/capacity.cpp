#include <algorithm>
#include <cmath>
#include <map>

#include "pqfreq/solvers.hpp"

namespace pqfreq {

namespace {

double gradient_scale(const DiscreteEnergy& e, const Vec& x) {
  double W = 0.0;
  for (const auto& s : e.stencils) W += s.weight;
  return W > 0.0 ? std::sqrt(e.energy(x, 2.0) / W) : 1.0;
}

}  // namespace

QuotientResult minimize_energy(const DiscreteEnergy& E, double p, const SolveOptions& options) {
  const Eigen::Index n = static_cast<Eigen::Index>(E.num_free());
  QuotientResult out;
  if (n == 0) {
    out.value = E.energy(Vec(), p);
    out.converged = true;
    return out;
  }
  HessianAssembler H(E);
  SpdSolver solver(options.backend);
  Vec x = Vec::Zero(n);
  Vec g;
  // harmonic start: one linear solve, exact for p = 2
  E.gradient(x, 2.0, g);
  if (!solver.compute(H.assemble(x, 2.0, 0.0))) throw std::runtime_error("energy: singular system");
  x = -solver.solve(g);
  out.iterations = 1;
  out.converged = true;

  if (p != 2.0) {
    out.converged = false;
    double En = E.energy(x, p);
    int small = 0;
    for (int it = 1; it <= std::min(options.max_iter, 500); ++it) {
      E.gradient(x, p, g);
      double eta = 1e-4 * gradient_scale(E, x);
      if (!solver.compute(H.assemble(x, p, eta))) break;
      Vec d = -solver.solve(g);
      double slope = g.dot(d);
      if (!(slope < 0.0)) {
        d = -g;
        slope = -g.squaredNorm();
      }
      double t = 1.0, Et = E.energy(x + d, p);
      int halvings = 0;
      while (!(Et <= En + 1e-4 * t * slope) && halvings < 60) {
        t *= 0.5;
        ++halvings;
        Et = E.energy(x + t * d, p);
      }
      out.iterations = it + 1;
      if (!(Et <= En)) {
        out.converged = true;
        break;
      }
      x += t * d;
      out.residual = (En - Et) / std::abs(Et);
      En = Et;
      small = out.residual < options.tol ? small + 1 : 0;
      if (small >= 2 || slope == 0.0) {
        out.converged = true;
        break;
      }
    }
  }
  out.value = E.energy(x, p);
  out.x = std::move(x);
  return out;
}

SolveReport capacity(const GridDomain& container, const ObstacleSet& obstacle, double p,
                     const SolveOptions& options) {
  if (!(p >= 1.0)) throw ValidationError("capacity: p must be >= 1");
  if (p == 1.0) {
    if (container.dim() != 2) throw ValidationError("capacity: p = 1 needs a 2D container");
    return cut_capacity(container, obstacle);
  }
  DiscreteEnergy E = capacity_energy(container, obstacle);
  QuotientResult res = minimize_energy(E, p, options);
  // truncation to [0, 1] never increases the energy
  Vec x = res.x.size() ? Vec(res.x.cwiseMax(0.0).cwiseMin(1.0)) : Vec();
  SolveReport rep;
  rep.quantity = "capacity";
  rep.h = container.h();
  rep.value = E.energy(x, p);
  rep.iterations = res.iterations;
  rep.residual = res.residual;
  rep.converged = res.converged;
  rep.field = make_field(E, x, Boundary::zero_extension);
  return rep;
}

SolveReport linf_frequency(const GridDomain& domain, double p, const SolveOptions& options) {
  if (!(p > domain.dim()))
    throw ValidationError("linf_frequency: needs p > dim (points have zero capacity otherwise)");
  const GridFrame& g = domain.frame();

  auto run = [&](const GridDomain& dom) {
    const GridFrame& f = dom.frame();
    auto dist = squared_distance_transform(dom);
    std::vector<std::size_t> cands = distance_peaks(dom, dist, 6);

    std::map<std::size_t, SolveReport> cache;
    auto eval = [&](std::size_t node) -> const SolveReport& {
      auto it = cache.find(node);
      if (it != cache.end()) return it->second;
      SolveOptions o = options;
      o.refine = 1;
      return cache.emplace(node, capacity(dom, ObstacleSet::single(f, node), p, o)).first->second;
    };

    std::size_t best = cands.front();
    for (auto c : cands)
      if (eval(c).value < eval(best).value) best = c;

    // pattern search around the best candidate
    int step = std::max(1, static_cast<int>(std::lround(0.25 * std::sqrt(dist[best]))));
    while (step >= 1) {
      bool moved = false;
      for (int dj = -1; dj <= 1; ++dj)
        for (int di = -1; di <= 1; ++di) {
          if (di == 0 && dj == 0) continue;
          int a = f.col(best) + di * step, b = f.row(best) + dj * step;
          if (!dom.inside(a, b)) continue;
          std::size_t nb = f.index(a, b);
          if (eval(nb).value < eval(best).value) {
            best = nb;
            moved = true;
          }
        }
      if (!moved) step /= 2;
    }
    SolveReport rep = eval(best);
    rep.diagnostics["evaluations"] = static_cast<double>(cache.size());
    rep.diagnostics["candidates"] = static_cast<double>(cands.size());
    rep.diagnostics["peak_x"] = f.x(f.col(best));
    rep.diagnostics["peak_y"] = f.dim == 2 ? f.y(f.row(best)) : 0.0;
    bool all = true;
    for (const auto& [node, r] : cache) all = all && r.converged;
    rep.converged = all;
    return rep;
  };

  SolveReport rep = run(domain);
  rep.quantity = "lambda-inf";
  rep.h = g.h;
  if (options.refine >= 2 && domain.spec()) {
    DomainSpec fine = *domain.spec();
    fine.h *= 0.5;
    BuildOptions bo;
    bo.node_budget = options.node_budget;
    SolveReport fine_rep = run(build_domain(fine, bo));
    rep.diagnostics["value_half_h"] = fine_rep.value;
    // error ~ h^a with a = (p - N)/(p - 1), the point singularity of the capacity potential
    const double r = std::pow(0.5, (p - domain.dim()) / (p - 1.0));
    rep.extrapolated = (fine_rep.value - r * rep.value) / (1.0 - r);
    rep.diagnostics["extrapolation_rate"] = (p - domain.dim()) / (p - 1.0);
  }
  return rep;
}

}  // namespace pqfreq
