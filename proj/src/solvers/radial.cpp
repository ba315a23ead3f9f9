#include <cmath>

#include "pqfreq/solvers.hpp"

namespace pqfreq {

namespace {

// 1D energy on the graded mesh t_i = (i/n)^gamma with weights t^(N-1).
// Node 0 is pinned to 0; node n is pinned to 1 when `pin_end` is set.
DiscreteEnergy radial_energy(int N, int n, double gamma, bool pin_end, double scale,
                             std::vector<double>& t) {
  t.resize(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) t[i] = std::pow(static_cast<double>(i) / n, gamma);
  t[n] = 1.0;
  auto shell = [N](double a, double b) { return (std::pow(b, N) - std::pow(a, N)) / N; };

  DiscreteEnergy e;
  const int nodes = n + 1;
  e.free_id.assign(nodes, -1);
  e.fixed_value.assign(nodes, 0.0);
  const int last_free = pin_end ? n - 1 : n;
  for (int i = 1; i <= last_free; ++i) {
    e.free_id[i] = static_cast<std::int32_t>(e.free_node.size());
    e.free_node.push_back(i);
    double lo = 0.5 * (t[i - 1] + t[i]);
    double hi = i < n ? 0.5 * (t[i] + t[i + 1]) : 1.0;
    e.mass.push_back(scale * shell(lo, hi));
  }
  if (pin_end) e.fixed_value[n] = 1.0;
  for (int i = 0; i < n; ++i) {
    Stencil s{};
    s.weight = scale * shell(t[i], t[i + 1]);
    s.a[0] = i;
    s.b[0] = i + 1;
    s.scale[0] = 1.0 / (t[i + 1] - t[i]);
    s.ncomp = 1;
    e.stencils.push_back(s);
  }
  return e;
}

// N w_N * integral_0^1 |d/dt t^a|^p t^(N-1) dt by composite Simpson after
// t = s^m, which removes the endpoint singularity.
double profile_energy(int N, double p, double a) {
  const double m = std::ceil(2.0 / a);
  const int panels = 4000;
  auto f = [&](double s) {
    if (s == 0.0) return 0.0;
    double t = std::pow(s, m);
    double du = a * std::pow(t, a - 1.0);
    return std::pow(du, p) * std::pow(t, N - 1) * m * std::pow(s, m - 1.0);
  };
  double sum = f(0.0) + f(1.0);
  for (int k = 1; k < panels; ++k) sum += (k % 2 ? 4.0 : 2.0) * f(static_cast<double>(k) / panels);
  return N * unit_ball_volume(N) * sum / (3.0 * panels);
}

}  // namespace

SolveReport punctured_radial(int N, double p, RadialMode mode, int nodes, const SolveOptions& options) {
  if (N < 1) throw ValidationError("punctured_radial: N must be >= 1");
  if (!(p > N)) throw ValidationError("punctured_radial: needs p > N (points have zero capacity otherwise)");
  if (nodes < 1000) throw ValidationError("punctured_radial: needs at least 1000 nodes");
  const double gamma = 3.0;
  std::vector<double> t;
  SolveReport rep;
  rep.h = 1.0 / nodes;

  if (mode == RadialMode::Linf) {
    const double NwN = N * unit_ball_volume(N);
    DiscreteEnergy E = radial_energy(N, nodes, gamma, true, NwN, t);
    QuotientResult res = minimize_energy(E, p, options);
    rep.quantity = "punctured-linf";
    rep.value = res.value;
    rep.iterations = res.iterations;
    rep.residual = res.residual;
    rep.converged = res.converged;
    const double a = (p - N) / (p - 1.0);
    rep.diagnostics["closed_form"] = punctured_ball_value(N, p);
    rep.diagnostics["profile_energy"] = profile_energy(N, p, a);
    rep.diagnostics["relative_gap"] = res.value / punctured_ball_value(N, p) - 1.0;
    return rep;
  }

  DiscreteEnergy E = radial_energy(N, nodes, gamma, false, 1.0, t);
  const Eigen::Index n = static_cast<Eigen::Index>(E.num_free());
  HessianAssembler H(E);
  const SpMat K2 = H.assemble(Vec::Zero(n), 2.0, 0.0);
  SpdSolver T(options.backend);
  if (!T.compute(K2)) throw std::runtime_error("punctured_radial: singular system");
  Vec x0(n);
  for (Eigen::Index k = 0; k < n; ++k) x0[k] = t[static_cast<std::size_t>(k) + 1];
  EigenOptions eo;
  eo.tol = std::min(options.tol, 1e-11);
  auto eig = smallest_eigenpair(K2, E.mass, x0, T, eo);
  double value = 0.5 * eig.value;
  Vec x = eig.vector.cwiseAbs();
  int iterations = eig.iterations;
  double residual = eig.residual;
  bool converged = eig.converged;
  if (p != 2.0) {
    // The p = 2 eigenvector drops to 0 within one cell (points have zero
    // 2-capacity in the plane); start from the finite-energy profile t^a.
    const double a = (p - N) / (p - 1.0);
    for (Eigen::Index k = 0; k < n; ++k) x[k] = std::pow(t[static_cast<std::size_t>(k) + 1], a);
    QuotientProblem prob{&E, p, p, false, true};
    auto res = minimize_quotient(prob, x, options);
    value = res.value;
    iterations += res.iterations;
    residual = res.residual;
    converged = res.converged;
  }
  rep.quantity = "punctured-lp";
  rep.value = value;
  rep.iterations = iterations;
  rep.residual = residual;
  rep.converged = converged;
  return rep;
}

}  // namespace pqfreq
