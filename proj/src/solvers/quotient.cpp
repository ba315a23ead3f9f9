#include <algorithm>
#include <cmath>
#include <numeric>

#include "pqfreq/solvers.hpp"

namespace pqfreq {

double optimal_shift(const Vec& x, const std::vector<double>& mass, double q) {
  const Eigen::Index n = x.size();
  if (n == 0) return 0.0;
  if (q == 2.0) {
    double s = 0.0, w = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) {
      s += mass[k] * x[k];
      w += mass[k];
    }
    return s / w;
  }
  if (q == 1.0) {
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return x[a] < x[b]; });
    double total = std::accumulate(mass.begin(), mass.begin() + n, 0.0);
    double acc = 0.0;
    for (auto k : order) {
      acc += mass[k];
      if (acc >= 0.5 * total) return x[k];
    }
    return x[order.back()];
  }
  // sum m |x - t|^(q-1) sign(x - t) is decreasing in t; bisect its root.
  double lo = x.minCoeff(), hi = x.maxCoeff();
  auto phi = [&](double t) {
    double s = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) {
      double d = x[k] - t;
      s += mass[k] * std::copysign(std::pow(std::abs(d), q - 1.0), d);
    }
    return s;
  };
  for (int it = 0; it < 200 && hi - lo > 1e-15 * (std::abs(lo) + std::abs(hi) + 1e-300); ++it) {
    double mid = 0.5 * (lo + hi);
    if (phi(mid) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

namespace {

struct Denominator {
  double t = 0.0;
  double S = 0.0;  // sum m |x - t|^q
  double D = 0.0;  // S^(p/q)
};

Denominator denominator(const QuotientProblem& prob, const Vec& x) {
  Denominator d;
  const auto& m = prob.energy->mass;
  d.t = prob.shift ? optimal_shift(x, m, prob.q) : 0.0;
  Vec y = x.array() - d.t;
  d.S = weighted_lq(y, m, prob.q);
  d.D = std::pow(d.S, prob.p / prob.q);
  return d;
}

}  // namespace

double quotient_value(const QuotientProblem& prob, const Vec& x) {
  auto d = denominator(prob, x);
  return prob.energy->energy(x, prob.p) / d.D;
}

void quotient_gradient(const QuotientProblem& prob, const Vec& x, Vec& grad) {
  const auto& m = prob.energy->mass;
  auto d = denominator(prob, x);
  double E = prob.energy->energy(x, prob.p);
  double R = E / d.D;
  prob.energy->gradient(x, prob.p, grad);
  const double p = prob.p, q = prob.q;
  double c = p * std::pow(d.S, p / q - 1.0);
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    double y = x[k] - d.t;
    double dk = 0.0;
    if (y != 0.0) dk = q == 2.0 ? y : std::copysign(std::pow(std::abs(y), q - 1.0), y);
    grad[k] = (grad[k] - R * c * m[k] * dk) / d.D;
  }
}

Field make_field(const DiscreteEnergy& energy, const Vec& x, Boundary boundary) {
  Field f;
  f.frame = energy.frame;
  f.values = energy.to_grid(x);
  f.boundary = boundary;
  return f;
}

namespace {

Vec normalized(const QuotientProblem& prob, Vec x) {
  if (prob.positive) x = x.cwiseAbs();
  auto d = denominator(prob, x);
  if (prob.shift) x.array() -= d.t;
  double s = std::pow(d.S, 1.0 / prob.q);
  if (s > 0.0) x /= s;
  return x;
}

double gradient_rms(const DiscreteEnergy& e, const Vec& x) {
  double W = 0.0;
  for (const auto& s : e.stencils) W += s.weight;
  return W > 0.0 ? std::sqrt(e.energy(x, 2.0) / W) : 0.0;
}

}  // namespace

QuotientResult minimize_quotient(const QuotientProblem& prob, Vec x, const SolveOptions& options) {
  if (!(prob.p > 1.0)) throw ValidationError("quotient descent needs p > 1");
  if (prob.q < 1.0) throw ValidationError("quotient descent needs q >= 1");
  const DiscreteEnergy& E = *prob.energy;
  const Eigen::Index n = static_cast<Eigen::Index>(E.num_free());
  if (x.size() != n) throw ValidationError("quotient descent: initial vector has the wrong size");

  x = normalized(prob, x);
  double R = quotient_value(prob, x);
  if (!std::isfinite(R)) throw ValidationError("quotient descent: degenerate initial field");

  HessianAssembler H(E);
  SpdSolver solver(options.backend);
  QuotientResult out;
  Vec g;
  int small_steps = 0;
  for (int it = 1; it <= options.max_iter; ++it) {
    quotient_gradient(prob, x, g);
    double eta = 1e-3 * gradient_rms(E, x);
    SpMat A = H.assemble(x, prob.p, eta);
    double sigma = prob.shift ? 1e-2 * R : 0.0;
    bool ok = false;
    for (int attempt = 0; attempt < 6 && !ok; ++attempt) {
      if (sigma > 0.0)
        for (Eigen::Index k = 0; k < n; ++k) A.coeffRef(k, k) += sigma * E.mass[k];
      ok = solver.compute(A);
      sigma = sigma > 0.0 ? 10.0 * sigma : 1e-6 * R;
    }
    if (!ok) break;
    Vec d = -solver.solve(g);
    double slope = g.dot(d);
    if (!(slope < 0.0)) {
      d = -g;
      slope = -g.squaredNorm();
    }
    if (slope == 0.0) {
      out.converged = true;
      break;
    }

    double t = 1.0;
    Vec xt = normalized(prob, x + t * d);
    double Rt = quotient_value(prob, xt);
    int halvings = 0;
    while (!(Rt <= R + 1e-4 * t * slope) && halvings < 50) {
      t *= 0.5;
      ++halvings;
      xt = normalized(prob, x + t * d);
      Rt = quotient_value(prob, xt);
    }
    if (!(Rt <= R)) {
      // no decrease along this direction: stationary to working precision
      out.converged = true;
      out.iterations = it;
      break;
    }
    if (halvings == 0) {
      for (int grow = 0; grow < 4; ++grow) {
        Vec x2 = normalized(prob, x + 2.0 * t * d);
        double R2 = quotient_value(prob, x2);
        if (!(R2 < Rt)) break;
        t *= 2.0;
        xt = std::move(x2);
        Rt = R2;
      }
    }
    double rel = (R - Rt) / std::abs(Rt);
    x = std::move(xt);
    R = Rt;
    out.iterations = it;
    out.residual = rel;
    small_steps = rel < options.tol ? small_steps + 1 : 0;
    if (small_steps >= 2) {
      out.converged = true;
      break;
    }
  }
  out.value = R;
  out.x = std::move(x);
  return out;
}

}  // namespace pqfreq
