#include <algorithm>
#include <cmath>
#include <numeric>

#include "pqfreq/solvers.hpp"

namespace pqfreq {

namespace {

constexpr int kNbr[8][2] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}, {1, 1}, {1, -1}, {-1, -1}, {-1, 1}};

struct Rounding {
  double ratio = kInf;
  std::vector<std::uint8_t> set;
};

// Best perimeter/area ratio over the superlevel sets of u, perimeter
// updated incrementally as nodes enter in decreasing order of u.
Rounding round_superlevel(const GridDomain& d, const std::vector<std::size_t>& nodes,
                          const std::vector<double>& u) {
  const GridFrame& f = d.frame();
  auto [wa, wd] = geo_weights(f.h);
  const double cell = f.h * f.h;
  std::vector<std::size_t> order(nodes.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return u[nodes[a]] > u[nodes[b]]; });

  std::vector<std::uint8_t> in(d.size(), 0);
  double per = 0.0;
  double best = kInf;
  std::size_t best_count = 0;
  for (std::size_t r = 0; r < order.size(); ++r) {
    std::size_t idx = nodes[order[r]];
    int i = f.col(idx), j = f.row(idx);
    for (int k = 0; k < 8; ++k) {
      double w = k < 4 ? wa : wd;
      int a = i + kNbr[k][0], b = j + kNbr[k][1];
      bool member = d.inside(a, b) && in[f.index(a, b)];
      per += member ? -w : w;
    }
    in[idx] = 1;
    bool level_end = r + 1 == order.size() || u[nodes[order[r + 1]]] < u[idx];
    if (!level_end) continue;
    double ratio = per / (cell * static_cast<double>(r + 1));
    if (ratio < best) {
      best = ratio;
      best_count = r + 1;
    }
  }
  Rounding out;
  out.ratio = best;
  out.set.assign(d.size(), 0);
  for (std::size_t r = 0; r < best_count; ++r) out.set[nodes[order[r]]] = 1;
  return out;
}

// Isotropic TV with zero extension: sum_nodes h |D u| over the window.
double total_variation(const GridFrame& f, const std::vector<double>& u) {
  double tv = 0.0;
  for (int j = 0; j < f.ny; ++j)
    for (int i = 0; i < f.nx; ++i) {
      double c = u[f.index(i, j)];
      double gx = i + 1 < f.nx ? u[f.index(i + 1, j)] - c : 0.0;
      double gy = j + 1 < f.ny ? u[f.index(i, j + 1)] - c : 0.0;
      tv += std::hypot(gx, gy);
    }
  return tv * f.h;
}

}  // namespace

SolveReport lambda11_tv(const GridDomain& domain, const SolveOptions& options,
                        const std::optional<Field>& initial) {
  if (domain.dim() != 2) throw ValidationError("lambda11_tv: needs a 2D domain");
  const GridFrame& f = domain.frame();
  const std::size_t M = f.size();
  const std::vector<std::size_t> nodes = domain.inside_nodes();

  std::vector<double> u(M, 0.0);
  if (initial) {
    if (!(initial->frame == f)) throw ValidationError("lambda11_tv: initial field lives on another grid");
    for (auto idx : nodes) u[idx] = std::clamp(initial->values[idx], 0.0, 1.0);
  } else {
    for (auto idx : nodes) u[idx] = 1.0;
  }

  Rounding best = round_superlevel(domain, nodes, u);
  if (!initial) {
    // whole domain as the Dinkelbach start
    std::vector<std::uint8_t> all(M, 0);
    for (auto idx : nodes) all[idx] = 1;
    best.ratio = geo_perimeter(domain, all) / (f.h * f.h * static_cast<double>(nodes.size()));
    best.set = std::move(all);
  }

  std::vector<double> px(M, 0.0), py(M, 0.0), ubar(u), prev(M);
  const double tau = 0.35, sigma = 0.35;
  const int inner = 400;
  const int outer_cap = std::max(1, std::min(options.max_iter / inner, 12));
  int iterations = 0;
  double lambda = best.ratio;
  bool converged = false;

  for (int outer = 0; outer < outer_cap; ++outer) {
    const double gain = lambda * f.h;  // Sum |Du| - lambda h Sum u
    for (int it = 0; it < inner; ++it, ++iterations) {
      for (int j = 0; j < f.ny; ++j)
        for (int i = 0; i < f.nx; ++i) {
          std::size_t k = f.index(i, j);
          double gx = i + 1 < f.nx ? ubar[k + 1] - ubar[k] : 0.0;
          double gy = j + 1 < f.ny ? ubar[k + f.nx] - ubar[k] : 0.0;
          double a = px[k] + sigma * gx, b = py[k] + sigma * gy;
          double n = std::max(1.0, std::hypot(a, b));
          px[k] = a / n;
          py[k] = b / n;
        }
      prev = u;
      for (auto k : nodes) {
        int i = f.col(k), j = f.row(k);
        // D^T p = -div p
        double div = px[k] + py[k];
        if (i > 0) div -= px[k - 1];
        if (j > 0) div -= py[k - f.nx];
        u[k] = std::clamp(u[k] - tau * (-div - gain), 0.0, 1.0);
      }
      for (auto k : nodes) ubar[k] = 2.0 * u[k] - prev[k];
    }
    Rounding r = round_superlevel(domain, nodes, u);
    double improvement = best.ratio - r.ratio;
    if (r.ratio < best.ratio) best = std::move(r);
    if (!(improvement > 1e-6 * best.ratio)) {
      converged = true;
      break;
    }
    lambda = best.ratio;
  }

  SolveReport rep;
  rep.quantity = "cheeger-tv";
  rep.value = best.ratio;
  rep.h = f.h;
  rep.iterations = iterations;
  rep.converged = converged;
  double l1 = 0.0;
  for (auto k : nodes) l1 += u[k];
  l1 *= f.h * f.h;
  rep.diagnostics["tv_ratio"] = l1 > 0.0 ? total_variation(f, u) / l1 : kInf;
  rep.field.frame = f;
  rep.field.values.assign(M, 0.0);
  for (std::size_t k = 0; k < M; ++k) rep.field.values[k] = best.set[k] ? 1.0 : 0.0;
  return rep;
}

}  // namespace pqfreq
