#include <algorithm>
#include <cmath>

#include "pqfreq/energy.hpp"

namespace pqfreq {

void DiscreteEnergy::expand(const Vec& x, std::vector<double>& u) const {
  u = fixed_value;
  for (std::size_t k = 0; k < free_node.size(); ++k) u[free_node[k]] = x[static_cast<Eigen::Index>(k)];
}

namespace {

inline double grad_sq(const Stencil& s, const std::vector<double>& u, double g[2]) {
  double sq = 0.0;
  for (int c = 0; c < s.ncomp; ++c) {
    g[c] = (u[s.b[c]] - u[s.a[c]]) * s.scale[c];
    sq += g[c] * g[c];
  }
  return sq;
}

inline double power_half(double sq, double p) {
  if (p == 2.0) return sq;
  if (sq == 0.0) return 0.0;
  return std::pow(sq, 0.5 * p);
}

}  // namespace

double DiscreteEnergy::energy(const Vec& x, double p) const {
  std::vector<double> u;
  expand(x, u);
  double e = 0.0;
  double g[2];
  for (const auto& s : stencils) e += s.weight * power_half(grad_sq(s, u, g), p);
  return e;
}

void DiscreteEnergy::gradient(const Vec& x, double p, Vec& out) const {
  std::vector<double> u;
  expand(x, u);
  std::vector<double> full(u.size(), 0.0);
  double g[2];
  for (const auto& s : stencils) {
    double sq = grad_sq(s, u, g);
    if (sq == 0.0) continue;
    double f = s.weight * p * (p == 2.0 ? 1.0 : std::pow(sq, 0.5 * (p - 2.0)));
    for (int c = 0; c < s.ncomp; ++c) {
      double t = f * g[c] * s.scale[c];
      full[s.b[c]] += t;
      full[s.a[c]] -= t;
    }
  }
  out.resize(static_cast<Eigen::Index>(free_node.size()));
  for (std::size_t k = 0; k < free_node.size(); ++k) out[static_cast<Eigen::Index>(k)] = full[free_node[k]];
}

std::vector<double> DiscreteEnergy::to_grid(const Vec& x) const {
  std::vector<double> out(frame.size(), 0.0);
  std::vector<double> u;
  expand(x, u);
  for (std::size_t l = 0; l < grid_node.size(); ++l) out[grid_node[l]] = u[l];
  return out;
}

Vec DiscreteEnergy::from_grid(const std::vector<double>& values) const {
  Vec x(static_cast<Eigen::Index>(free_node.size()));
  for (std::size_t k = 0; k < free_node.size(); ++k)
    x[static_cast<Eigen::Index>(k)] = values[grid_node[free_node[k]]];
  return x;
}

namespace {

// Shared construction for grid energies. `role` per grid node: 0 unused,
// 1 free, 2 fixed at 0, 3 fixed at 1.
DiscreteEnergy grid_energy(const GridDomain& domain, const std::vector<std::uint8_t>& role,
                           bool zero_extension) {
  const GridFrame& g = domain.frame();
  DiscreteEnergy e;
  e.frame = g;
  const double h = g.h;
  const double w = std::pow(h, g.dim);

  std::vector<std::int32_t> local(g.size(), -1);
  auto local_of = [&](std::size_t idx) {
    if (local[idx] < 0) {
      local[idx] = static_cast<std::int32_t>(e.grid_node.size());
      e.grid_node.push_back(idx);
    }
    return local[idx];
  };
  // Register free nodes first so their order is the grid order.
  for (std::size_t idx = 0; idx < g.size(); ++idx)
    if (role[idx] == 1) local_of(idx);

  auto active = [&](int i, int j) { return g.contains(i, j) && role[g.index(i, j)] != 0; };

  const int ny = g.dim == 2 ? g.ny : 1;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      Stencil s{};
      s.weight = w;
      int dirs[2][2] = {{1, 0}, {0, 1}};
      if (zero_extension) {
        // all-zero stencils contribute nothing; keep those touching a free or unit node
        auto live = [&](int a, int b) {
          return g.contains(a, b) && (role[g.index(a, b)] == 1 || role[g.index(a, b)] == 3);
        };
        if (!(live(i, j) || live(i + 1, j) || (g.dim == 2 && live(i, j + 1)))) continue;
      } else if (!active(i, j)) {
        continue;
      }
      for (int c = 0; c < g.dim; ++c) {
        int a = i + dirs[c][0], b = j + dirs[c][1];
        if (!g.contains(a, b)) continue;
        if (!zero_extension && !active(a, b)) continue;
        s.a[s.ncomp] = local_of(g.index(i, j));
        s.b[s.ncomp] = local_of(g.index(a, b));
        s.scale[s.ncomp] = 1.0 / h;
        ++s.ncomp;
      }
      if (s.ncomp > 0) e.stencils.push_back(s);
    }
  }

  const std::size_t n = e.grid_node.size();
  e.free_id.assign(n, -1);
  e.fixed_value.assign(n, 0.0);
  for (std::size_t l = 0; l < n; ++l) {
    std::uint8_t r = role[e.grid_node[l]];
    if (r == 1) {
      e.free_id[l] = static_cast<std::int32_t>(e.free_node.size());
      e.free_node.push_back(static_cast<std::int32_t>(l));
      e.mass.push_back(w);
    } else if (r == 3) {
      e.fixed_value[l] = 1.0;
    }
  }
  return e;
}

}  // namespace

DiscreteEnergy dirichlet_energy(const GridDomain& domain) {
  std::vector<std::uint8_t> role(domain.size(), 2);
  for (std::size_t idx = 0; idx < domain.size(); ++idx)
    if (domain.inside(idx)) role[idx] = 1;
  return grid_energy(domain, role, true);
}

DiscreteEnergy capacity_energy(const GridDomain& container, const ObstacleSet& obstacle) {
  if (!(obstacle.frame() == container.frame()))
    throw ValidationError("capacity: obstacle and container live on different grids");
  std::vector<std::uint8_t> role(container.size(), 2);
  for (std::size_t idx = 0; idx < container.size(); ++idx)
    if (container.inside(idx)) role[idx] = 1;
  for (auto idx : obstacle.nodes()) {
    if (!container.inside(idx)) throw ValidationError("capacity: obstacle node outside the container");
    role[idx] = 3;
  }
  return grid_energy(container, role, true);
}

DiscreteEnergy neumann_energy(const GridDomain& domain) {
  std::vector<std::uint8_t> role(domain.size(), 0);
  for (std::size_t idx = 0; idx < domain.size(); ++idx)
    if (domain.inside(idx)) role[idx] = 1;
  return grid_energy(domain, role, false);
}

DiscreteEnergy pinned_neumann_energy(const GridDomain& domain, const std::vector<std::size_t>& pins) {
  std::vector<std::uint8_t> role(domain.size(), 0);
  for (std::size_t idx = 0; idx < domain.size(); ++idx)
    if (domain.inside(idx)) role[idx] = 1;
  for (auto idx : pins) {
    if (idx >= role.size() || !domain.inside(idx))
      throw ValidationError("pinned node must be an inside node");
    role[idx] = 2;
  }
  return grid_energy(domain, role, false);
}

double weighted_lq(const Vec& x, const std::vector<double>& mass, double q) {
  double s = 0.0;
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    double a = std::abs(x[k]);
    s += mass[static_cast<std::size_t>(k)] * (q == 2.0 ? a * a : q == 1.0 ? a : std::pow(a, q));
  }
  return s;
}

HessianAssembler::HessianAssembler(const DiscreteEnergy& energy) : energy_(energy) {
  const auto n = static_cast<Eigen::Index>(energy.num_free());
  std::vector<Eigen::Triplet<double, int>> trips;
  trips.reserve(energy.stencils.size() * 6 + energy.num_free());
  for (Eigen::Index k = 0; k < n; ++k) trips.emplace_back(int(k), int(k), 0.0);

  auto nodes_of = [](const Stencil& s, std::int32_t out[4]) {
    int m = 0;
    auto add = [&](std::int32_t v) {
      for (int t = 0; t < m; ++t)
        if (out[t] == v) return;
      out[m++] = v;
    };
    for (int c = 0; c < s.ncomp; ++c) {
      add(s.a[c]);
      add(s.b[c]);
    }
    return m;
  };

  for (const auto& s : energy.stencils) {
    std::int32_t nd[4];
    int m = nodes_of(s, nd);
    for (int u = 0; u < m; ++u)
      for (int v = 0; v < m; ++v) {
        int fu = energy.free_id[nd[u]], fv = energy.free_id[nd[v]];
        if (fu < 0 || fv < 0 || fu < fv) continue;
        trips.emplace_back(fu, fv, 0.0);
      }
  }
  H_.resize(n, n);
  H_.setFromTriplets(trips.begin(), trips.end());
  H_.makeCompressed();
  trips.clear();
  trips.shrink_to_fit();

  const int* outer = H_.outerIndexPtr();
  const int* inner = H_.innerIndexPtr();
  auto find_slot = [&](int row, int col) -> std::int32_t {
    const int* lo = inner + outer[col];
    const int* hi = inner + outer[col + 1];
    const int* it = std::lower_bound(lo, hi, row);
    return static_cast<std::int32_t>(it - inner);
  };
  slot_.assign(energy.stencils.size() * 16, -1);
  for (std::size_t si = 0; si < energy.stencils.size(); ++si) {
    const auto& s = energy.stencils[si];
    std::int32_t nd[4];
    int m = nodes_of(s, nd);
    for (int u = 0; u < m; ++u)
      for (int v = 0; v < m; ++v) {
        int fu = energy.free_id[nd[u]], fv = energy.free_id[nd[v]];
        if (fu < 0 || fv < 0 || fu < fv) continue;
        slot_[si * 16 + u * 4 + v] = find_slot(fu, fv);
      }
  }
}

const SpMat& HessianAssembler::assemble(const Vec& x, double p, double eta) {
  std::vector<double> u;
  energy_.expand(x, u);
  double* val = H_.valuePtr();
  std::fill(val, val + H_.nonZeros(), 0.0);
  const double eta2 = eta * eta;
  for (std::size_t si = 0; si < energy_.stencils.size(); ++si) {
    const auto& s = energy_.stencils[si];
    double g[2] = {0.0, 0.0};
    double sq = grad_sq(s, u, g);
    double rho = sq + eta2;
    double HG[2][2];
    if (p == 2.0) {
      HG[0][0] = HG[1][1] = 2.0 * s.weight;
      HG[0][1] = HG[1][0] = 0.0;
    } else {
      if (rho == 0.0) rho = 1e-300;
      double f = s.weight * p * std::pow(rho, 0.5 * (p - 2.0));
      for (int c = 0; c < 2; ++c)
        for (int d = 0; d < 2; ++d)
          HG[c][d] = f * ((c == d ? 1.0 : 0.0) + (p - 2.0) * g[c] * g[d] / rho);
    }
    // node list with per-component coefficients
    std::int32_t nd[4];
    double coef[4][2] = {};
    int m = 0;
    auto add = [&](std::int32_t v, int c, double a) {
      for (int t = 0; t < m; ++t)
        if (nd[t] == v) {
          coef[t][c] += a;
          return;
        }
      nd[m] = v;
      coef[m][c] = a;
      ++m;
    };
    for (int c = 0; c < s.ncomp; ++c) {
      add(s.a[c], c, -s.scale[c]);
      add(s.b[c], c, s.scale[c]);
    }
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) {
        std::int32_t slot = slot_[si * 16 + a * 4 + b];
        if (slot < 0) continue;
        double v = 0.0;
        for (int c = 0; c < s.ncomp; ++c)
          for (int d = 0; d < s.ncomp; ++d) v += coef[a][c] * HG[c][d] * coef[b][d];
        val[slot] += v;
      }
  }
  return H_;
}

}  // namespace pqfreq
