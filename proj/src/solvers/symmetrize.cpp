#include <algorithm>
#include <cmath>

#include "pqfreq/solvers.hpp"

namespace pqfreq {

namespace {

struct Box {
  int i0, i1, j0, j1;
};

Box cube_box(const GridDomain& d) {
  if (d.dim() != 2) throw ValidationError("symmetrize: needs a 2D cube");
  const GridFrame& f = d.frame();
  Box b{f.nx, -1, f.ny, -1};
  for (auto idx : d.inside_nodes()) {
    b.i0 = std::min(b.i0, f.col(idx));
    b.i1 = std::max(b.i1, f.col(idx));
    b.j0 = std::min(b.j0, f.row(idx));
    b.j1 = std::max(b.j1, f.row(idx));
  }
  std::size_t box_nodes = static_cast<std::size_t>(b.i1 - b.i0 + 1) * (b.j1 - b.j0 + 1);
  if (b.i1 - b.i0 != b.j1 - b.j0 || box_nodes != d.inside_count())
    throw ValidationError("symmetrize: domain is not a cube");
  return b;
}

}  // namespace

double symmetric_energy(const GridDomain& domain, const Field& u, double p) {
  const GridFrame& f = domain.frame();
  if (!(u.frame == f)) throw ValidationError("symmetric_energy: field lives on another grid");
  auto at = [&](int i, int j) { return domain.inside(i, j) ? u.values[f.index(i, j)] : 0.0; };
  double total = 0.0;
  for (int j = 0; j < f.ny; ++j)
    for (int i = 0; i < f.nx; ++i) {
      double c = at(i, j);
      double fx = at(i + 1, j) - c, bx = c - at(i - 1, j);
      double fy = at(i, j + 1) - c, by = c - at(i, j - 1);
      for (double gx : {fx, bx})
        for (double gy : {fy, by}) {
          double sq = gx * gx + gy * gy;
          if (sq > 0.0) total += std::pow(sq, 0.5 * p);
        }
    }
  // h^2 cell weight times |D/h|^p, averaged over the four combinations
  return 0.25 * total * f.h * f.h * std::pow(f.h, -p);
}

SymmetrizeReport symmetrize(const GridDomain& cube, const Field& u, double p) {
  if (!(p >= 1.0)) throw ValidationError("symmetrize: needs p >= 1");
  const GridFrame& f = cube.frame();
  if (!(u.frame == f)) throw ValidationError("symmetrize: field lives on another grid");
  Box b = cube_box(cube);

  std::vector<double> s(f.size(), 0.0);
  for (auto idx : cube.inside_nodes()) s[idx] = std::abs(u.values[idx]);
  for (int axis = 0; axis < 2; ++axis) {
    std::vector<double> next(s);
    for (int j = b.j0; j <= b.j1; ++j)
      for (int i = b.i0; i <= b.i1; ++i) {
        int ri = axis == 0 ? b.i0 + b.i1 - i : i;
        int rj = axis == 1 ? b.j0 + b.j1 - j : j;
        double a = s[f.index(i, j)], c = s[f.index(ri, rj)];
        double v = a == c ? a : std::pow(0.5 * (std::pow(a, p) + std::pow(c, p)), 1.0 / p);
        next[f.index(i, j)] = v;
      }
    s = std::move(next);
  }

  SymmetrizeReport rep;
  rep.field.frame = f;
  rep.field.values = s;
  rep.field.boundary = u.boundary;
  rep.energy_before = symmetric_energy(cube, u, p);
  rep.energy_after = symmetric_energy(cube, rep.field, p);
  const double cell = f.h * f.h;
  for (auto idx : cube.inside_nodes()) {
    rep.lp_before += cell * std::pow(std::abs(u.values[idx]), p);
    rep.lp_after += cell * std::pow(s[idx], p);
  }
  return rep;
}

}  // namespace pqfreq
