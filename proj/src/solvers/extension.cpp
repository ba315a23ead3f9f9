#include <cmath>

#include "pqfreq/solvers.hpp"

namespace pqfreq {

namespace {

double lp_norm(const GridFrame& f, const std::vector<std::uint8_t>& in, const std::vector<double>& u, double p) {
  double s = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k)
    if (in[k]) s += std::pow(std::abs(u[k]), p);
  return std::pow(s * f.h * f.h, 1.0 / p);
}

// Forward differences between pairs of member nodes.
double grad_norm(const GridFrame& f, const std::vector<std::uint8_t>& in, const std::vector<double>& u,
                 double p) {
  double s = 0.0;
  for (int j = 0; j < f.ny; ++j)
    for (int i = 0; i < f.nx; ++i) {
      std::size_t k = f.index(i, j);
      if (!in[k]) continue;
      double gx = i + 1 < f.nx && in[k + 1] ? (u[k + 1] - u[k]) / f.h : 0.0;
      double gy = j + 1 < f.ny && in[k + f.nx] ? (u[k + f.nx] - u[k]) / f.h : 0.0;
      s += std::pow(std::hypot(gx, gy), p);
    }
  return std::pow(s * f.h * f.h, 1.0 / p);
}

// Bilinear interpolation over the inside corners only, renormalized; the
// nearest inside node when no corner is inside.
double sample(const GridDomain& disk, const std::vector<double>& u, double x, double y) {
  const GridFrame& f = disk.frame();
  double gx = (x - f.ox) / f.h, gy = (y - f.oy) / f.h;
  int i = static_cast<int>(std::floor(gx)), j = static_cast<int>(std::floor(gy));
  double fx = gx - i, fy = gy - j;
  double num = 0.0, den = 0.0;
  for (int dj = 0; dj <= 1; ++dj)
    for (int di = 0; di <= 1; ++di) {
      if (!disk.inside(i + di, j + dj)) continue;
      double w = (di ? fx : 1.0 - fx) * (dj ? fy : 1.0 - fy);
      num += w * u[f.index(i + di, j + dj)];
      den += w;
    }
  if (den > 1e-12) return num / den;
  double best = kInf, val = 0.0;
  for (int dj = -2; dj <= 3; ++dj)
    for (int di = -2; di <= 3; ++di) {
      if (!disk.inside(i + di, j + dj)) continue;
      double d = std::hypot(gx - (i + di), gy - (j + dj));
      if (d < best) {
        best = d;
        val = u[f.index(i + di, j + dj)];
      }
    }
  return val;
}

}  // namespace

ExtensionReport extend_inversion(const GridDomain& disk, const Field& u, std::array<double, 2> x0, double r,
                                 double R, double p) {
  if (disk.dim() != 2) throw ValidationError("extend_inversion: needs a 2D disk");
  if (!(r > 0.0) || !(R > r)) throw ValidationError("extend_inversion: needs 0 < r < R");
  if (!(p >= 1.0)) throw ValidationError("extend_inversion: needs p >= 1");
  if (!(u.frame == disk.frame())) throw ValidationError("extend_inversion: field lives on another grid");
  const GridFrame& f = disk.frame();
  const double h = f.h;

  // target grid on the same lattice, covering B_R(x0) with one spare node
  GridFrame g;
  g.dim = 2;
  g.h = h;
  int i0 = static_cast<int>(std::floor((x0[0] - R - f.ox) / h)) - 1;
  int j0 = static_cast<int>(std::floor((x0[1] - R - f.oy) / h)) - 1;
  int i1 = static_cast<int>(std::ceil((x0[0] + R - f.ox) / h)) + 1;
  int j1 = static_cast<int>(std::ceil((x0[1] + R - f.oy) / h)) + 1;
  g.ox = f.ox + i0 * h;
  g.oy = f.oy + j0 * h;
  g.nx = i1 - i0 + 1;
  g.ny = j1 - j0 + 1;

  std::vector<std::uint8_t> in_R(g.size(), 0);
  std::vector<double> ext(g.size(), 0.0);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      double x = g.x(i) - x0[0], y = g.y(j) - x0[1];
      double rho2 = x * x + y * y;
      if (!(rho2 < R * R)) continue;
      std::size_t k = g.index(i, j);
      in_R[k] = 1;
      int di = i + i0, dj = j + j0;
      if (disk.inside(di, dj)) {
        ext[k] = u.values[f.index(di, dj)];
      } else if (rho2 > 0.0) {
        double s = r * r / rho2;
        ext[k] = sample(disk, u.values, x0[0] + s * x, x0[1] + s * y);
      }
    }

  ExtensionReport rep;
  rep.extension.frame = g;
  rep.extension.values = ext;
  rep.norm_u = lp_norm(f, disk.mask(), u.values, p);
  rep.grad_u = grad_norm(f, disk.mask(), u.values, p);
  rep.norm_ext = lp_norm(g, in_R, ext, p);
  rep.grad_ext = grad_norm(g, in_R, ext, p);
  rep.factor_lp = std::pow(2.0, 1.0 / p) * std::pow(R / r, 4.0 / p);
  rep.factor_grad = std::pow(4.0, 1.0 / p) * std::pow(R / r, 8.0 / p);
  rep.lp_ok = rep.norm_ext <= rep.factor_lp * rep.norm_u * (1.0 + rep.slack);
  rep.grad_ok = rep.grad_ext <= rep.factor_grad * rep.grad_u * (1.0 + rep.slack);
  return rep;
}

}  // namespace pqfreq
