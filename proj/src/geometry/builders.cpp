#include <cmath>
#include <functional>

#include "pqfreq/geometry.hpp"

namespace pqfreq {

namespace {

struct Window {
  double xlo, xhi, ylo, yhi;
  double ax = 0.0, ay = 0.0;  // a lattice node sits exactly here
};

GridFrame frame_for(const Window& w, double h, int dim, std::size_t budget) {
  auto axis = [h](double lo, double hi, double anchor, int& n, double& origin) {
    double i0 = std::floor((lo - anchor) / h + 1e-9) - 1.0;
    double i1 = std::ceil((hi - anchor) / h - 1e-9) + 1.0;
    double count = i1 - i0 + 1.0;
    if (count > 2e9) throw ResolutionError("grid: axis too long for the requested h");
    n = static_cast<int>(count);
    origin = anchor + i0 * h;
  };
  GridFrame f;
  f.dim = dim;
  f.h = h;
  axis(w.xlo, w.xhi, w.ax, f.nx, f.ox);
  if (dim == 2) {
    axis(w.ylo, w.yhi, w.ay, f.ny, f.oy);
  } else {
    f.ny = 1;
    f.oy = 0.0;
  }
  double nodes = static_cast<double>(f.nx) * f.ny;
  if (nodes > static_cast<double>(budget))
    throw ResolutionError("grid: " + std::to_string(static_cast<long long>(nodes)) +
                          " nodes exceed the node budget of " + std::to_string(budget));
  return f;
}

GridDomain rasterize(const GridFrame& f, const DomainSpec& spec,
                     const std::function<bool(double, double)>& in) {
  std::vector<std::uint8_t> mask(f.size(), 0);
  for (int j = 0; j < f.ny; ++j) {
    double y = f.dim == 2 ? f.y(j) : 0.0;
    for (int i = 0; i < f.nx; ++i) mask[f.index(i, j)] = in(f.x(i), y) ? 1 : 0;
  }
  return GridDomain(f, std::move(mask), spec);
}

}  // namespace

GridDomain build_domain(const DomainSpec& spec, const BuildOptions& options) {
  spec.validate();
  const double h = spec.h;
  const double tol = 1e-9 * h;
  const std::size_t budget = options.node_budget;

  return std::visit(
      [&](const auto& s) -> GridDomain {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, shapes::Disk>) {
          auto f = frame_for({-s.r, s.r, -s.r, s.r}, h, 2, budget);
          return rasterize(f, spec, [&](double x, double y) { return std::hypot(x, y) < s.r - tol; });
        } else if constexpr (std::is_same_v<T, shapes::Square>) {
          double a = 0.5 * s.side;
          auto f = frame_for({-a, a, -a, a}, h, 2, budget);
          return rasterize(f, spec, [&](double x, double y) {
            return std::abs(x) < a - tol && std::abs(y) < a - tol;
          });
        } else if constexpr (std::is_same_v<T, shapes::Annulus>) {
          auto f = frame_for({-s.r_out, s.r_out, -s.r_out, s.r_out}, h, 2, budget);
          return rasterize(f, spec, [&](double x, double y) {
            double d = std::hypot(x, y);
            return d > s.r_in + tol && d < s.r_out - tol;
          });
        } else if constexpr (std::is_same_v<T, shapes::Strip>) {
          auto f = frame_for({0.0, s.length, 0.0, s.height}, h, 2, budget);
          return rasterize(f, spec, [&](double x, double y) {
            return x > tol && x < s.length - tol && y > tol && y < s.height - tol;
          });
        } else if constexpr (std::is_same_v<T, shapes::Perforated>) {
          const int side = static_cast<int>(std::sqrt(static_cast<double>(s.k)) + 1e-9);
          const int extra = s.k - side * side;
          const double eps = std::pow(static_cast<double>(s.k), -s.beta);
          if (eps < 2.0 * h)
            throw ResolutionError("grid: hole radius " + std::to_string(eps) +
                                  " is below 2h = " + std::to_string(2.0 * h));
          const double xmax = std::max(side, extra);
          auto f = frame_for({0.0, xmax, extra > 0 ? -1.0 : 0.0, double(side)}, h, 2, budget);
          return rasterize(f, spec, [&](double x, double y) {
            bool block = x > tol && x < side - tol && y > tol && y < side - tol;
            bool strip = extra > 0 && x > tol && x < extra - tol && y > -1.0 + tol && y < -tol;
            bool seam = extra > 0 && std::abs(y) <= tol && x > tol && x < std::min(side, extra) - tol;
            if (!(block || strip || seam)) return false;
            double cx = std::floor(x) + 0.5, cy = std::floor(y) + 0.5;
            return std::hypot(x - cx, y - cy) > eps + tol;
          });
        } else if constexpr (std::is_same_v<T, shapes::PepperWindow>) {
          double a = s.m + 0.5;
          auto f = frame_for({-a, a, -a, a}, h, 2, budget);
          return rasterize(f, spec, [&](double x, double y) {
            if (std::abs(x) >= a - tol || std::abs(y) >= a - tol) return false;
            return std::hypot(x - std::round(x), y - std::round(y)) > s.eps + tol;
          });
        } else {
          Window w{s.start, s.end, 0.0, 0.0, s.start, 0.0};
          auto f = frame_for(w, h, 1, budget);
          return rasterize(f, spec, [&](double x, double) {
            return x > s.start + tol && x < s.end - tol;
          });
        }
      },
      spec.shape);
}

}  // namespace pqfreq
