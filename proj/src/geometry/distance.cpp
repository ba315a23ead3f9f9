#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "pqfreq/geometry.hpp"

namespace pqfreq {

namespace {

// Lower envelope of the parabolas (x - q)^2 + f[q] over the finite samples.
// Sites with f = inf are skipped; at least one finite site must exist.
void envelope_1d(const std::vector<double>& f, std::vector<double>& d, std::vector<int>& v,
                 std::vector<double>& z) {
  const int n = static_cast<int>(f.size());
  const double inf = std::numeric_limits<double>::infinity();
  int k = -1;
  for (int q = 0; q < n; ++q) {
    if (f[q] == inf) continue;
    double fq = f[q] + double(q) * q;
    if (k < 0) {
      k = 0;
      v[0] = q;
      z[0] = -inf;
      z[1] = inf;
      continue;
    }
    double s = 0.0;
    while (true) {
      int p = v[k];
      s = (fq - (f[p] + double(p) * p)) / (2.0 * (q - p));
      if (s <= z[k] && k > 0) {
        --k;
        continue;
      }
      break;
    }
    if (s <= z[k]) {
      // k == 0 and the new parabola dominates everywhere
      v[0] = q;
      z[0] = -inf;
      z[1] = inf;
      continue;
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = inf;
  }
  int j = 0;
  for (int q = 0; q < n; ++q) {
    while (z[j + 1] < q) ++j;
    double dq = q - v[j];
    d[q] = dq * dq + f[v[j]];
  }
}

}  // namespace

std::vector<double> squared_distance_transform(const GridDomain& domain) {
  const GridFrame& g = domain.frame();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(g.size());
  for (std::size_t idx = 0; idx < g.size(); ++idx) dist[idx] = domain.inside(idx) ? inf : 0.0;

  int longest = std::max(g.nx, g.ny);
  std::vector<double> f(longest), d(longest), z(longest + 1);
  std::vector<int> v(longest);

  if (g.dim == 2) {
    f.resize(g.ny);
    d.resize(g.ny);
    for (int i = 0; i < g.nx; ++i) {
      for (int j = 0; j < g.ny; ++j) f[j] = dist[g.index(i, j)];
      envelope_1d(f, d, v, z);
      for (int j = 0; j < g.ny; ++j) dist[g.index(i, j)] = d[j];
    }
  }
  f.resize(g.nx);
  d.resize(g.nx);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) f[i] = dist[g.index(i, j)];
    envelope_1d(f, d, v, z);
    for (int i = 0; i < g.nx; ++i) dist[g.index(i, j)] = d[i];
  }
  return dist;
}

InscribedBall inscribed_ball(const GridDomain& domain) {
  auto dist = squared_distance_transform(domain);
  auto it = std::max_element(dist.begin(), dist.end());
  return {static_cast<std::size_t>(it - dist.begin()), domain.h() * std::sqrt(*it)};
}

double inradius(const GridDomain& domain) { return inscribed_ball(domain).radius; }

std::vector<std::size_t> distance_peaks(const GridDomain& dom, const std::vector<double>& dist,
                                        std::size_t max_count) {
  const GridFrame& f = dom.frame();
  std::vector<std::size_t> maxima;
  for (std::size_t idx = 0; idx < f.size(); ++idx) {
    if (!dom.inside(idx)) continue;
    int i = f.col(idx), j = f.row(idx);
    bool peak = true;
    for (int dj = -1; dj <= 1 && peak; ++dj)
      for (int di = -1; di <= 1; ++di) {
        if (!f.contains(i + di, j + dj)) continue;
        if (dist[f.index(i + di, j + dj)] > dist[idx]) {
          peak = false;
          break;
        }
      }
    if (peak) maxima.push_back(idx);
  }
  std::stable_sort(maxima.begin(), maxima.end(), [&](auto a, auto b) { return dist[a] > dist[b]; });
  std::vector<std::size_t> out;
  for (auto c : maxima) {
    bool far = true;
    for (auto o : out) {
      double di = f.col(c) - f.col(o), dj = f.row(c) - f.row(o);
      if (di * di + dj * dj < 0.25 * dist[o]) {
        far = false;
        break;
      }
    }
    if (far) out.push_back(c);
    if (out.size() >= max_count) break;
  }
  return out;
}

GridDomain ball_subdomain(const GridDomain& domain, std::size_t center, double radius) {
  const GridFrame& g = domain.frame();
  int ci = g.col(center), cj = g.row(center);
  double rr = radius / g.h;
  std::vector<std::uint8_t> mask(g.size(), 0);
  for (std::size_t idx = 0; idx < g.size(); ++idx) {
    if (!domain.inside(idx)) continue;
    double di = g.col(idx) - ci, dj = g.row(idx) - cj;
    if (di * di + dj * dj < rr * rr * (1.0 - 1e-12)) mask[idx] = 1;
  }
  return GridDomain(g, std::move(mask));
}

double projection_length(const ObstacleSet& obstacle, int axis) {
  const GridFrame& g = obstacle.frame();
  if (g.dim != 2) throw ValidationError("projection_length: needs a 2D grid");
  if (axis != 1 && axis != 2) throw ValidationError("projection_length: axis must be 1 or 2");
  std::set<int> lines;
  for (auto idx : obstacle.nodes()) lines.insert(axis == 1 ? g.row(idx) : g.col(idx));
  return g.h * static_cast<double>(lines.size());
}

double taylor_square_side(int k, double r) {
  int s = static_cast<int>(std::sqrt(static_cast<double>(k)) + 1e-9);
  return 10.0 * (s + 1) * r;
}

FatnessWitness taylor_fatness_check(const GridDomain& domain, std::array<double, 2> center,
                                    double side) {
  const GridFrame& g = domain.frame();
  if (g.dim != 2) throw ValidationError("fatness check: needs a 2D domain");
  const int k = topology_order(domain);
  const double r = inradius(domain);
  const double expected = taylor_square_side(k, r);
  if (!(side > 0.0) || std::abs(side - expected) > 1e-9 * expected)
    throw ValidationError("fatness check: square side must equal 10(floor(sqrt k)+1) r = " +
                          std::to_string(expected));
  const double half = 0.5 * side;
  const double tol = 1e-9 * g.h;
  if (center[0] - half < g.x(0) - tol || center[0] + half > g.x(g.nx - 1) + tol ||
      center[1] - half < g.y(0) - tol || center[1] + half > g.y(g.ny - 1) + tol)
    throw ValidationError("fatness check: square outside the grid window");

  std::vector<std::size_t> sigma;
  bool meets = false;
  for (int j = 0; j < g.ny; ++j) {
    if (std::abs(g.y(j) - center[1]) > half + tol) continue;
    for (int i = 0; i < g.nx; ++i) {
      if (std::abs(g.x(i) - center[0]) > half + tol) continue;
      std::size_t idx = g.index(i, j);
      if (domain.inside(idx))
        meets = true;
      else
        sigma.push_back(idx);
    }
  }
  if (!meets) throw ValidationError("fatness check: square does not meet the domain");

  ObstacleSet set(g, std::move(sigma));
  std::array<double, 2> proj{projection_length(set, 1), projection_length(set, 2)};
  double required = std::sqrt(static_cast<double>(k)) / 4.0 * r;
  double margin = std::max(proj[0], proj[1]) - required;
  return FatnessWitness{std::move(set), proj, k, r, side, required, margin, margin >= -2.0 * g.h};
}

}  // namespace pqfreq
