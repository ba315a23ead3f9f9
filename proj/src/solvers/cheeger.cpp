#include <cmath>

#include "pqfreq/maxflow.hpp"
#include "pqfreq/solvers.hpp"

namespace pqfreq {

namespace {

constexpr int kDirs[8][2] = {{1, 0}, {0, 1}, {1, 1}, {1, -1}, {-1, 0}, {0, -1}, {-1, -1}, {-1, 1}};

// Compact numbering of the inside nodes.
struct InsideIndex {
  std::vector<std::int32_t> id;
  std::vector<std::size_t> node;
  explicit InsideIndex(const GridDomain& d) : id(d.size(), -1) {
    for (std::size_t idx = 0; idx < d.size(); ++idx)
      if (d.inside(idx)) {
        id[idx] = static_cast<std::int32_t>(node.size());
        node.push_back(idx);
      }
  }
};

void require_2d(const GridDomain& d, const char* who) {
  if (d.dim() != 2) throw ValidationError(std::string(who) + ": needs a 2D domain");
}

// Inside-inside edges with geo weights; edges leaving the domain go to the
// sink of the inside endpoint.
CutGraph perimeter_graph(const GridDomain& d, const InsideIndex& ix) {
  const GridFrame& f = d.frame();
  auto [wa, wd] = geo_weights(f.h);
  CutGraph G(static_cast<std::uint32_t>(ix.node.size()));
  for (std::size_t k = 0; k < ix.node.size(); ++k) {
    int i = f.col(ix.node[k]), j = f.row(ix.node[k]);
    for (int dir = 0; dir < 8; ++dir) {
      double w = (dir % 4) < 2 ? wa : wd;
      int a = i + kDirs[dir][0], b = j + kDirs[dir][1];
      if (d.inside(a, b)) {
        if (dir < 4) {
          auto v = static_cast<std::uint32_t>(ix.id[f.index(a, b)]);
          G.add_edge(static_cast<std::uint32_t>(k), v, w, w);
        }
      } else {
        G.add_terminal(static_cast<std::uint32_t>(k), 0.0, w);
      }
    }
  }
  return G;
}

Field indicator(const GridDomain& d, const std::vector<std::uint8_t>& in_set) {
  Field fld;
  fld.frame = d.frame();
  fld.values.assign(d.size(), 0.0);
  for (std::size_t idx = 0; idx < d.size(); ++idx) fld.values[idx] = in_set[idx] ? 1.0 : 0.0;
  return fld;
}

}  // namespace

std::pair<double, double> geo_weights(double h) {
  const double s = 1.0 + std::sqrt(2.0);
  const double c = 1.0 / std::sqrt(s * std::sqrt(s * s + 1.0));
  return {c * h, c * h / std::sqrt(2.0)};
}

double geo_perimeter(const GridDomain& d, const std::vector<std::uint8_t>& in_set) {
  require_2d(d, "geo_perimeter");
  const GridFrame& f = d.frame();
  auto [wa, wd] = geo_weights(f.h);
  auto member = [&](int a, int b) { return d.inside(a, b) && in_set[f.index(a, b)]; };
  double per = 0.0;
  for (std::size_t idx = 0; idx < d.size(); ++idx) {
    if (!d.inside(idx) || !in_set[idx]) continue;
    int i = f.col(idx), j = f.row(idx);
    for (int dir = 0; dir < 8; ++dir)
      if (!member(i + kDirs[dir][0], j + kDirs[dir][1])) per += (dir % 4) < 2 ? wa : wd;
  }
  return per;
}

SolveReport cut_capacity(const GridDomain& container, const ObstacleSet& obstacle) {
  require_2d(container, "cut_capacity");
  if (!(obstacle.frame() == container.frame()))
    throw ValidationError("capacity: obstacle and container live on different grids");
  InsideIndex ix(container);
  CutGraph G = perimeter_graph(container, ix);
  double total = 0.0;
  auto [wa, wd] = geo_weights(container.h());
  total = 4.0 * (wa + wd) * static_cast<double>(ix.node.size()) + 1.0;
  for (auto idx : obstacle.nodes()) {
    if (!container.inside(idx)) throw ValidationError("capacity: obstacle node outside the container");
    G.add_terminal(static_cast<std::uint32_t>(ix.id[idx]), total, 0.0);
  }
  SolveReport rep;
  rep.quantity = "capacity";
  rep.value = G.solve();
  rep.h = container.h();
  rep.iterations = 1;
  rep.converged = true;
  std::vector<std::uint8_t> in_set(container.size(), 0);
  for (std::size_t k = 0; k < ix.node.size(); ++k)
    if (G.source_side(static_cast<std::uint32_t>(k))) in_set[ix.node[k]] = 1;
  rep.field = indicator(container, in_set);
  return rep;
}

SolveReport cheeger_maxflow(const GridDomain& domain, const SolveOptions& options) {
  require_2d(domain, "cheeger_maxflow");
  InsideIndex ix(domain);
  const double cell = domain.h() * domain.h();
  std::vector<std::uint8_t> best(domain.size(), 0);
  for (auto idx : ix.node) best[idx] = 1;
  double lambda = geo_perimeter(domain, best) / (cell * static_cast<double>(ix.node.size()));

  SolveReport rep;
  rep.quantity = "cheeger";
  rep.h = domain.h();
  const int cap = std::min(options.max_iter, 100);
  for (int it = 1; it <= cap; ++it) {
    CutGraph G = perimeter_graph(domain, ix);
    for (std::size_t k = 0; k < ix.node.size(); ++k)
      G.add_terminal(static_cast<std::uint32_t>(k), lambda * cell, 0.0);
    G.solve();
    std::vector<std::uint8_t> in_set(domain.size(), 0);
    std::size_t count = 0;
    for (std::size_t k = 0; k < ix.node.size(); ++k)
      if (G.source_side(static_cast<std::uint32_t>(k))) {
        in_set[ix.node[k]] = 1;
        ++count;
      }
    rep.iterations = it;
    if (count == 0) {
      rep.converged = true;
      break;
    }
    double per = geo_perimeter(domain, in_set);
    double area = cell * static_cast<double>(count);
    double aux = per - lambda * area;
    rep.residual = -aux / (lambda * area);
    if (!(aux < -1e-12 * lambda * area)) {
      rep.converged = true;
      break;
    }
    lambda = per / area;
    best = std::move(in_set);
  }
  rep.value = lambda;
  rep.field = indicator(domain, best);
  std::size_t count = 0;
  for (auto v : best) count += v;
  rep.diagnostics["set_area"] = cell * static_cast<double>(count);
  rep.diagnostics["set_perimeter"] = lambda * cell * static_cast<double>(count);
  return rep;
}

}  // namespace pqfreq
