#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "pqfreq/geometry.hpp"

namespace pqfreq {

using Vec = Eigen::VectorXd;
using SpMat = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;

// Discrete p-Dirichlet energy  E(u) = sum_s w_s |G_s u|^p  where each stencil
// gradient G_s has one or two components (u[b] - u[a]) * scale. Nodes are
// numbered locally; some carry fixed values (0 outside the domain, 1 on an
// obstacle), the rest are unknowns.
struct Stencil {
  double weight;
  std::int32_t a[2];
  std::int32_t b[2];
  double scale[2];
  int ncomp;
};

class DiscreteEnergy {
 public:
  // Local node bookkeeping.
  std::vector<std::size_t> grid_node;  // local -> grid index (empty for abstract 1D meshes)
  std::vector<std::int32_t> free_id;   // local -> unknown index, -1 when fixed
  std::vector<std::int32_t> free_node; // unknown index -> local
  std::vector<double> fixed_value;     // local -> value on fixed nodes, 0 on free ones
  std::vector<double> mass;            // unknown index -> quadrature weight
  std::vector<Stencil> stencils;
  GridFrame frame;                     // owning grid, when there is one

  std::size_t num_local() const { return free_id.size(); }
  std::size_t num_free() const { return free_node.size(); }

  void expand(const Vec& x, std::vector<double>& u) const;
  double energy(const Vec& x, double p) const;
  // dE/dx over the unknowns.
  void gradient(const Vec& x, double p, Vec& g) const;
  // Grid-indexed values (fixed nodes included, zero elsewhere).
  std::vector<double> to_grid(const Vec& x) const;
  Vec from_grid(const std::vector<double>& values) const;
};

// u = 0 on every node outside the domain; forward differences on every node
// whose stencil touches the domain; unit node masses h^dim.
DiscreteEnergy dirichlet_energy(const GridDomain& domain);
// Same, with the obstacle nodes fixed to 1 (capacity problems).
DiscreteEnergy capacity_energy(const GridDomain& container, const ObstacleSet& obstacle);
// Free boundary: only differences between two inside nodes are kept.
DiscreteEnergy neumann_energy(const GridDomain& domain);
// Additionally pins the listed grid nodes to 0 (must be inside nodes).
DiscreteEnergy pinned_neumann_energy(const GridDomain& domain, const std::vector<std::size_t>& pins);

// Sparse Newton-type Hessian of E over the unknowns (lower triangle):
//   sum_s w_s p (|G|^2 + eta^2)^((p-2)/2) G_s^T (I + (p-2) g g^T / (|G|^2 + eta^2)) G_s.
// For p = 2 and eta = 0 this is exactly 2K where E = x^T K x + 2 b^T x + c.
// The sparsity pattern is fixed at construction, so repeated assembly only
// rewrites the value array.
class HessianAssembler {
 public:
  explicit HessianAssembler(const DiscreteEnergy& energy);
  const SpMat& assemble(const Vec& x, double p, double eta);
  const SpMat& matrix() const { return H_; }

 private:
  const DiscreteEnergy& energy_;
  SpMat H_;
  std::vector<std::int32_t> slot_;  // per stencil, 4x4 entry slots (-1 = unused)
};

// Weighted L^q quantities over the unknowns.
double weighted_lq(const Vec& x, const std::vector<double>& mass, double q);  // sum m |x|^q

}  // namespace pqfreq
