#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pqfreq/common.hpp"

namespace pqfreq {

// Uniform node lattice. Node (i, j) sits at (ox + i*h, oy + j*h) and has
// flat index j*nx + i. One-dimensional grids use ny = 1.
struct GridFrame {
  int dim = 2;
  int nx = 0;
  int ny = 1;
  double h = 0.0;
  double ox = 0.0;
  double oy = 0.0;

  std::size_t size() const { return static_cast<std::size_t>(nx) * ny; }
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * nx + i; }
  int col(std::size_t idx) const { return static_cast<int>(idx % nx); }
  int row(std::size_t idx) const { return static_cast<int>(idx / nx); }
  double x(int i) const { return ox + i * h; }
  double y(int j) const { return oy + j * h; }
  bool contains(int i, int j) const { return i >= 0 && j >= 0 && i < nx && j < ny; }

  bool operator==(const GridFrame&) const = default;
};

namespace shapes {
struct Disk { double r; };
struct Square { double side; };
struct Annulus { double r_in, r_out; };
struct Strip { double height, length; };
struct Perforated { int k; double beta; };
struct PepperWindow { int m; double eps; };
struct Interval { double start, end; };
}  // namespace shapes

using Shape = std::variant<shapes::Disk, shapes::Square, shapes::Annulus, shapes::Strip,
                           shapes::Perforated, shapes::PepperWindow, shapes::Interval>;

// A named set family plus the target grid spacing. Text form is
// "kind:key=value,key=value", e.g. "annulus:r_in=0.3,r_out=1".
struct DomainSpec {
  Shape shape;
  double h = 0.0;

  static DomainSpec parse(std::string_view text, double h);
  std::string to_string() const;
  int dim() const;
  void validate() const;
};

class GridDomain {
 public:
  GridDomain(GridFrame frame, std::vector<std::uint8_t> inside,
             std::optional<DomainSpec> spec = std::nullopt);

  const GridFrame& frame() const { return frame_; }
  int dim() const { return frame_.dim; }
  double h() const { return frame_.h; }
  std::size_t size() const { return frame_.size(); }

  bool inside(std::size_t idx) const { return inside_[idx] != 0; }
  bool inside(int i, int j) const { return frame_.contains(i, j) && inside_[frame_.index(i, j)]; }
  const std::vector<std::uint8_t>& mask() const { return inside_; }

  std::size_t inside_count() const { return count_; }
  // Lebesgue measure of the rasterized set: inside_count * h^dim.
  double measure() const;
  std::vector<std::size_t> inside_nodes() const;

  const std::optional<DomainSpec>& spec() const { return spec_; }
  std::string label() const;

  // Same set, window enlarged by `extra` outside nodes on every side.
  GridDomain padded(int extra) const;
  // Same mask with the given nodes removed.
  GridDomain without(const std::vector<std::size_t>& nodes) const;
  // Same mask on a grid scaled by t (spacing and origin times t).
  GridDomain dilated(double t) const;

 private:
  GridFrame frame_;
  std::vector<std::uint8_t> inside_;
  std::size_t count_ = 0;
  std::optional<DomainSpec> spec_;
};

// Marked nodes of a grid window: obstacles, punctures, complements.
class ObstacleSet {
 public:
  ObstacleSet(GridFrame frame, std::vector<std::size_t> nodes);

  static ObstacleSet single(const GridFrame& frame, std::size_t node);
  // Nodes within closed distance r of (cx, cy).
  static ObstacleSet disk(const GridFrame& frame, double cx, double cy, double r);

  const GridFrame& frame() const { return frame_; }
  const std::vector<std::size_t>& nodes() const { return nodes_; }
  std::size_t size() const { return nodes_.size(); }

 private:
  GridFrame frame_;
  std::vector<std::size_t> nodes_;
};

struct BuildOptions {
  std::size_t node_budget = 16'000'000;
};

GridDomain build_domain(const DomainSpec& spec, const BuildOptions& options = {});

// Squared Euclidean distance, in node units, from every node to the nearest
// outside node (zero on outside nodes). Exact.
std::vector<double> squared_distance_transform(const GridDomain& domain);

double inradius(const GridDomain& domain);

// Local maxima of a squared distance transform (8-neighbourhood), deepest
// first, thinned so that no two are closer than half the shallower depth.
std::vector<std::size_t> distance_peaks(const GridDomain& domain, const std::vector<double>& dist,
                                        std::size_t max_count);

struct InscribedBall {
  std::size_t center;
  double radius;
};
// Deepest node (first in index order on ties) and its distance to the complement.
InscribedBall inscribed_ball(const GridDomain& domain);

// Nodes of `domain` strictly closer than `radius` to `center`: the discrete
// inscribed ball, a subset of the domain whenever radius <= distance to the complement.
GridDomain ball_subdomain(const GridDomain& domain, std::size_t center, double radius);

// Number of connected components of the complement in the one-point
// compactification. Inside is 8-connected, complement 4-connected.
int topology_order(const GridDomain& domain);

// Number of 8-connected components of the inside mask.
int inside_components(const GridDomain& domain);

// Length of the orthogonal projection onto the line perpendicular to e_axis:
// axis 1 counts distinct rows, axis 2 counts distinct columns.
double projection_length(const ObstacleSet& obstacle, int axis);

struct FatnessWitness {
  ObstacleSet sigma;
  std::array<double, 2> projection;
  int k;
  double r;
  double side;
  double required;  // (sqrt(k)/4) r
  double margin;    // max projection - required
  bool pass;        // margin >= -2h
};

// Side of the square used by the fatness check: 10 (floor(sqrt k) + 1) r.
double taylor_square_side(int k, double r);

FatnessWitness taylor_fatness_check(const GridDomain& domain, std::array<double, 2> center,
                                    double side);

// Binary PGM (0 outside, 255 inside) plus a JSON sidecar next to it; 1D
// domains are written as a single JSON interval list.
void write_mask(const GridDomain& domain, const std::string& path);
GridDomain read_mask(const std::string& path);
std::string sidecar_path(const std::string& mask_path);

// Obstacle file: {"nodes": [[i, j], ...]}, {"points": [[x, y], ...]} or
// {"disks": [{"center": [x, y], "r": r}, ...]}; entries are merged.
ObstacleSet read_obstacle(const std::string& path, const GridFrame& frame);

}  // namespace pqfreq
