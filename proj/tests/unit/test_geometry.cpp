#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "pqfreq/geometry.hpp"

using namespace pqfreq;

namespace {

GridDomain make(const std::string& spec, double h) { return build_domain(DomainSpec::parse(spec, h)); }

// Brute-force squared distance to the nearest outside node.
double brute_inradius(const GridDomain& d) {
  const GridFrame& f = d.frame();
  double best = 0.0;
  for (std::size_t a = 0; a < d.size(); ++a) {
    if (!d.inside(a)) continue;
    double m = 1e300;
    for (std::size_t b = 0; b < d.size(); ++b) {
      if (d.inside(b)) continue;
      double di = f.col(a) - f.col(b), dj = f.row(a) - f.row(b);
      m = std::min(m, di * di + dj * dj);
    }
    best = std::max(best, m);
  }
  return std::sqrt(best) * f.h;
}

}  // namespace

TEST_CASE("disk area and inradius") {
  const double h = 1.0 / 128;
  GridDomain d = make("disk:r=1", h);
  CHECK(std::abs(d.measure() - M_PI) / M_PI < 0.01);
  CHECK(std::abs(inradius(d) - 1.0) <= h * std::sqrt(2.0));
}

TEST_CASE("strip inradius is half the height") {
  const double h = 1.0 / 32;
  GridDomain d = make("strip:height=2,length=20", h);
  CHECK(std::abs(inradius(d) - 1.0) <= h * std::sqrt(2.0));
}

TEST_CASE("exact distance transform matches brute force") {
  for (const char* spec : {"annulus:r_in=0.3,r_out=1", "perforated:k=4,beta=0.6", "pepper_window:m=1,eps=0.2"}) {
    GridDomain d = make(spec, 1.0 / 12);
    CHECK(inradius(d) == doctest::Approx(brute_inradius(d)).epsilon(1e-12));
  }
}

TEST_CASE("perforated inradius sits at the interior lattice corners") {
  const double h = 1.0 / 32;
  for (int k : {4, 9, 16}) {
    double r = inradius(make("perforated:k=" + std::to_string(k) + ",beta=0.6", h));
    CHECK(std::abs(r - (std::sqrt(0.5) - std::pow(k, -0.6))) <= std::sqrt(2.0) * h);
  }
}

TEST_CASE("topology order of the builder families") {
  CHECK(topology_order(make("disk:r=1", 1.0 / 16)) == 1);
  CHECK(topology_order(make("annulus:r_in=0.3,r_out=1", 1.0 / 32)) == 2);
  CHECK(topology_order(make("perforated:k=4,beta=0.6", 1.0 / 32)) == 5);
  CHECK(topology_order(make("perforated:k=7,beta=0.6", 1.0 / 32)) == 8);
  CHECK(topology_order(make("pepper_window:m=2,eps=0.0625", 1.0 / 32)) == 26);
}

TEST_CASE("topology order is invariant under refinement") {
  for (const char* spec : {"disk:r=1", "square:side=1.5", "annulus:r_in=0.3,r_out=1", "strip:height=1,length=3",
                           "perforated:k=5,beta=0.6", "pepper_window:m=1,eps=0.15"}) {
    CAPTURE(spec);
    CHECK(topology_order(make(spec, 1.0 / 16)) == topology_order(make(spec, 1.0 / 32)));
  }
}

TEST_CASE("disconnected masks are rejected by topology_order") {
  GridDomain d = make("square:side=1", 0.125);
  GridFrame f = d.frame();
  std::vector<std::uint8_t> mask(f.size(), 0);
  mask[f.index(2, 2)] = 1;
  mask[f.index(6, 6)] = 1;
  CHECK_THROWS_AS(topology_order(GridDomain(f, mask)), ValidationError);
}

TEST_CASE("inradius scales with integer refinement") {
  GridDomain d = make("annulus:r_in=0.25,r_out=1", 1.0 / 16);
  CHECK(inradius(d.dilated(2.0)) == doctest::Approx(2.0 * inradius(d)).epsilon(1e-14));
}

TEST_CASE("projection lengths") {
  GridFrame f{2, 32, 32, 0.1, 0.0, 0.0};
  std::vector<std::size_t> row, diag;
  for (int i = 0; i < 10; ++i) {
    row.push_back(f.index(5 + i, 7));
    diag.push_back(f.index(5 + i, 5 + i));
  }
  ObstacleSet seg(f, row), dg(f, diag);
  CHECK(projection_length(seg, 1) == doctest::Approx(0.1));
  CHECK(projection_length(seg, 2) == doctest::Approx(1.0));
  CHECK(projection_length(dg, 1) == doctest::Approx(1.0));
  CHECK(projection_length(dg, 2) == doctest::Approx(1.0));
  CHECK(projection_length(ObstacleSet::single(f, f.index(3, 3)), 1) == doctest::Approx(0.1));
}

TEST_CASE("projection length is bounded by the bounding box") {
  GridFrame f{2, 40, 40, 0.05, -1.0, -1.0};
  for (double r : {0.1, 0.33, 0.7}) {
    ObstacleSet s = ObstacleSet::disk(f, 0.013, -0.02, r);
    int imin = 1 << 30, imax = -1, jmin = 1 << 30, jmax = -1;
    for (auto idx : s.nodes()) {
      imin = std::min(imin, f.col(idx));
      imax = std::max(imax, f.col(idx));
      jmin = std::min(jmin, f.row(idx));
      jmax = std::max(jmax, f.row(idx));
    }
    CHECK(projection_length(s, 1) <= (jmax - jmin) * f.h + f.h + 1e-12);
    CHECK(projection_length(s, 2) <= (imax - imin) * f.h + f.h + 1e-12);
  }
}

TEST_CASE("fatness check on a disk and on a perforated block") {
  GridDomain disk = make("disk:r=1", 1.0 / 16);
  double side = taylor_square_side(1, inradius(disk));
  GridDomain padded = disk.padded(static_cast<int>(std::ceil(side / disk.h())) + 2);
  FatnessWitness w = taylor_fatness_check(padded, {0.3, -0.2}, side);
  CHECK(w.pass);
  CHECK(std::max(w.projection[0], w.projection[1]) >= 0.25 * inradius(disk) - 2.0 / 16);

  GridDomain perf = make("perforated:k=4,beta=0.6", 1.0 / 16);
  double s2 = taylor_square_side(5, inradius(perf));
  GridDomain pp = perf.padded(static_cast<int>(std::ceil(s2 / perf.h())) + 2);
  FatnessWitness w2 = taylor_fatness_check(pp, {1.0, 1.0}, s2);
  CHECK(w2.pass);
  CHECK(w2.k == 5);
}

TEST_CASE("fatness check rejects a wrong square side") {
  GridDomain disk = make("disk:r=1", 1.0 / 16);
  CHECK_THROWS_AS(taylor_fatness_check(disk.padded(40), {0.0, 0.0}, 3.0), ValidationError);
}

TEST_CASE("builder errors") {
  CHECK_THROWS_AS(DomainSpec::parse("disk:r=-1", 0.1).validate(), ValidationError);
  CHECK_THROWS_AS(make("disk:radius=1", 0.1), ValidationError);
  CHECK_THROWS_AS(make("perforated:k=4,beta=0.4", 0.01), ValidationError);
  CHECK_THROWS_AS(make("perforated:k=400,beta=0.9", 1.0 / 64), ResolutionError);
  BuildOptions tiny;
  tiny.node_budget = 100;
  CHECK_THROWS_AS(build_domain(DomainSpec::parse("disk:r=1", 0.01), tiny), ResolutionError);
}

TEST_CASE("every inside node keeps a margin to the window edge") {
  for (const char* spec : {"disk:r=1", "square:side=1", "strip:height=1,length=2", "pepper_window:m=1,eps=0.2"}) {
    GridDomain d = make(spec, 1.0 / 16);
    const GridFrame& f = d.frame();
    for (auto idx : d.inside_nodes()) {
      CHECK(f.col(idx) >= 1);
      CHECK(f.row(idx) >= 1);
      CHECK(f.col(idx) <= f.nx - 2);
      CHECK(f.row(idx) <= f.ny - 2);
    }
  }
}

TEST_CASE("mask round trip keeps every bit") {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "pqfreq_mask_test";
  fs::create_directories(dir);
  for (const char* spec : {"annulus:r_in=0.3,r_out=1", "interval:start=0,end=1"}) {
    GridDomain d = make(spec, 1.0 / 32);
    std::string path = (dir / (d.dim() == 2 ? "m.pgm" : "m.json")).string();
    write_mask(d, path);
    GridDomain back = read_mask(path);
    CHECK(back.frame() == d.frame());
    CHECK(back.mask() == d.mask());
  }
  fs::remove_all(dir);
}

TEST_CASE("domain spec text round trip") {
  DomainSpec s = DomainSpec::parse("annulus:r_in=0.3,r_out=1", 0.05);
  CHECK(DomainSpec::parse(s.to_string(), 0.05).to_string() == s.to_string());
}
