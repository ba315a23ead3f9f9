#include <doctest.h>

#include <cmath>
#include <random>

#include "pqfreq/maxflow.hpp"
#include "pqfreq/solvers.hpp"

using namespace pqfreq;

namespace {

GridDomain make(const std::string& spec, double h) { return build_domain(DomainSpec::parse(spec, h)); }

std::size_t node_near(const GridFrame& f, double x, double y = 0.0) {
  int i = static_cast<int>(std::lround((x - f.ox) / f.h));
  int j = f.dim == 2 ? static_cast<int>(std::lround((y - f.oy) / f.h)) : 0;
  return f.index(i, j);
}

}  // namespace

TEST_CASE("quotient gradient matches central differences") {
  GridDomain d = make("annulus:r_in=0.3,r_out=1", 0.125);
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> U(0.2, 1.0);
  for (bool shift : {false, true}) {
    DiscreteEnergy E = shift ? neumann_energy(d) : dirichlet_energy(d);
    for (auto [p, q] : {std::pair{1.5, 2.0}, {2.0, 4.0}, {3.0, 3.0}, {4.0, 8.0}, {2.5, 1.5}}) {
      QuotientProblem prob{&E, p, q, shift, !shift};
      for (int trial = 0; trial < 10; ++trial) {
        Vec x(static_cast<Eigen::Index>(E.num_free()));
        for (auto& v : x) v = U(gen);
        Vec g;
        quotient_gradient(prob, x, g);
        double worst = 0.0;
        for (int c = 0; c < 6; ++c) {
          Eigen::Index k = static_cast<Eigen::Index>(gen() % E.num_free());
          const double step = 1e-6;
          Vec a = x, b = x;
          a[k] += step;
          b[k] -= step;
          double fd = (quotient_value(prob, a) - quotient_value(prob, b)) / (2 * step);
          worst = std::max(worst, std::abs(fd - g[k]) / std::max(g.cwiseAbs().maxCoeff(), 1e-12));
        }
        CAPTURE(p);
        CAPTURE(q);
        CHECK(worst <= 1e-5);
      }
    }
  }
}

TEST_CASE("p = 2 Hessian is twice the quadratic form") {
  GridDomain d = make("disk:r=1", 0.1);
  DiscreteEnergy E = dirichlet_energy(d);
  HessianAssembler H(E);
  Vec x = Vec::Random(static_cast<Eigen::Index>(E.num_free()));
  const SpMat& K = H.assemble(x, 2.0, 0.0);
  CHECK(0.5 * x.dot(sym_multiply(K, x)) == doctest::Approx(E.energy(x, 2.0)).epsilon(1e-12));
}

TEST_CASE("CG and Cholesky backends agree") {
  GridDomain d = make("annulus:r_in=0.3,r_out=1", 1.0 / 32);
  SolveOptions chol, cg;
  cg.backend = LinearBackend::cg;
  for (auto [p, q] : {std::pair{2.0, 2.0}, {2.0, 1.0}, {3.0, 3.0}}) {
    double a = principal_frequency(d, Exponents(2, p, q), chol).value;
    double b = principal_frequency(d, Exponents(2, p, q), cg).value;
    CHECK(b == doctest::Approx(a).epsilon(1e-6));
  }
}

TEST_CASE("Dirichlet eigenvalue of the unit disk converges") {
  GridDomain d = make("disk:r=1", 1.0 / 64);
  SolveOptions o;
  o.refine = 2;
  SolveReport r = principal_frequency(d, Exponents(2, 2, 2), o);
  const double j01sq = kJ01 * kJ01;
  CHECK(r.converged);
  CHECK(r.value < j01sq);  // forward differences under-approximate
  CHECK(std::abs(r.value - j01sq) / j01sq < 0.02);
  CHECK(std::abs(*r.extrapolated - j01sq) / j01sq < std::abs(r.value - j01sq) / j01sq);
}

TEST_CASE("torsion of the unit disk") {
  GridDomain d = make("disk:r=1", 1.0 / 64);
  double v = principal_frequency(d, Exponents(2, 2, 1)).value;
  CHECK(std::abs(v - 8.0 / M_PI) / (8.0 / M_PI) < 0.03);
}

TEST_CASE("1D Dirichlet eigenvalue") {
  GridDomain d = make("interval:start=0,end=1", 1.0 / 256);
  double v = principal_frequency(d, Exponents(1, 2, 2)).value;
  CHECK(v == doctest::Approx(M_PI * M_PI).epsilon(0.01));
}

TEST_CASE("discrete monotonicity under inclusion") {
  GridDomain d = make("pepper_window:m=1,eps=0.2", 1.0 / 16);
  InscribedBall b = inscribed_ball(d);
  GridDomain ball = ball_subdomain(d, b.center, b.radius);
  for (auto [p, q] : {std::pair{2.0, 2.0}, {1.5, 2.0}, {4.0, 4.0}}) {
    double big = principal_frequency(d, Exponents(2, p, q)).value;
    double small = principal_frequency(ball, Exponents(2, p, q)).value;
    CHECK(big <= small * (1 + 1e-6));
  }
}

TEST_CASE("p-homogeneous problems scale with the dilation degree") {
  GridDomain d = make("square:side=1", 1.0 / 16);
  for (auto [p, q] : {std::pair{2.0, 2.0}, {3.0, 3.0}, {2.0, 4.0}}) {
    Exponents e(2, p, q);
    double a = principal_frequency(d, e).value;
    double b = principal_frequency(d.dilated(2.0), e).value;
    CHECK(b == doctest::Approx(a * std::pow(2.0, -scaling_exponent(e))).epsilon(1e-6));
  }
}

TEST_CASE("1D point capacities") {
  GridDomain d = make("interval:start=0,end=1", 1.0 / 256);
  for (auto [x0, exact] : {std::pair{0.5, 4.0}, {0.25, 16.0 / 3.0}}) {
    SolveReport r = capacity(d, ObstacleSet::single(d.frame(), node_near(d.frame(), x0)), 2.0);
    CHECK(std::abs(r.value - exact) / exact < 0.01);
    CHECK(r.value >= 4.0);
  }
  SolveReport r4 = capacity(d, ObstacleSet::single(d.frame(), node_near(d.frame(), 0.3)), 4.0);
  CHECK(r4.value >= std::pow(2.0, 4.0) * (1 - 1e-12));
}

TEST_CASE("disk relative capacity") {
  GridDomain d = make("disk:r=1", 1.0 / 256);
  SolveReport r = capacity(d, ObstacleSet::disk(d.frame(), 0, 0, 0.01), 2.0);
  CHECK(std::abs(r.value - disk_relative_capacity(0.01)) / disk_relative_capacity(0.01) < 0.05);
}

TEST_CASE("capacity is monotone in the obstacle") {
  GridDomain d = make("square:side=2", 1.0 / 16);
  double prev = 0.0;
  for (double r : {0.1, 0.25, 0.5}) {
    double v = capacity(d, ObstacleSet::disk(d.frame(), 0, 0, r), 3.0).value;
    CHECK(v > prev);
    prev = v;
  }
}

TEST_CASE("capacity rejects obstacles outside the container") {
  GridDomain d = make("disk:r=1", 0.1);
  CHECK_THROWS_AS(capacity(d, ObstacleSet::single(d.frame(), 0), 2.0), ValidationError);
}

TEST_CASE("min cut on a small graph matches brute force") {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 8;
    CutGraph G(n);
    std::vector<std::array<double, 4>> edges;
    std::vector<double> src(n), snk(n);
    for (int u = 0; u < n; ++u) {
      src[u] = U(gen);
      snk[u] = U(gen);
      G.add_terminal(u, src[u], snk[u]);
    }
    for (int k = 0; k < 14; ++k) {
      int u = static_cast<int>(gen() % n), v = static_cast<int>(gen() % n);
      if (u == v) continue;
      double a = U(gen), b = U(gen);
      G.add_edge(u, v, a, b);
      edges.push_back({double(u), double(v), a, b});
    }
    double best = 1e300;
    for (int mask = 0; mask < (1 << n); ++mask) {
      double c = 0.0;
      for (int u = 0; u < n; ++u) c += (mask >> u & 1) ? snk[u] : src[u];
      for (auto& e : edges) {
        bool su = mask >> int(e[0]) & 1, sv = mask >> int(e[1]) & 1;
        if (su && !sv) c += e[2];
        if (sv && !su) c += e[3];
      }
      best = std::min(best, c);
    }
    double flow = G.solve();
    CHECK(flow == doctest::Approx(best).epsilon(1e-12));
    double cut = 0.0;
    for (int u = 0; u < n; ++u) cut += G.source_side(u) ? snk[u] : src[u];
    for (auto& e : edges) {
      bool su = G.source_side(int(e[0])), sv = G.source_side(int(e[1]));
      if (su && !sv) cut += e[2];
      if (sv && !su) cut += e[3];
    }
    CHECK(cut == doctest::Approx(best).epsilon(1e-12));
  }
}

TEST_CASE("geo-cut perimeter of a disk") {
  GridDomain d = make("square:side=3", 1.0 / 64);
  std::vector<std::uint8_t> in(d.size(), 0);
  const GridFrame& f = d.frame();
  for (auto idx : d.inside_nodes()) {
    double x = f.x(f.col(idx)), y = f.y(f.row(idx));
    in[idx] = x * x + y * y < 1.0;
  }
  CHECK(std::abs(geo_perimeter(d, in) - 2 * M_PI) / (2 * M_PI) < 0.04);
}

TEST_CASE("Cheeger constant of the unit square, max-flow and TV") {
  GridDomain d = make("square:side=1", 1.0 / 128);
  SolveReport mf = cheeger_maxflow(d);
  const double exact = 2.0 + std::sqrt(M_PI);
  CHECK(std::abs(mf.value - exact) / exact < 0.04);
  SolveReport tv = lambda11_tv(d);
  CHECK(std::abs(tv.value - mf.value) / mf.value < 0.05);
  CHECK(mf.diagnostics.at("set_perimeter") / mf.diagnostics.at("set_area") == doctest::Approx(mf.value));
}

TEST_CASE("Cheeger of the disk is near 2 and below the Dirichlet bound") {
  GridDomain d = make("disk:r=1", 1.0 / 64);
  double h = cheeger_maxflow(d).value;
  CHECK(std::abs(h - 2.0) / 2.0 < 0.05);
  double lam = principal_frequency(d, Exponents(2, 2, 2)).value;
  CHECK(h * h / 4.0 <= lam);
}

TEST_CASE("Cheeger constant of a long strip sits near 2, not 1") {
  // rounded-corner rectangle a x b: h = (4 - pi) / (a + b - sqrt((a - b)^2 + pi a b))
  const double a = 30.0, b = 1.0;
  const double closed = (4.0 - M_PI) / (a + b - std::sqrt((a - b) * (a - b) + M_PI * a * b));
  GridDomain d = make("strip:height=1,length=30", 1.0 / 32);
  double v = cheeger_maxflow(d).value;
  MESSAGE("strip(1, 30) Cheeger: " << v << "  rectangle closed form: " << closed);
  CHECK(std::abs(v - closed) / closed < 0.04);
  CHECK(std::abs(v - 2.0) < std::abs(v - 1.0));
}

TEST_CASE("radial reduction: L-infinity value against the profile formula") {
  SolveReport r = punctured_radial(2, 4.0, RadialMode::Linf, 4000);
  CHECK(std::abs(r.value - punctured_ball_value(2, 4.0)) / punctured_ball_value(2, 4.0) < 0.01);
  SolveReport r1 = punctured_radial(1, 3.0, RadialMode::Linf, 4000);
  CHECK(std::abs(r1.value - punctured_ball_value(1, 3.0)) / punctured_ball_value(1, 3.0) < 0.01);
}

TEST_CASE("radial reduction: 1D Lp value is a quarter-period eigenvalue") {
  // u(0) = 0 on (-1, 1): the two halves are (0, 1) with a free end, (pi/2)^2 for p = 2
  SolveReport r = punctured_radial(1, 2.0, RadialMode::Lp, 4000);
  CHECK(r.value == doctest::Approx(M_PI * M_PI / 4.0).epsilon(0.005));
  CHECK_THROWS_AS(punctured_radial(2, 2.0, RadialMode::Lp), ValidationError);
}

TEST_CASE("radial reduction: 1D Lp value against the p-sine closed form") {
  // mixed problem on (0, 1): (p - 1) (pi_p / 2)^p with pi_p = 2 pi / (p sin(pi / p))
  for (double p : {3.0, 4.0, 8.0, 16.0}) {
    const double pi_p = 2.0 * M_PI / (p * std::sin(M_PI / p));
    const double exact = (p - 1.0) * std::pow(pi_p / 2.0, p);
    SolveReport r = punctured_radial(1, p, RadialMode::Lp, 4000);
    CAPTURE(p);
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(exact).epsilon(0.005));
  }
}

TEST_CASE("radial Lp constant in the plane stays below the disk eigenvalue scale") {
  double prev = 0.0;
  for (double p : {2.5, 4.0, 8.0, 16.0}) {
    double v = punctured_radial(2, p, RadialMode::Lp, 2000).value;
    CAPTURE(p);
    CHECK(v > prev);
    CHECK(std::pow(v, 1.0 / p) < 1.5);
    prev = v;
  }
}

TEST_CASE("L-infinity frequency of the disk") {
  GridDomain d = make("disk:r=1", 1.0 / 32);
  SolveOptions o;
  o.refine = 2;
  SolveReport r = linf_frequency(d, 4.0, o);
  CHECK(std::abs(r.diagnostics.at("peak_x")) < 0.1);
  CHECK(std::abs(r.diagnostics.at("peak_y")) < 0.1);
  CHECK(*r.extrapolated <= 16 * M_PI / 27 * 1.03);
  CHECK_THROWS_AS(linf_frequency(d, 2.0), ValidationError);
}

TEST_CASE("Hoelder interpolation holds on the grid") {
  GridDomain d = make("annulus:r_in=0.3,r_out=1", 1.0 / 16);
  double lp = principal_frequency(d, Exponents(2, 4, 4)).value;
  double li = linf_frequency(d, 4.0).value;
  double lq = principal_frequency(d, Exponents(2, 4, 8)).value;
  CHECK(lq >= std::pow(li, 0.5) * std::pow(lp, 0.5) * (1 - 1e-3));
}

TEST_CASE("Neumann constant of the disk") {
  GridDomain d = make("disk:r=1", 1.0 / 64);
  double mu = neumann_constant(d, Exponents(2, 2, 2)).value;
  const double jp11 = 1.841183781;
  CHECK(std::abs(mu - jp11 * jp11) / (jp11 * jp11) < 0.03);
  CHECK(mu >= mu_lower_bound(Exponents(2, 2, 2), M_PI, 2.0));
  CHECK_THROWS_AS(neumann_constant(d, Exponents(2, 1, 1)), ValidationError);
}

TEST_CASE("pinned Poincare constant decreases as the pin shrinks") {
  GridDomain q = make("square:side=2", 1.0 / 16);
  auto pins_r = [&](double r) {
    std::vector<std::size_t> out;
    ObstacleSet pin = ObstacleSet::disk(q.frame(), 0, 0, r);
    for (auto idx : pin.nodes())
      if (q.inside(idx)) out.push_back(idx);
    return out;
  };
  double a = pinned_poincare(q, pins_r(0.3), 4.0).value;
  double b = pinned_poincare(q, pins_r(0.15), 4.0).value;
  CHECK(a > b);
  CHECK(b > 0.0);
}

TEST_CASE("extension by inversion respects its norm factors") {
  GridDomain d = make("disk:r=0.5", 1.0 / 32);
  Field u;
  u.frame = d.frame();
  u.values.assign(d.size(), 0.0);
  for (auto idx : d.inside_nodes()) {
    double x = u.frame.x(u.frame.col(idx)), y = u.frame.y(u.frame.row(idx));
    u.values[idx] = 1.0 + 0.5 * std::sin(3 * x) * std::cos(2 * y);
  }
  for (double p : {1.5, 2.0, 4.0}) {
    ExtensionReport er = extend_inversion(d, u, {0.0, 0.0}, 0.5, 1.0, p);
    CHECK(er.lp_ok);
    CHECK(er.grad_ok);
    CHECK(er.norm_ext >= er.norm_u);
  }
}

TEST_CASE("symmetrization does not increase the energy and keeps the Lp mass") {
  GridDomain cube = make("square:side=1", 1.0 / 32);
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  Field u;
  u.frame = cube.frame();
  u.values.assign(cube.size(), 0.0);
  for (auto idx : cube.inside_nodes()) {
    double x = u.frame.x(u.frame.col(idx)), y = u.frame.y(u.frame.row(idx));
    u.values[idx] = std::sin(4 * x + 1) + 0.3 * y + 0.05 * U(gen);
  }
  for (double p : {1.5, 2.0, 4.0}) {
    SymmetrizeReport s = symmetrize(cube, u, p);
    CHECK(s.energy_after <= s.energy_before * 1.02);
    CHECK(s.lp_after == doctest::Approx(s.lp_before).epsilon(1e-10));
  }
}

TEST_CASE("input validation") {
  GridDomain d = make("disk:r=1", 0.1);
  CHECK_THROWS_AS(principal_frequency(d, Exponents(2, 4, kInf)), ValidationError);
  CHECK_THROWS_AS(principal_frequency(d, Exponents(2, 1, 1.5)), ValidationError);
  CHECK_THROWS_AS(principal_frequency(d, Exponents(1, 2, 2)), ValidationError);
}
