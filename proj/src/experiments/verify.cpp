#include <algorithm>
#include <cmath>
#include <mutex>
#include <set>

#include "pqfreq/experiments.hpp"

namespace pqfreq {

namespace {

struct Descriptors {
  double r = 0.0;
  int k = 1;
  double volume = 0.0;
  double diameter = 0.0;
};

double diameter_of(const GridDomain& d) {
  const GridFrame& f = d.frame();
  std::vector<std::array<double, 2>> rim;
  for (auto idx : d.inside_nodes()) {
    int i = f.col(idx), j = f.row(idx);
    bool edge = !d.inside(i + 1, j) || !d.inside(i - 1, j);
    if (f.dim == 2) edge = edge || !d.inside(i, j + 1) || !d.inside(i, j - 1);
    if (edge) rim.push_back({f.x(i), f.dim == 2 ? f.y(j) : 0.0});
  }
  double best = 0.0;
  for (std::size_t a = 0; a < rim.size(); ++a)
    for (std::size_t b = a + 1; b < rim.size(); ++b)
      best = std::max(best, std::hypot(rim[a][0] - rim[b][0], rim[a][1] - rim[b][1]));
  return best;
}

// Seeded smooth test field: constant plus three random plane waves.
Field smooth_field(const GridDomain& d, CounterRng& rng, double r) {
  double c0 = rng.uniform(-1.0, 1.0);
  double amp[3], wx[3], wy[3], ph[3];
  for (int m = 0; m < 3; ++m) {
    amp[m] = rng.uniform(-1.0, 1.0);
    double w = rng.uniform(0.5, 3.0) / r, th = rng.uniform(0.0, 2.0 * kPi);
    wx[m] = w * std::cos(th);
    wy[m] = w * std::sin(th);
    ph[m] = rng.uniform(0.0, 2.0 * kPi);
  }
  const GridFrame& f = d.frame();
  Field u;
  u.frame = f;
  u.values.assign(f.size(), 0.0);
  for (auto idx : d.inside_nodes()) {
    double x = f.x(f.col(idx)), y = f.y(f.row(idx));
    double v = c0;
    for (int m = 0; m < 3; ++m) v += amp[m] * std::sin(wx[m] * x + wy[m] * y + ph[m]);
    u.values[idx] = v;
  }
  return u;
}

struct Value {
  double value = 0.0;
  bool ok = false;         // computed at all
  bool converged = false;
  std::string error;
};

Value solve_lambda(const GridDomain& d, double p, double q, const SolveOptions& opt) {
  Value v;
  try {
    SolveReport rep;
    if (std::isinf(q)) rep = linf_frequency(d, p, opt);
    else rep = principal_frequency(d, Exponents(d.dim(), p, q), opt);
    v.value = rep.value;
    v.converged = rep.converged;
    v.ok = std::isfinite(rep.value);
  } catch (const std::exception& e) {
    v.error = e.what();
  }
  return v;
}

class RowSink {
 public:
  RowSink(std::string domain, const Descriptors& dd) : domain_(std::move(domain)), d_(dd) {}

  void add(BoundRow row, const std::string& exponents, bool failed, std::string note = {}) {
    row.domain = domain_;
    row.exponents = exponents;
    row.r = d_.r;
    row.k = d_.k;
    row.volume = d_.volume;
    row.diameter = d_.diameter;
    row.solver_failed = failed;
    row.note = std::move(note);
    rows.push_back(std::move(row));
  }
  void failure(const std::string& label, const std::string& exponents, const std::string& what) {
    BoundRow row;
    row.label = label;
    row.kind = "lower";
    row.target = row.bound = row.margin = std::nan("");
    row.pass = false;
    add(std::move(row), exponents, true, what);
  }

  std::vector<BoundRow> rows;

 private:
  std::string domain_;
  Descriptors d_;
};

struct Shared {
  // Lambda_p(B_1 \ {0}) from the radial reduction, per p
  std::map<std::pair<int, double>, double> punctured_lp;
};

std::vector<BoundRow> domain_rows(const std::string& spec_text, std::size_t index, const Campaign& c,
                                  const Shared& shared) {
  const SolveOptions& opt = c.solve;
  BuildOptions bo;
  bo.node_budget = opt.node_budget;
  GridDomain dom = build_domain(DomainSpec::parse(spec_text, c.h), bo);

  Descriptors dd;
  const int N = dom.dim();
  auto ball_info = inscribed_ball(dom);
  dd.r = ball_info.radius;
  dd.volume = dom.measure();
  dd.diameter = diameter_of(dom);
  dd.k = 1;
  RowSink sink(spec_text, dd);
  if (N == 2) {
    try {
      dd.k = topology_order(dom);
      sink = RowSink(spec_text, dd);
    } catch (const std::exception& e) {
      sink.failure("topology", "", e.what());
      return sink.rows;
    }
  }
  const double r = dd.r;
  const int k = dd.k;
  GridDomain ball = ball_subdomain(dom, ball_info.center, r);
  CounterRng rng(c.seed, 1000 + index);

  // exponent grid plus the pair needed for the interpolation check
  std::vector<std::pair<double, double>> grid = c.exponents;
  std::set<double> finite_p;
  for (auto [p, q] : c.exponents) {
    if (!std::isinf(p)) finite_p.insert(p);
    if (p > N && !std::isinf(q) && q == p) {
      bool has_inf = std::count(grid.begin(), grid.end(), std::make_pair(p, kInf)) > 0;
      auto mid = std::make_pair(p, 2.0 * p);
      if (has_inf && std::count(grid.begin(), grid.end(), mid) == 0) grid.push_back(mid);
    }
  }

  std::map<std::pair<double, double>, Value> lam, lam_ball;
  for (auto [p, q] : grid) {
    if (!Exponents::admissible(N, p, q)) continue;
    std::string ex = Exponents(N, p, q).to_string();
    if (p == 1.0 && q != 1.0) continue;
    if (p == 1.0 && N != 2) continue;
    if (std::isinf(q) && !(p > N)) continue;
    Value v = solve_lambda(dom, p, q, opt);
    Value vb = solve_lambda(ball, p, q, opt);
    lam[{p, q}] = v;
    lam_ball[{p, q}] = vb;
    if (!v.ok || !vb.ok) {
      sink.failure("solve", ex, v.ok ? vb.error : v.error);
      continue;
    }
    bool failed = !v.converged || !vb.converged;
    Exponents e(N, p, q);

    if (N == 2 && p <= q) {
      bool theta_ok = true;
      try {
        check_theta_exponents(e);
      } catch (const ValidationError&) {
        theta_ok = false;
      }
      if (theta_ok)
        sink.add(lower_bound_row("theta_lower_x10", v.value, 10.0 * theta_lower_bound(e, k, r), 0.0), ex, failed);
    }
    double up = vb.value;
    sink.add(upper_bound_row("inradius_ball_upper", v.value, up, 1e-3 * up), ex, failed);

    if (p > N) {
      auto pr = shared.punctured_lp.find({N, p});
      double lp_ball = pr != shared.punctured_lp.end() ? pr->second : 0.0;
      EndpointBounds eb = endpoint_bounds(e, r, lp_ball, punctured_linf_lower(N, p));
      if (q == p) sink.add(lower_bound_row("endpoint_lp", v.value, eb.lambda_p_lower, 0.0), ex, failed);
      else if (std::isinf(q))
        sink.add(lower_bound_row("endpoint_linf", v.value, eb.lambda_inf_lower, 0.0), ex, failed);
      else if (eb.interpolated_lower)
        sink.add(lower_bound_row("interpolation_closed_form", v.value, *eb.interpolated_lower, 0.0), ex, failed);
    }
  }

  // discrete Hoelder interpolation between (p, p) and (p, inf)
  for (auto [p, q] : grid) {
    if (!(p > N) || std::isinf(q) || q <= p) continue;
    auto a = lam.find({p, q}), lp = lam.find({p, p}), li = lam.find({p, kInf});
    if (a == lam.end() || lp == lam.end() || li == lam.end()) continue;
    if (!a->second.ok || !lp->second.ok || !li->second.ok) continue;
    double t = p / q;
    double bound = std::pow(li->second.value, 1.0 - t) * std::pow(lp->second.value, t);
    bool failed = !a->second.converged || !lp->second.converged || !li->second.converged;
    sink.add(lower_bound_row("holder_interpolation", a->second.value, bound, 1e-3 * bound),
             Exponents(N, p, q).to_string(), failed);
  }

  if (N != 2) return sink.rows;

  // Cheeger and Buser
  {
    std::string ex = Exponents(2, 2.0, 2.0).to_string();
    try {
      SolveReport ch = cheeger_maxflow(dom, opt);
      double t11 = theta(Exponents(2, 1.0, 1.0));
      sink.add(lower_bound_row("cheeger_lower_x10", ch.value, 10.0 * t11 / (std::sqrt(double(k)) * r), 0.0),
               Exponents(2, 1.0, 1.0).to_string(), !ch.converged);
      auto it = lam.find({2.0, 2.0});
      if (it != lam.end() && it->second.ok) {
        double l = it->second.value;
        BuserBounds bb = buser_bounds(k, ch.value, r);
        bool failed = !ch.converged || !it->second.converged;
        sink.add(lower_bound_row("cheeger_inequality", l, bb.lambda_lower, 0.05 * l), ex, failed);
        sink.add(upper_bound_row("buser_upper", l, bb.buser_upper, 0.0), ex, failed);
      }
    } catch (const std::exception& e) {
      sink.failure("cheeger", ex, e.what());
    }
  }

  // capacity against projections of seeded obstacles inside the inscribed ball
  {
    const GridFrame& f = ball.frame();
    const double h = f.h;
    std::vector<std::size_t> marks;
    int blobs = rng.integer(1, 2);
    double cx0 = f.x(f.col(ball_info.center)), cy0 = f.y(f.row(ball_info.center));
    for (int b = 0; b < blobs; ++b) {
      double rho = rng.uniform(2.0 * h, std::max(2.0 * h, r / 3.0));
      double reach = std::max(0.0, r - rho - 3.0 * h);
      double a = rng.uniform(0.0, 2.0 * kPi), s = reach * std::sqrt(rng.uniform());
      auto disk = ObstacleSet::disk(f, cx0 + s * std::cos(a), cy0 + s * std::sin(a), rho);
      for (auto idx : disk.nodes())
        if (ball.inside(idx)) marks.push_back(idx);
    }
    if (marks.empty()) marks.push_back(ball_info.center);
    ObstacleSet sigma(f, marks);
    double proj = std::max(projection_length(sigma, 1), projection_length(sigma, 2));
    for (double p : finite_p) {
      std::string ex = "p=" + format_number(p);
      try {
        SolveReport cap = capacity(ball, sigma, p, opt);
        double bound = 2.0 / std::pow(r, p - 1.0) * proj;
        sink.add(lower_bound_row("capacity_projection", cap.value, bound, 0.05 * bound), ex, !cap.converged);
      } catch (const std::exception& e) {
        sink.failure("capacity_projection", ex, e.what());
      }
    }
  }

  // fatness squares at seeded placements meeting the domain
  {
    double side = taylor_square_side(k, r);
    int extra = static_cast<int>(std::ceil(side / dom.h())) + 2;
    try {
      GridDomain padded = dom.padded(extra);
      const GridFrame& f = dom.frame();
      std::vector<std::size_t> nodes = dom.inside_nodes();
      for (int t = 0; t < 3; ++t) {
        std::size_t idx = nodes[static_cast<std::size_t>(rng.integer(0, static_cast<int>(nodes.size()) - 1))];
        double dx = rng.uniform(-0.5, 0.5) * side, dy = rng.uniform(-0.5, 0.5) * side;
        std::array<double, 2> center{f.x(f.col(idx)) + dx, f.y(f.row(idx)) + dy};
        FatnessWitness w = taylor_fatness_check(padded, center, side);
        double target = std::max(w.projection[0], w.projection[1]);
        sink.add(lower_bound_row("fatness", target, w.required, 2.0 * dom.h()), "k=" + std::to_string(k), false,
                 "placement " + std::to_string(t));
      }
    } catch (const std::exception& e) {
      sink.failure("fatness", "k=" + std::to_string(k), e.what());
    }
  }

  // extension by inversion from the inscribed ball
  {
    const GridFrame& f = ball.frame();
    std::array<double, 2> x0{f.x(f.col(ball_info.center)), f.y(f.row(ball_info.center))};
    Field u = smooth_field(ball, rng, r);
    double R = r * rng.uniform(1.5, 3.0);
    for (double p : finite_p) {
      std::string ex = "p=" + format_number(p);
      try {
        ExtensionReport er = extend_inversion(ball, u, x0, r, R, p);
        double b1 = er.factor_lp * er.norm_u, b2 = er.factor_grad * er.grad_u;
        sink.add(upper_bound_row("extension_lp", er.norm_ext, b1, er.slack * b1), ex, false);
        sink.add(upper_bound_row("extension_grad", er.grad_ext, b2, er.slack * b2), ex, false);
      } catch (const std::exception& e) {
        sink.failure("extension", ex, e.what());
      }
    }
  }

  // symmetrization on a cube of side 2r
  {
    try {
      DomainSpec cs = DomainSpec::parse("square:side=" + format_number(2.0 * r), c.h);
      GridDomain cube = build_domain(cs);
      Field u = smooth_field(cube, rng, r);
      for (double p : finite_p) {
        if (!(p > 1.0)) continue;
        std::string ex = "p=" + format_number(p);
        SymmetrizeReport sr = symmetrize(cube, u, p);
        sink.add(upper_bound_row("symmetrization_energy", sr.energy_after, sr.energy_before, 0.02 * sr.energy_before),
                 ex, false);
      }
    } catch (const std::exception& e) {
      sink.failure("symmetrization", "", e.what());
    }
  }
  return sink.rows;
}

}  // namespace

VerifyResult verify_inequalities(const Campaign& c) {
  std::vector<std::string> specs = c.domains;
  for (auto& s : seeded_domain_specs(c.seed, c.seeded_domains)) specs.push_back(s);

  Shared shared;
  std::set<std::pair<int, double>> supercritical;
  for (auto [p, q] : c.exponents)
    for (int N : {1, 2})
      if (p > N && std::isfinite(p)) supercritical.insert({N, p});
  for (auto key : supercritical) {
    try {
      shared.punctured_lp[key] = punctured_radial(key.first, key.second, RadialMode::Lp, 2000, c.solve).value;
    } catch (const std::exception&) {
      // endpoint rows fall back to the Hardy term alone
    }
  }

  std::vector<std::vector<BoundRow>> per(specs.size());
  run_pool(
      specs.size(),
      [&](std::size_t i) {
        try {
          per[i] = domain_rows(specs[i], i, c, shared);
        } catch (const std::exception& e) {
          BoundRow row;
          row.domain = specs[i];
          row.label = "build";
          row.kind = "lower";
          row.target = row.bound = row.margin = std::nan("");
          row.solver_failed = true;
          row.note = e.what();
          per[i] = {row};
        }
      },
      pool_threads());

  VerifyResult out;
  for (auto& v : per)
    for (auto& r : v) out.rows.push_back(std::move(r));
  out.summary = summarize(out.rows);
  return out;
}

}  // namespace pqfreq
