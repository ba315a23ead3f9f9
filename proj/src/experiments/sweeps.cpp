#include <algorithm>
#include <cmath>
#include <numeric>

#include "pqfreq/experiments.hpp"

namespace pqfreq {

namespace {

// Least-squares slope and intercept of y against x.
std::pair<double, double> fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  double slope = sxx > 0.0 ? sxy / sxx : 0.0;
  return {slope, my - slope * mx};
}

bool strictly_increasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] > v[i - 1])) return false;
  return true;
}

double perforated_window_area(int k) {
  int side = static_cast<int>(std::sqrt(static_cast<double>(k)) + 1e-9);
  int extra = k - side * side;
  return std::max(side, extra) * (side + (extra > 0 ? 1.0 : 0.0));
}

}  // namespace

SweepTable buser_sweep(const std::vector<int>& k_list, double beta, const BuserPolicy& policy,
                       const SolveOptions& options) {
  SweepTable t;
  t.columns = {"k", "eps", "h", "inside_nodes", "lambda", "cheeger", "ratio", "k_over_log_k"};
  std::vector<double> ks, ratios;
  for (int k : k_list) {
    double eps = std::pow(static_cast<double>(k), -beta);
    double h = std::min(eps / 4.0, policy.h_max);
    double nodes = perforated_window_area(k) / (h * h);
    if (nodes > 0.95 * static_cast<double>(policy.node_budget))
      h = std::sqrt(perforated_window_area(k) / (0.95 * static_cast<double>(policy.node_budget)));
    try {
      DomainSpec spec{shapes::Perforated{k, beta}, h};
      BuildOptions bo;
      bo.node_budget = policy.node_budget;
      GridDomain dom = build_domain(spec, bo);
      SolveReport lam = principal_frequency(dom, Exponents(2, 2.0, 2.0), options);
      SolveReport ch = cheeger_maxflow(dom, options);
      if (!lam.converged || !ch.converged) t.flags.push_back("k=" + std::to_string(k) + ": solver did not converge");
      double ratio = lam.value / (ch.value * ch.value);
      double env = k / std::log(static_cast<double>(k));
      t.rows.push_back({double(k), eps, h, double(dom.inside_count()), lam.value, ch.value, ratio, env});
      ks.push_back(k);
      ratios.push_back(ratio);
    } catch (const ValidationError& e) {
      t.flags.push_back("k=" + std::to_string(k) + ": " + e.what());
    }
  }
  if (ratios.size() >= 2) {
    std::vector<double> lk, lr, lrc, lenv;
    for (std::size_t i = 0; i < ks.size(); ++i) {
      double L = std::log(ks[i]);
      lk.push_back(L);
      lr.push_back(std::log(ratios[i]));
      lrc.push_back(std::log(ratios[i] * L));
      lenv.push_back(std::log(ratios[i]) - std::log(ks[i] / L));
    }
    // growth exponent over the tail k >= 16; k = 4 sits before the asymptotic regime
    std::vector<double> tk, tr;
    for (std::size_t i = 0; i < ks.size(); ++i)
      if (ks[i] >= 16.0) {
        tk.push_back(lk[i]);
        tr.push_back(lr[i]);
      }
    double exponent = tk.size() >= 2 ? fit_line(tk, tr).first : fit_line(lk, lr).first;
    t.summary["fitted_exponent_all_k"] = fit_line(lk, lr).first;
    double corrected = fit_line(lk, lrc).first;
    double logC = std::accumulate(lenv.begin(), lenv.end(), 0.0) / static_cast<double>(lenv.size());
    double sandwich = 1.0;
    for (std::size_t i = 0; i < ks.size(); ++i) {
      double e = ks[i] / std::log(ks[i]);
      sandwich = std::max({sandwich, ratios[i] / e, e / ratios[i]});
    }
    bool mono = strictly_increasing(ratios);
    t.summary["fitted_exponent"] = exponent;
    t.summary["log_corrected_exponent"] = corrected;
    t.summary["envelope_C_fit"] = std::exp(logC);
    t.summary["sandwich_C"] = sandwich;
    t.summary["monotone"] = mono ? 1.0 : 0.0;
    if (!mono) t.flags.push_back("ratio is not strictly increasing in k");
    if (!(exponent > 0.6 && exponent < 1.0)) t.flags.push_back("fitted exponent outside (0.6, 1.0)");
    t.pass = mono && exponent > 0.6 && exponent < 1.0 && ratios.size() == k_list.size();
  } else {
    t.pass = false;
  }
  return t;
}

SweepTable asymptotic_sweep(int N, const std::vector<double>& p_grid, const std::string& quantity,
                            const SolveOptions& options) {
  SweepTable t;
  if (quantity != "beta" && quantity != "lambda_inf_ball" && quantity != "theta_q_limit")
    throw ValidationError("asymptotic_sweep: quantity must be beta, lambda_inf_ball or theta_q_limit");
  if (quantity == "theta_q_limit") {
    if (N != 2) throw ValidationError("asymptotic_sweep: theta_q_limit needs N = 2");
    t.columns = {"q", "theta", "q_theta"};
    std::vector<double> qt;
    for (double q : p_grid) {
      if (!(q >= 2.0) || std::isinf(q)) {
        t.flags.push_back("q=" + format_number(q) + ": skipped (needs 2 <= q < inf)");
        continue;
      }
      double th = theta(Exponents(2, 2.0, q));
      t.rows.push_back({q, th, q * th});
      qt.push_back(q * th);
    }
    if (!qt.empty()) {
      double lo = *std::min_element(qt.begin(), qt.end()), hi = *std::max_element(qt.begin(), qt.end());
      t.summary["q_theta_min"] = lo;
      t.summary["q_theta_max"] = hi;
      t.summary["q_theta_spread"] = hi / lo;
      t.pass = hi / lo <= 4.0;
      if (!t.pass) t.flags.push_back("q*theta spread exceeds the factor-4 bracket");
    }
    return t;
  }

  t.columns = {"p", "value", "value_root_p", "value_over_gap_power"};
  std::vector<double> ps, roots, normalized;
  for (double p : p_grid) {
    if (!(p > N)) {
      t.flags.push_back("p=" + format_number(p) + ": skipped (needs p > N)");
      continue;
    }
    double value;
    if (quantity == "beta") {
      double lp = punctured_radial(N, p, RadialMode::Lp, 2000, options).value;
      value = std::max(lp / std::pow(std::sqrt(double(N)) + 1.0, p), std::pow((p - N) / p, p));
    } else {
      value = punctured_radial(N, p, RadialMode::Linf, 2000, options).value;
    }
    double root = std::pow(value, 1.0 / p), norm = value / std::pow(p - N, p - 1.0);
    t.rows.push_back({p, value, root, norm});
    ps.push_back(p);
    roots.push_back(root);
    normalized.push_back(norm);
  }
  if (ps.empty()) {
    t.pass = false;
    return t;
  }
  bool toward_one = std::abs(1.0 - roots.back()) < std::abs(1.0 - roots.front());
  bool mono = strictly_increasing(roots);
  t.summary["root_first"] = roots.front();
  t.summary["root_last"] = roots.back();
  t.summary["root_monotone"] = mono ? 1.0 : 0.0;
  // normalized values near the critical exponent
  double lo = kInf, hi = 0.0;
  for (std::size_t i = 0; i < ps.size(); ++i)
    if (ps[i] <= N + 0.5) {
      lo = std::min(lo, normalized[i]);
      hi = std::max(hi, normalized[i]);
    }
  t.pass = true;
  if (quantity == "beta") {
    t.pass = mono && toward_one;
    if (!t.pass) t.flags.push_back("beta^(1/p) is not monotone toward 1");
  }
  if (hi > 0.0) {
    t.summary["near_critical_min"] = lo;
    t.summary["near_critical_max"] = hi;
    if (quantity == "lambda_inf_ball") {
      double NwN = N * unit_ball_volume(N);
      bool in = lo >= NwN / 4.0 && hi <= 2.0 * NwN;
      t.summary["bracket_lo"] = NwN / 4.0;
      t.summary["bracket_hi"] = 2.0 * NwN;
      if (!in) t.flags.push_back("normalized value outside [N w_N / 4, 2 N w_N]");
      t.pass = t.pass && in;
    } else if (hi / lo > 4.0) {
      t.flags.push_back("normalized beta spread exceeds a factor 4 near p = N");
      t.pass = false;
    }
  }
  return t;
}

SweepTable moser_trudinger_trend(const DomainSpec& spec, const std::vector<double>& q_grid,
                                 const SolveOptions& options) {
  if (spec.dim() != 2) throw ValidationError("moser_trudinger: needs a 2D domain");
  SweepTable t;
  t.columns = {"q", "lambda", "q_lambda", "reference"};
  const double ref = 8.0 * kPi * std::exp(1.0);
  GridDomain dom = build_domain(spec);
  std::vector<double> ql;
  for (double q : q_grid) {
    if (!(q >= 1.0) || std::isinf(q)) {
      t.flags.push_back("q=" + format_number(q) + ": skipped (needs finite q >= 1)");
      continue;
    }
    SolveReport rep = principal_frequency(dom, Exponents(2, 2.0, q), options);
    if (!rep.converged) t.flags.push_back("q=" + format_number(q) + ": solver did not converge");
    t.rows.push_back({q, rep.value, q * rep.value, ref});
    ql.push_back(q * rep.value);
  }
  bool mono = strictly_increasing(ql);
  bool below = !ql.empty() && ql.back() < ref;
  t.summary["reference"] = ref;
  if (!ql.empty()) t.summary["last_q_lambda"] = ql.back();
  t.summary["monotone"] = mono ? 1.0 : 0.0;
  t.pass = mono && below;
  if (!mono) t.flags.push_back("q*lambda is not increasing");
  if (!below) t.flags.push_back("final q*lambda is not below 8 pi e");
  return t;
}

SweepTable pepper_trend(double p, const std::vector<int>& m_grid, const std::vector<double>& eps_factors,
                        double h, const SolveOptions& options) {
  if (!(p > 2.0))
    throw ValidationError("pepper: needs p > 2; points are removable for p <= N = 2");
  if (m_grid.empty() || eps_factors.empty()) throw ValidationError("pepper: empty m or eps grid");
  SweepTable t;
  t.columns = {"eps_factor", "eps", "m", "lambda", "reference", "ratio"};
  std::vector<double> factors(eps_factors);
  std::sort(factors.begin(), factors.end(), std::greater<>());
  double worst_spread = 0.0;
  bool decreasing = true;
  std::vector<double> prev;
  for (double fct : factors) {
    double eps = fct * h;
    // reference: pinned unit-half-width cube at spacing 2h, scaled back by 2^p
    DomainSpec cube{shapes::Square{2.0}, 2.0 * h};
    GridDomain q1 = build_domain(cube);
    std::vector<std::size_t> pins;
    for (auto idx : ObstacleSet::disk(q1.frame(), 0.0, 0.0, 2.0 * eps).nodes())
      if (q1.inside(idx)) pins.push_back(idx);
    double ref = std::pow(2.0, p) * pinned_poincare(q1, pins, p, options).value;
    std::vector<double> vals;
    for (int m : m_grid) {
      DomainSpec spec{shapes::PepperWindow{m, eps}, h};
      GridDomain dom = build_domain(spec);
      SolveReport rep = principal_frequency(dom, Exponents(2, p, p), options);
      if (!rep.converged) t.flags.push_back("m=" + std::to_string(m) + ": solver did not converge");
      t.rows.push_back({fct, eps, double(m), rep.value, ref, rep.value / ref});
      vals.push_back(rep.value);
    }
    double lo = *std::min_element(vals.begin(), vals.end()), hi = *std::max_element(vals.begin(), vals.end());
    worst_spread = std::max(worst_spread, (hi - lo) / lo);
    if (!prev.empty())
      for (std::size_t i = 0; i < vals.size(); ++i) decreasing = decreasing && vals[i] < prev[i];
    prev = vals;
  }
  t.summary["worst_relative_spread"] = worst_spread;
  t.summary["decreasing_in_eps"] = decreasing ? 1.0 : 0.0;
  t.pass = worst_spread <= 0.05 && decreasing;
  if (worst_spread > 0.05) t.flags.push_back("relative spread across m exceeds 5%");
  if (!decreasing) t.flags.push_back("lambda does not decrease as eps shrinks");
  return t;
}

SweepTable run_sweep(const Campaign& c) {
  if (c.kind == "buser") {
    BuserPolicy pol{c.h_max, c.node_budget};
    return buser_sweep(c.k_list, c.beta, pol, c.solve);
  }
  if (c.kind == "asymptotic") return asymptotic_sweep(c.N, c.p_grid, c.quantity, c.solve);
  if (c.kind == "moser_trudinger") return moser_trudinger_trend(DomainSpec::parse(c.domain, c.h), c.q_grid, c.solve);
  if (c.kind == "pepper") return pepper_trend(c.p, c.m_grid, c.eps_factors, c.h, c.solve);
  throw ValidationError("sweep: campaign kind '" + c.kind + "' is not a sweep");
}

}  // namespace pqfreq
