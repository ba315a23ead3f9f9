#include "pqfreq/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <json.hpp>
#include <memory>
#include <optional>

#include "pqfreq/bounds.hpp"
#include "pqfreq/experiments.hpp"
#include "pqfreq/geometry.hpp"
#include "pqfreq/solvers.hpp"

namespace pqfreq::cli {

namespace {

using ojson = nlohmann::ordered_json;

// 12 significant digits; non-finite values become strings.
ojson num(double v) {
  if (!std::isfinite(v)) return format_number(v);
  return std::stod(format_number(v));
}

double parse_real(const std::string& s, const std::string& what) {
  if (s == "inf" || s == "Inf" || s == "infinity") return kInf;
  try {
    std::size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ValidationError(what + ": cannot parse '" + s + "' as a number");
  }
}

std::vector<double> parse_list(const std::vector<std::string>& items, const std::string& what) {
  std::vector<double> out;
  for (const auto& s : items) out.push_back(parse_real(s, what));
  return out;
}

struct DomainArgs {
  std::string spec;
  double h = 0.0;
  std::string out;
  std::size_t budget = 16'000'000;
};

struct SolveArgs {
  std::string domain;
  std::string p = "2";
  std::string q = "2";
  std::string quantity = "lambda";
  std::string method = "maxflow";
  std::string obstacle;
  double tol = 1e-8;
  int max_iter = 10000;
  int refine = 1;
  std::string backend = "cholesky";
  std::string out;
};

struct BoundsArgs {
  std::vector<std::string> N{"2"}, p{"2"}, q{"2"}, k{"1"}, r{"1"};
  double ecc = 1.0;
  std::optional<double> ratio;
  std::optional<double> cheeger;
  bool csv = false;
};

struct CampaignArgs {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<double> h;
  std::string out_dir;
};

struct Parser {
  CLI::App app{"Generalized principal frequencies on grid domains", "pqfreq"};
  CLI::App* domain = nullptr;
  CLI::App* solve = nullptr;
  CLI::App* bounds = nullptr;
  CLI::App* verify = nullptr;
  CLI::App* sweep = nullptr;
  DomainArgs da;
  SolveArgs sa;
  BoundsArgs ba;
  CampaignArgs va, wa;

  Parser() {
    app.set_help_flag("--help", "Print this help message and exit");
    app.require_subcommand(1);
    app.allow_extras(false);

    domain = app.add_subcommand("domain", "Rasterize a domain spec to a PGM mask plus JSON sidecar");
    domain->add_option("--spec", da.spec, "Domain spec, e.g. disk:r=1 or annulus:r_in=0.3,r_out=1")->required();
    domain->add_option("--h", da.h, "Grid spacing")->required();
    domain->add_option("--out", da.out, "Output mask path (.pgm, or .json for 1D)")->required();
    domain->add_option("--budget", da.budget, "Maximum number of grid nodes")->capture_default_str();

    solve = app.add_subcommand("solve", "Compute one constant on a mask");
    solve->add_option("--domain", sa.domain, "Mask file written by the domain subcommand")->required();
    solve->add_option("--p", sa.p, "Gradient exponent")->capture_default_str();
    solve->add_option("--q", sa.q, "Integrability exponent (inf allowed)")->capture_default_str();
    solve->add_option("--quantity", sa.quantity, "lambda|capacity|cheeger|mu|lambda-inf")
        ->check(CLI::IsMember({"lambda", "capacity", "cheeger", "mu", "lambda-inf"}))
        ->capture_default_str();
    solve->add_option("--method", sa.method, "Cheeger solver: maxflow|tv")
        ->check(CLI::IsMember({"maxflow", "tv"}))
        ->capture_default_str();
    solve->add_option("--obstacle", sa.obstacle, "Obstacle JSON (capacity only)");
    solve->add_option("--tol", sa.tol, "Relative objective tolerance")->capture_default_str();
    solve->add_option("--max-iter", sa.max_iter, "Iteration cap")->capture_default_str();
    solve->add_option("--refine", sa.refine, "2: also solve at h/2 and extrapolate")
        ->check(CLI::Range(1, 2))
        ->capture_default_str();
    solve->add_option("--backend", sa.backend, "Linear solver: cholesky|cg")
        ->check(CLI::IsMember({"cholesky", "cg"}))
        ->capture_default_str();
    solve->add_option("--out", sa.out, "Report path (default: standard output)");

    bounds = app.add_subcommand("bounds", "Print closed-form constants for (N, p, q, k, r)");
    bounds->add_option("--N", ba.N, "Dimension list")->delimiter(',')->capture_default_str();
    bounds->add_option("--p", ba.p, "Gradient exponent list")->delimiter(',')->capture_default_str();
    bounds->add_option("--q", ba.q, "Integrability exponent list (inf allowed)")->delimiter(',')->capture_default_str();
    bounds->add_option("--k", ba.k, "Connectivity order list")->delimiter(',')->capture_default_str();
    bounds->add_option("--r", ba.r, "Inradius list")->delimiter(',')->capture_default_str();
    bounds->add_option("--ecc", ba.ecc, "Eccentricity for the extension constants")->capture_default_str();
    bounds->add_option("--ratio", ba.ratio, "d/D ratio for the capacitary Poincare constant");
    bounds->add_option("--cheeger", ba.cheeger, "Cheeger value for the Buser upper bound");
    bounds->add_flag("--csv", ba.csv, "One CSV row per exponent tuple");

    verify = app.add_subcommand("verify", "Run a verification campaign");
    add_campaign_flags(verify, va);
    sweep = app.add_subcommand("sweep", "Run a sweep campaign");
    add_campaign_flags(sweep, wa);
  }

  static void add_campaign_flags(CLI::App* sub, CampaignArgs& a) {
    sub->add_option("--config", a.config, "Campaign JSON file")->required();
    sub->add_option("--seed", a.seed, "Override the campaign seed");
    sub->add_option("--h", a.h, "Override the grid spacing");
    sub->add_option("--out-dir", a.out_dir, "Override the output directory");
  }
};

LinearBackend backend_from(const std::string& s) {
  return s == "cg" ? LinearBackend::cg : LinearBackend::cholesky;
}

ojson report_json(const SolveReport& rep, const ojson& inputs) {
  ojson j;
  j["quantity"] = rep.quantity;
  j["value"] = num(rep.value);
  j["extrapolated"] = rep.extrapolated ? num(*rep.extrapolated) : ojson(nullptr);
  j["h"] = num(rep.h);
  j["iterations"] = rep.iterations;
  j["residual"] = num(rep.residual);
  j["converged"] = rep.converged;
  ojson d = ojson::object();
  for (const auto& [k, v] : rep.diagnostics) d[k] = num(v);
  j["diagnostics"] = d;
  j["inputs"] = inputs;
  return j;
}

int run_domain(const DomainArgs& a, std::ostream& out) {
  DomainSpec spec = DomainSpec::parse(a.spec, a.h);
  BuildOptions bo;
  bo.node_budget = a.budget;
  GridDomain dom = build_domain(spec, bo);
  write_mask(dom, a.out);
  ojson j;
  j["spec"] = spec.to_string();
  j["h"] = num(a.h);
  j["budget"] = a.budget;
  j["out"] = a.out;
  j["nodes"] = dom.size();
  j["inside"] = dom.inside_count();
  j["measure"] = num(dom.measure());
  out << j.dump(2) << "\n";
  return ok;
}

int run_solve(const SolveArgs& a, std::ostream& out) {
  GridDomain dom = read_mask(a.domain);
  const double p = parse_real(a.p, "--p");
  const double q = parse_real(a.q, "--q");
  SolveOptions so;
  so.tol = a.tol;
  so.max_iter = a.max_iter;
  so.refine = a.refine;
  so.backend = backend_from(a.backend);
  if (!(a.tol > 0.0)) throw ValidationError("--tol must be positive");
  if (a.max_iter < 1) throw ValidationError("--max-iter must be at least 1");

  SolveReport rep;
  if (a.quantity == "lambda") {
    if (std::isinf(q)) rep = linf_frequency(dom, p, so);
    else rep = principal_frequency(dom, Exponents(dom.dim(), p, q), so);
  } else if (a.quantity == "lambda-inf") {
    rep = linf_frequency(dom, p, so);
  } else if (a.quantity == "capacity") {
    if (a.obstacle.empty()) throw ValidationError("capacity needs --obstacle");
    rep = capacity(dom, read_obstacle(a.obstacle, dom.frame()), p, so);
  } else if (a.quantity == "cheeger") {
    if (dom.dim() != 2) throw ValidationError("cheeger needs a 2D mask");
    rep = a.method == "tv" ? lambda11_tv(dom, so) : cheeger_maxflow(dom, so);
  } else {
    rep = neumann_constant(dom, Exponents(dom.dim(), p, q), so);
  }

  ojson inputs;
  inputs["domain"] = a.domain;
  inputs["label"] = dom.label();
  inputs["p"] = num(p);
  inputs["q"] = num(q);
  inputs["quantity"] = a.quantity;
  inputs["method"] = a.method;
  inputs["obstacle"] = a.obstacle.empty() ? ojson(nullptr) : ojson(a.obstacle);
  inputs["tol"] = num(a.tol);
  inputs["max_iter"] = a.max_iter;
  inputs["refine"] = a.refine;
  inputs["backend"] = a.backend;
  std::string text = report_json(rep, inputs).dump(2) + "\n";
  if (a.out.empty()) out << text;
  else write_file_atomic(a.out, text);
  return ok;
}

// Evaluates fn, mapping inadmissible input to null.
template <class F>
ojson guarded(F&& fn) {
  try {
    return num(fn());
  } catch (const ValidationError&) {
    return nullptr;
  }
}

ojson bounds_record(int N, double p, double q, int k, double r, const BoundsArgs& a) {
  ojson j;
  j["N"] = N;
  j["p"] = num(p);
  j["q"] = num(q);
  j["k"] = k;
  j["r"] = num(r);
  Exponents e(N, p, q);
  const double vol = unit_ball_volume(N) * std::pow(r, N);
  j["scaling_exponent"] = num(scaling_exponent(e));
  j["p_star"] = num(e.p_star());
  j["mu_lower_bound_ball"] = guarded([&] { return mu_lower_bound(e, vol, 2.0 * r); });
  try {
    ExtensionConstants c = extension_constants(e, a.ecc);
    j["extension"] = {{"eccentricity", num(a.ecc)}, {"A", num(c.A)}, {"B", num(c.B)}, {"alpha", num(c.alpha)}};
  } catch (const ValidationError&) {
    j["extension"] = nullptr;
  }
  j["mazya_constant"] = a.ratio ? guarded([&] { return mazya_constant(e, *a.ratio); }) : ojson(nullptr);
  j["theta"] = guarded([&] { return theta(e); });
  j["theta_lower_bound"] = guarded([&] { return theta_lower_bound(e, k, r); });
  if (N == 2) {
    BuserBounds b = buser_bounds(k, a.cheeger.value_or(1.0), r);
    j["cheeger_lower"] = num(b.cheeger_lower);
    j["buser_upper"] = a.cheeger ? num(b.buser_upper) : ojson(nullptr);
    j["lambda_lower_from_cheeger"] = a.cheeger ? num(b.lambda_lower) : ojson(nullptr);
  }
  if (p > N) {
    double lp = punctured_radial(N, p, RadialMode::Lp).value;
    double linf = punctured_linf_lower(N, p);
    EndpointBounds eb = endpoint_bounds(e, r, lp, linf);
    j["punctured_lp"] = num(lp);
    j["punctured_linf_lower"] = num(linf);
    j["punctured_ball_value"] = num(punctured_ball_value(N, p));
    j["beta"] = num(eb.beta);
    j["lambda_p_lower"] = num(eb.lambda_p_lower);
    j["lambda_inf_lower"] = num(eb.lambda_inf_lower);
    j["interpolated_lower"] = eb.interpolated_lower ? num(*eb.interpolated_lower) : ojson(nullptr);
  }
  return j;
}

std::string csv_cell(const ojson& v) {
  if (v.is_null()) return "";
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer() || v.is_number_unsigned()) return v.dump();
  return format_number(v.get<double>());
}

int run_bounds(const BoundsArgs& a, std::ostream& out) {
  std::vector<ojson> records;
  for (double Nd : parse_list(a.N, "--N"))
    for (double p : parse_list(a.p, "--p"))
      for (double q : parse_list(a.q, "--q"))
        for (double kd : parse_list(a.k, "--k"))
          for (double r : parse_list(a.r, "--r")) {
            if (Nd != std::floor(Nd) || Nd < 1) throw ValidationError("--N must be a positive integer");
            if (kd != std::floor(kd) || kd < 1) throw ValidationError("--k must be a positive integer");
            if (!(r > 0.0) || std::isinf(r)) throw ValidationError("--r must be positive and finite");
            records.push_back(bounds_record(int(Nd), p, q, int(kd), r, a));
          }
  if (!a.csv) {
    if (records.size() == 1) out << records.front().dump(2) << "\n";
    else out << ojson(records).dump(2) << "\n";
    return ok;
  }
  // flat columns; nested objects expand with a dotted prefix
  std::vector<std::string> cols;
  auto flatten = [](const ojson& rec) {
    std::vector<std::pair<std::string, ojson>> flat;
    for (auto it = rec.begin(); it != rec.end(); ++it) {
      if (it.value().is_object())
        for (auto jt = it.value().begin(); jt != it.value().end(); ++jt)
          flat.emplace_back(it.key() + "." + jt.key(), jt.value());
      else
        flat.emplace_back(it.key(), it.value());
    }
    return flat;
  };
  for (const auto& rec : records)
    for (const auto& [name, v] : flatten(rec))
      if (std::find(cols.begin(), cols.end(), name) == cols.end()) cols.push_back(name);
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << "\n";
  for (const auto& rec : records) {
    auto flat = flatten(rec);
    for (std::size_t i = 0; i < cols.size(); ++i) {
      auto it = std::find_if(flat.begin(), flat.end(), [&](const auto& kv) { return kv.first == cols[i]; });
      out << (i ? "," : "") << (it == flat.end() ? "" : csv_cell(it->second));
    }
    out << "\n";
  }
  return ok;
}

Campaign load_campaign(const CampaignArgs& a) {
  Campaign c = Campaign::load(a.config);
  if (a.seed) c.seed = *a.seed;
  if (a.h) {
    if (!(*a.h > 0.0)) throw ValidationError("--h must be positive");
    c.h = *a.h;
  }
  if (!a.out_dir.empty()) c.output_dir = a.out_dir;
  std::filesystem::create_directories(c.output_dir);
  return c;
}

std::string join(const std::string& dir, const std::string& file) {
  return (std::filesystem::path(dir) / file).string();
}

int run_verify(const CampaignArgs& a, std::ostream& out) {
  Campaign c = load_campaign(a);
  if (c.kind != "verify") throw ValidationError("verify: campaign kind is '" + c.kind + "', expected verify");
  VerifyResult res = verify_inequalities(c);
  write_file_atomic(join(c.output_dir, "rows.csv"), rows_csv(res.rows));
  std::string summary = summary_json(res.summary, c.to_json());
  write_file_atomic(join(c.output_dir, "summary.json"), summary);
  out << summary;
  return res.summary.fail_count > 0 ? suite_failed : ok;
}

int run_sweep_cmd(const CampaignArgs& a, std::ostream& out) {
  Campaign c = load_campaign(a);
  if (c.kind == "verify") throw ValidationError("sweep: campaign kind is verify; use the verify subcommand");
  SweepTable t = run_sweep(c);
  write_file_atomic(join(c.output_dir, "series.csv"), sweep_csv(t));
  std::string summary = sweep_summary_json(t, c.to_json());
  write_file_atomic(join(c.output_dir, "summary.json"), summary);
  out << summary;
  return t.pass ? ok : suite_failed;
}

std::string one_line(std::string s) {
  for (char& ch : s)
    if (ch == '\n' || ch == '\r') ch = ' ';
  return s;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Parser parser;
  std::vector<std::string> argv_store{"pqfreq"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_store) argv.push_back(s.data());
  try {
    parser.app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    CLI::App* target = &parser.app;
    for (CLI::App* sub : parser.app.get_subcommands()) target = sub;
    out << target->help();
    return ok;
  } catch (const CLI::CallForAllHelp&) {
    out << parser.app.help("", CLI::AppFormatMode::All);
    return ok;
  } catch (const CLI::ParseError& e) {
    err << "pqfreq: " << one_line(e.what()) << "\n";
    return validation_error;
  }

  try {
    if (parser.domain->parsed()) return run_domain(parser.da, out);
    if (parser.solve->parsed()) return run_solve(parser.sa, out);
    if (parser.bounds->parsed()) return run_bounds(parser.ba, out);
    if (parser.verify->parsed()) return run_verify(parser.va, out);
    if (parser.sweep->parsed()) return run_sweep_cmd(parser.wa, out);
  } catch (const ValidationError& e) {
    err << "pqfreq: " << one_line(e.what()) << "\n";
    return validation_error;
  } catch (const nlohmann::json::exception& e) {
    err << "pqfreq: " << one_line(e.what()) << "\n";
    return validation_error;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "pqfreq: " << one_line(e.what()) << "\n";
    return validation_error;
  } catch (const std::exception& e) {
    err << "pqfreq: internal error: " << one_line(e.what()) << "\n";
    return internal_error;
  }
  return validation_error;
}

std::string help_text(const std::string& subcommand) {
  Parser parser;
  if (subcommand.empty()) return parser.app.help();
  return parser.app.get_subcommand(subcommand)->help();
}

}  // namespace pqfreq::cli
