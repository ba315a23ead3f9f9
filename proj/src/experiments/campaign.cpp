#include <cmath>

#include <json.hpp>

#include "pqfreq/experiments.hpp"

namespace pqfreq {

namespace {

using nlohmann::json;

double read_exponent(const json& v) {
  if (v.is_string()) {
    std::string s = v.get<std::string>();
    if (s == "inf" || s == "infinity") return kInf;
    throw ValidationError("campaign: exponent must be a number or \"inf\", got \"" + s + "\"");
  }
  if (!v.is_number()) throw ValidationError("campaign: exponent must be a number or \"inf\"");
  return v.get<double>();
}

json write_exponent(double v) { return std::isinf(v) ? json("inf") : json(v); }

template <class T>
void maybe(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

Campaign Campaign::from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("campaign: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ValidationError("campaign: top level must be an object");
  static const char* known[] = {"name", "kind", "seed", "h", "domains", "seeded_domains", "exponents",
                                "tolerance", "solver", "output_dir", "k_list", "beta", "h_max",
                                "node_budget", "N", "p_grid", "quantity", "q_grid", "domain", "p",
                                "m_grid", "eps_factors"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : known) ok = ok || it.key() == k;
    if (!ok) throw ValidationError("campaign: unknown key '" + it.key() + "'");
  }
  Campaign c;
  try {
    maybe(j, "name", c.name);
    maybe(j, "kind", c.kind);
    maybe(j, "seed", c.seed);
    maybe(j, "h", c.h);
    maybe(j, "domains", c.domains);
    maybe(j, "seeded_domains", c.seeded_domains);
    if (j.contains("exponents"))
      for (const auto& e : j.at("exponents")) {
        if (!e.is_array() || e.size() != 2) throw ValidationError("campaign: exponents are [p, q] pairs");
        c.exponents.emplace_back(read_exponent(e[0]), read_exponent(e[1]));
      }
    maybe(j, "tolerance", c.tolerance);
    if (j.contains("solver")) {
      const json& s = j.at("solver");
      maybe(s, "tol", c.solve.tol);
      maybe(s, "max_iter", c.solve.max_iter);
      maybe(s, "refine", c.solve.refine);
      if (s.contains("backend")) {
        std::string b = s.at("backend").get<std::string>();
        if (b == "cholesky") c.solve.backend = LinearBackend::cholesky;
        else if (b == "cg") c.solve.backend = LinearBackend::cg;
        else throw ValidationError("campaign: backend must be cholesky or cg");
      }
    }
    maybe(j, "output_dir", c.output_dir);
    maybe(j, "k_list", c.k_list);
    maybe(j, "beta", c.beta);
    maybe(j, "h_max", c.h_max);
    maybe(j, "node_budget", c.node_budget);
    maybe(j, "N", c.N);
    maybe(j, "p_grid", c.p_grid);
    maybe(j, "quantity", c.quantity);
    maybe(j, "q_grid", c.q_grid);
    maybe(j, "domain", c.domain);
    maybe(j, "p", c.p);
    maybe(j, "m_grid", c.m_grid);
    maybe(j, "eps_factors", c.eps_factors);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("campaign: ") + e.what());
  }
  static const char* kinds[] = {"verify", "buser", "asymptotic", "moser_trudinger", "pepper"};
  bool kind_ok = false;
  for (const char* k : kinds) kind_ok = kind_ok || c.kind == k;
  if (!kind_ok) throw ValidationError("campaign: unknown kind '" + c.kind + "'");
  if (!(c.h > 0.0)) throw ValidationError("campaign: h must be positive");
  if (c.seeded_domains < 0) throw ValidationError("campaign: seeded_domains must be >= 0");
  return c;
}

Campaign Campaign::load(const std::string& path) { return from_json(read_file(path)); }

std::string Campaign::to_json() const {
  nlohmann::ordered_json j;
  j["name"] = name;
  j["kind"] = kind;
  j["seed"] = seed;
  j["h"] = h;
  j["tolerance"] = tolerance;
  j["output_dir"] = output_dir;
  j["solver"] = {{"tol", solve.tol},
                 {"max_iter", solve.max_iter},
                 {"refine", solve.refine},
                 {"backend", solve.backend == LinearBackend::cholesky ? "cholesky" : "cg"}};
  if (kind == "verify") {
    j["domains"] = domains;
    j["seeded_domains"] = seeded_domains;
    json ex = json::array();
    for (auto [p, q] : exponents) ex.push_back({write_exponent(p), write_exponent(q)});
    j["exponents"] = ex;
  } else if (kind == "buser") {
    j["k_list"] = k_list;
    j["beta"] = beta;
    j["h_max"] = h_max;
    j["node_budget"] = node_budget;
  } else if (kind == "asymptotic") {
    j["N"] = N;
    j["p_grid"] = p_grid;
    j["quantity"] = quantity;
  } else if (kind == "moser_trudinger") {
    j["domain"] = domain;
    j["q_grid"] = q_grid;
  } else {
    j["p"] = p;
    j["m_grid"] = m_grid;
    j["eps_factors"] = eps_factors;
  }
  return j.dump();
}

std::vector<std::string> seeded_domain_specs(std::uint64_t seed, int count) {
  std::vector<std::string> out;
  auto num = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return std::string(buf);
  };
  for (int i = 0; i < count; ++i) {
    CounterRng rng(seed, static_cast<std::uint64_t>(i));
    switch (i % 6) {
      case 0:
        out.push_back("disk:r=" + num(rng.uniform(0.6, 1.2)));
        break;
      case 1:
        out.push_back("square:side=" + num(rng.uniform(1.0, 2.0)));
        break;
      case 2:
        out.push_back("annulus:r_in=" + num(rng.uniform(0.2, 0.5)) + ",r_out=" + num(rng.uniform(0.9, 1.2)));
        break;
      case 3:
        out.push_back("strip:height=" + num(rng.uniform(0.5, 1.0)) + ",length=" + num(rng.uniform(2.0, 4.0)));
        break;
      case 4:
      {
        // keep the holes inside their cells: k^-beta < 0.45
        int k = rng.integer(3, 6);
        double lo = std::max(0.55, std::log(1.0 / 0.45) / std::log(double(k)));
        out.push_back("perforated:k=" + std::to_string(k) + ",beta=" + num(rng.uniform(lo, 0.95)));
        break;
      }
      default:
        out.push_back("pepper_window:m=1,eps=" + num(rng.uniform(0.12, 0.3)));
        break;
    }
  }
  return out;
}

}  // namespace pqfreq
