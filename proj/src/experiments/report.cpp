#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <tuple>

#include <json.hpp>

#include "pqfreq/experiments.hpp"

namespace pqfreq {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

nlohmann::json number(double v) {
  if (std::isfinite(v)) return std::stod(format_number(v));
  return format_number(v);
}

}  // namespace

Summary summarize(const std::vector<BoundRow>& rows) {
  Summary s;
  for (const auto& r : rows) {
    (r.pass ? s.pass_count : s.fail_count) += 1;
    double scale = std::max(std::abs(r.bound), 1e-300);
    s.worst_margin = std::min(s.worst_margin, r.margin / scale);
  }
  return s;
}

std::string rows_csv(std::vector<BoundRow> rows) {
  std::stable_sort(rows.begin(), rows.end(), [](const BoundRow& a, const BoundRow& b) {
    return std::tie(a.domain, a.exponents, a.label, a.note) < std::tie(b.domain, b.exponents, b.label, b.note);
  });
  std::ostringstream out;
  out << "domain,exponents,label,kind,r,k,volume,diameter,target,bound,tolerance,margin,pass,solver_failed,note\n";
  for (const auto& r : rows) {
    out << csv_field(r.domain) << ',' << csv_field(r.exponents) << ',' << csv_field(r.label) << ','
        << r.kind << ',' << format_number(r.r) << ',' << r.k << ',' << format_number(r.volume) << ','
        << format_number(r.diameter) << ',' << format_number(r.target) << ',' << format_number(r.bound) << ','
        << format_number(r.tolerance) << ',' << format_number(r.margin) << ',' << (r.pass ? 1 : 0) << ','
        << (r.solver_failed ? 1 : 0) << ',' << csv_field(r.note) << '\n';
  }
  return out.str();
}

std::string summary_json(const Summary& s, const std::string& config_json) {
  nlohmann::ordered_json j;
  j["pass_count"] = s.pass_count;
  j["fail_count"] = s.fail_count;
  j["worst_margin"] = number(s.pass_count + s.fail_count ? s.worst_margin : 0.0);
  j["config"] = nlohmann::ordered_json::parse(config_json);
  return j.dump(2) + "\n";
}

std::string sweep_csv(const SweepTable& t) {
  std::ostringstream out;
  for (std::size_t c = 0; c < t.columns.size(); ++c) out << (c ? "," : "") << t.columns[c];
  out << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << format_number(row[c]);
    out << '\n';
  }
  return out.str();
}

std::string sweep_summary_json(const SweepTable& t, const std::string& config_json) {
  nlohmann::ordered_json j;
  j["pass"] = t.pass;
  nlohmann::ordered_json s = nlohmann::ordered_json::object();
  for (const auto& [k, v] : t.summary) s[k] = number(v);
  j["summary"] = s;
  j["flags"] = t.flags;
  j["config"] = nlohmann::ordered_json::parse(config_json);
  return j.dump(2) + "\n";
}

}  // namespace pqfreq
