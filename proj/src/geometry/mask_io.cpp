#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "pqfreq/geometry.hpp"

namespace pqfreq {

using nlohmann::json;

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cannot write '" + path + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw ValidationError("cannot write '" + path + "'");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw ValidationError("cannot write '" + path + "'");
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string sidecar_path(const std::string& mask_path) {
  std::filesystem::path p(mask_path);
  if (p.extension() == ".pgm") return p.replace_extension(".json").string();
  return mask_path + ".json";
}

namespace {

json frame_json(const GridDomain& d) {
  const GridFrame& g = d.frame();
  json j;
  j["dim"] = g.dim;
  j["h"] = g.h;
  j["shape"] = g.dim == 2 ? json::array({g.nx, g.ny}) : json::array({g.nx});
  j["origin"] = g.dim == 2 ? json::array({g.ox, g.oy}) : json::array({g.ox});
  j["spec"] = d.spec() ? json(d.spec()->to_string()) : json(nullptr);
  return j;
}

std::optional<DomainSpec> spec_from(const json& j, double h) {
  if (!j.contains("spec") || j["spec"].is_null()) return std::nullopt;
  return DomainSpec::parse(j["spec"].get<std::string>(), h);
}

GridDomain read_interval_file(const json& j) {
  double h = j.at("h").get<double>();
  GridFrame g;
  g.dim = 1;
  g.h = h;
  const auto& intervals = j.at("intervals");
  if (!intervals.is_array() || intervals.empty())
    throw ValidationError("interval file: needs a non-empty 'intervals' array");
  if (j.contains("origin") && j.contains("shape")) {
    g.ox = j["origin"].at(0).get<double>();
    g.nx = j["shape"].at(0).get<int>();
  } else {
    double lo = kInf, hi = -kInf;
    for (const auto& iv : intervals) {
      lo = std::min(lo, iv.at("start").get<double>());
      hi = std::max(hi, iv.at("end").get<double>());
    }
    g.ox = lo - 2.0 * h;
    g.nx = static_cast<int>(std::ceil((hi - lo) / h - 1e-9)) + 5;
  }
  std::vector<std::uint8_t> mask(g.size(), 0);
  const double tol = 1e-9 * h;
  for (const auto& iv : intervals) {
    double a = iv.at("start").get<double>(), b = iv.at("end").get<double>();
    if (!(a < b)) throw ValidationError("interval file: start must be below end");
    for (int i = 0; i < g.nx; ++i)
      if (g.x(i) > a + tol && g.x(i) < b - tol) mask[i] = 1;
  }
  return GridDomain(g, std::move(mask), spec_from(j, h));
}

}  // namespace

void write_mask(const GridDomain& domain, const std::string& path) {
  const GridFrame& g = domain.frame();
  if (g.dim == 1) {
    json j = frame_json(domain);
    json intervals = json::array();
    int i = 0;
    while (i < g.nx) {
      if (!domain.inside(std::size_t(i))) {
        ++i;
        continue;
      }
      int start = i;
      while (i < g.nx && domain.inside(std::size_t(i))) ++i;
      // open interval whose interior nodes are exactly start..i-1
      intervals.push_back({{"start", g.x(start - 1)}, {"end", g.x(i)}});
    }
    j["intervals"] = intervals;
    write_file_atomic(path, j.dump(2) + "\n");
    return;
  }
  std::string pgm = "P5\n" + std::to_string(g.nx) + " " + std::to_string(g.ny) + "\n255\n";
  pgm.reserve(pgm.size() + g.size());
  for (std::size_t idx = 0; idx < g.size(); ++idx) pgm.push_back(domain.inside(idx) ? '\xff' : '\0');
  write_file_atomic(path, pgm);
  write_file_atomic(sidecar_path(path), frame_json(domain).dump(2) + "\n");
}

GridDomain read_mask(const std::string& path) {
  std::string data = read_file(path);
  if (data.rfind("P5", 0) != 0) {
    json j;
    try {
      j = json::parse(data);
    } catch (const json::exception&) {
      throw ValidationError("'" + path + "' is neither a P5 PGM nor a JSON interval file");
    }
    try {
      return read_interval_file(j);
    } catch (const json::exception& e) {
      throw ValidationError("interval file '" + path + "': " + e.what());
    }
  }
  std::istringstream in(data);
  std::string magic;
  int nx = 0, ny = 0, maxval = 0;
  in >> magic >> nx >> ny >> maxval;
  in.get();
  if (!in || nx < 2 || ny < 2 || maxval != 255)
    throw ValidationError("'" + path + "': malformed PGM header");
  std::size_t offset = static_cast<std::size_t>(in.tellg());
  std::size_t n = static_cast<std::size_t>(nx) * ny;
  if (data.size() < offset + n) throw ValidationError("'" + path + "': truncated PGM data");

  json side;
  try {
    side = json::parse(read_file(sidecar_path(path)));
  } catch (const json::exception&) {
    throw ValidationError("'" + sidecar_path(path) + "': malformed sidecar");
  }
  GridFrame g;
  try {
    g.dim = 2;
    g.nx = nx;
    g.ny = ny;
    g.h = side.at("h").get<double>();
    g.ox = side.at("origin").at(0).get<double>();
    g.oy = side.at("origin").at(1).get<double>();
  } catch (const json::exception& e) {
    throw ValidationError("'" + sidecar_path(path) + "': " + e.what());
  }
  std::vector<std::uint8_t> mask(n);
  for (std::size_t idx = 0; idx < n; ++idx)
    mask[idx] = static_cast<unsigned char>(data[offset + idx]) >= 128 ? 1 : 0;
  return GridDomain(g, std::move(mask), spec_from(side, g.h));
}

ObstacleSet read_obstacle(const std::string& path, const GridFrame& g) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::exception&) {
    throw ValidationError("'" + path + "': malformed obstacle JSON");
  }
  std::vector<std::size_t> nodes;
  auto add = [&](int i, int jj) {
    if (!g.contains(i, jj)) throw ValidationError("obstacle node outside the grid window");
    nodes.push_back(g.index(i, jj));
  };
  try {
    if (j.contains("nodes"))
      for (const auto& n : j["nodes"]) add(n.at(0).get<int>(), g.dim == 2 ? n.at(1).get<int>() : 0);
    if (j.contains("points"))
      for (const auto& pt : j["points"]) {
        int i = static_cast<int>(std::lround((pt.at(0).get<double>() - g.ox) / g.h));
        int jj = g.dim == 2 ? static_cast<int>(std::lround((pt.at(1).get<double>() - g.oy) / g.h)) : 0;
        add(i, jj);
      }
    if (j.contains("disks"))
      for (const auto& d : j["disks"]) {
        double cx = d.at("center").at(0).get<double>();
        double cy = g.dim == 2 ? d.at("center").at(1).get<double>() : 0.0;
        auto disk = ObstacleSet::disk(g, cx, cy, d.at("r").get<double>());
        nodes.insert(nodes.end(), disk.nodes().begin(), disk.nodes().end());
      }
  } catch (const json::exception& e) {
    throw ValidationError("'" + path + "': " + e.what());
  }
  return ObstacleSet(g, std::move(nodes));
}

}  // namespace pqfreq
