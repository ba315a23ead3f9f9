#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <sstream>

#include "pqfreq/geometry.hpp"

namespace pqfreq {

namespace {

std::string shortest(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_number(std::string_view key, std::string_view text) {
  double v = 0.0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size() || !std::isfinite(v))
    throw ValidationError("domain spec: bad value for '" + std::string(key) + "': '" +
                          std::string(text) + "'");
  return v;
}

int parse_integer(std::string_view key, std::string_view text) {
  double v = parse_number(key, text);
  if (v != std::floor(v) || std::abs(v) > 1e9)
    throw ValidationError("domain spec: '" + std::string(key) + "' must be an integer");
  return static_cast<int>(v);
}

}  // namespace

DomainSpec DomainSpec::parse(std::string_view text, double h) {
  auto colon = text.find(':');
  std::string kind(text.substr(0, colon));
  std::map<std::string, std::string, std::less<>> kv;
  if (colon != std::string_view::npos) {
    std::string_view rest = text.substr(colon + 1);
    while (!rest.empty()) {
      auto comma = rest.find(',');
      std::string_view item = rest.substr(0, comma);
      auto eq = item.find('=');
      if (eq == std::string_view::npos)
        throw ValidationError("domain spec: expected key=value, got '" + std::string(item) + "'");
      kv[std::string(item.substr(0, eq))] = std::string(item.substr(eq + 1));
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
  }
  auto take = [&](const char* key) -> std::string {
    auto it = kv.find(key);
    if (it == kv.end())
      throw ValidationError("domain spec '" + kind + "': missing parameter '" + key + "'");
    std::string v = it->second;
    kv.erase(it);
    return v;
  };

  DomainSpec spec;
  spec.h = h;
  if (kind == "disk") {
    spec.shape = shapes::Disk{parse_number("r", take("r"))};
  } else if (kind == "square") {
    spec.shape = shapes::Square{parse_number("side", take("side"))};
  } else if (kind == "annulus") {
    double a = parse_number("r_in", take("r_in"));
    spec.shape = shapes::Annulus{a, parse_number("r_out", take("r_out"))};
  } else if (kind == "strip") {
    double a = parse_number("height", take("height"));
    spec.shape = shapes::Strip{a, parse_number("length", take("length"))};
  } else if (kind == "perforated") {
    int k = parse_integer("k", take("k"));
    spec.shape = shapes::Perforated{k, parse_number("beta", take("beta"))};
  } else if (kind == "pepper_window") {
    int m = parse_integer("m", take("m"));
    spec.shape = shapes::PepperWindow{m, parse_number("eps", take("eps"))};
  } else if (kind == "interval") {
    double a = parse_number("start", take("start"));
    spec.shape = shapes::Interval{a, parse_number("end", take("end"))};
  } else {
    throw ValidationError("domain spec: unknown kind '" + kind + "'");
  }
  if (!kv.empty())
    throw ValidationError("domain spec '" + kind + "': unknown parameter '" + kv.begin()->first +
                          "'");
  spec.validate();
  return spec;
}

std::string DomainSpec::to_string() const {
  auto f = shortest;
  return std::visit(
      [&](const auto& s) -> std::string {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, shapes::Disk>) return "disk:r=" + f(s.r);
        if constexpr (std::is_same_v<T, shapes::Square>) return "square:side=" + f(s.side);
        if constexpr (std::is_same_v<T, shapes::Annulus>)
          return "annulus:r_in=" + f(s.r_in) + ",r_out=" + f(s.r_out);
        if constexpr (std::is_same_v<T, shapes::Strip>)
          return "strip:height=" + f(s.height) + ",length=" + f(s.length);
        if constexpr (std::is_same_v<T, shapes::Perforated>)
          return "perforated:k=" + std::to_string(s.k) + ",beta=" + f(s.beta);
        if constexpr (std::is_same_v<T, shapes::PepperWindow>)
          return "pepper_window:m=" + std::to_string(s.m) + ",eps=" + f(s.eps);
        if constexpr (std::is_same_v<T, shapes::Interval>)
          return "interval:start=" + f(s.start) + ",end=" + f(s.end);
      },
      shape);
}

int DomainSpec::dim() const { return std::holds_alternative<shapes::Interval>(shape) ? 1 : 2; }

void DomainSpec::validate() const {
  if (!(h > 0.0) || !std::isfinite(h)) throw ValidationError("domain spec: h must be positive");
  auto positive = [](double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v))
      throw ValidationError(std::string("domain spec: ") + what + " must be positive");
  };
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, shapes::Disk>) positive(s.r, "r");
        if constexpr (std::is_same_v<T, shapes::Square>) positive(s.side, "side");
        if constexpr (std::is_same_v<T, shapes::Annulus>) {
          positive(s.r_in, "r_in");
          positive(s.r_out, "r_out");
          if (s.r_in >= s.r_out) throw ValidationError("domain spec: annulus needs r_in < r_out");
        }
        if constexpr (std::is_same_v<T, shapes::Strip>) {
          positive(s.height, "height");
          positive(s.length, "length");
        }
        if constexpr (std::is_same_v<T, shapes::Perforated>) {
          if (s.k < 2) throw ValidationError("domain spec: perforated needs k >= 2");
          if (!(s.beta > 0.5)) throw ValidationError("domain spec: perforated needs beta > 1/2");
          double eps = std::pow(static_cast<double>(s.k), -s.beta);
          if (eps >= 0.5)
            throw ValidationError("domain spec: hole radius k^-beta = " + shortest(eps) +
                                  " exceeds the cell half-width 1/2");
        }
        if constexpr (std::is_same_v<T, shapes::PepperWindow>) {
          if (s.m < 1) throw ValidationError("domain spec: pepper_window needs m >= 1");
          positive(s.eps, "eps");
          if (s.eps < h * (1 - 1e-12))
            throw ResolutionError("domain spec: pepper_window needs eps >= h");
          if (s.eps >= 0.5) throw ValidationError("domain spec: pepper_window needs eps < 1/2");
        }
        if constexpr (std::is_same_v<T, shapes::Interval>) {
          if (!(s.start < s.end)) throw ValidationError("domain spec: interval needs start < end");
        }
      },
      shape);
}

GridDomain::GridDomain(GridFrame frame, std::vector<std::uint8_t> inside,
                       std::optional<DomainSpec> spec)
    : frame_(frame), inside_(std::move(inside)), spec_(std::move(spec)) {
  if (frame_.dim != 1 && frame_.dim != 2) throw ValidationError("grid: dim must be 1 or 2");
  if (frame_.dim == 1 && frame_.ny != 1) throw ValidationError("grid: 1D grids have ny = 1");
  if (!(frame_.h > 0.0)) throw ValidationError("grid: h must be positive");
  if (frame_.nx < 2 || (frame_.dim == 2 && frame_.ny < 2))
    throw ValidationError("grid: every axis needs at least 2 nodes");
  if (inside_.size() != frame_.size()) throw ValidationError("grid: mask size mismatch");
  for (std::size_t idx = 0; idx < inside_.size(); ++idx) {
    if (!inside_[idx]) continue;
    inside_[idx] = 1;
    ++count_;
    int i = frame_.col(idx), j = frame_.row(idx);
    bool edge = i == 0 || i == frame_.nx - 1;
    if (frame_.dim == 2) edge = edge || j == 0 || j == frame_.ny - 1;
    if (edge) throw ValidationError("grid: inside node on the window edge");
  }
  if (count_ == 0) throw ValidationError("grid: domain has no inside node");
}

double GridDomain::measure() const {
  return static_cast<double>(count_) * std::pow(frame_.h, frame_.dim);
}

std::vector<std::size_t> GridDomain::inside_nodes() const {
  std::vector<std::size_t> out;
  out.reserve(count_);
  for (std::size_t idx = 0; idx < inside_.size(); ++idx)
    if (inside_[idx]) out.push_back(idx);
  return out;
}

std::string GridDomain::label() const { return spec_ ? spec_->to_string() : std::string("mask"); }

GridDomain GridDomain::padded(int extra) const {
  if (extra < 0) throw ValidationError("grid: negative padding");
  GridFrame f = frame_;
  f.nx += 2 * extra;
  f.ox -= extra * f.h;
  int dy = 0;
  if (f.dim == 2) {
    f.ny += 2 * extra;
    f.oy -= extra * f.h;
    dy = extra;
  }
  std::vector<std::uint8_t> mask(f.size(), 0);
  for (int j = 0; j < frame_.ny; ++j)
    for (int i = 0; i < frame_.nx; ++i)
      mask[f.index(i + extra, j + dy)] = inside_[frame_.index(i, j)];
  return GridDomain(f, std::move(mask), spec_);
}

GridDomain GridDomain::without(const std::vector<std::size_t>& nodes) const {
  std::vector<std::uint8_t> mask = inside_;
  for (auto n : nodes) {
    if (n >= mask.size()) throw ValidationError("grid: node index out of range");
    mask[n] = 0;
  }
  return GridDomain(frame_, std::move(mask));
}

GridDomain GridDomain::dilated(double t) const {
  if (!(t > 0.0)) throw ValidationError("grid: dilation factor must be positive");
  GridFrame f = frame_;
  f.h *= t;
  f.ox *= t;
  f.oy *= t;
  return GridDomain(f, inside_);
}

ObstacleSet::ObstacleSet(GridFrame frame, std::vector<std::size_t> nodes)
    : frame_(frame), nodes_(std::move(nodes)) {
  std::sort(nodes_.begin(), nodes_.end());
  nodes_.erase(std::unique(nodes_.begin(), nodes_.end()), nodes_.end());
  if (nodes_.empty()) throw ValidationError("obstacle: empty node set");
  if (nodes_.back() >= frame_.size()) throw ValidationError("obstacle: node outside the grid window");
}

ObstacleSet ObstacleSet::single(const GridFrame& frame, std::size_t node) {
  return ObstacleSet(frame, {node});
}

ObstacleSet ObstacleSet::disk(const GridFrame& frame, double cx, double cy, double r) {
  std::vector<std::size_t> nodes;
  double tol = 1e-9 * frame.h;
  for (int j = 0; j < frame.ny; ++j) {
    double dy = frame.dim == 2 ? frame.y(j) - cy : 0.0;
    for (int i = 0; i < frame.nx; ++i) {
      double dx = frame.x(i) - cx;
      if (std::sqrt(dx * dx + dy * dy) <= r + tol) nodes.push_back(frame.index(i, j));
    }
  }
  return ObstacleSet(frame, std::move(nodes));
}

}  // namespace pqfreq
