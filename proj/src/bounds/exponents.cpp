#include <cmath>
#include <sstream>

#include "pqfreq/bounds.hpp"

namespace pqfreq {

namespace {
std::string q_text(double q) {
  if (q == kInf) return "inf";
  std::ostringstream ss;
  ss << q;
  return ss.str();
}
}  // namespace

bool Exponents::admissible(int N, double p, double q) {
  if (N < 1 || !(p >= 1.0) || !std::isfinite(p) || !(q >= 1.0) || std::isnan(q)) return false;
  if (p < N) return q <= double(N) * p / (N - p) * (1.0 + 1e-14);
  if (p == N) return q < kInf;
  return true;
}

Exponents::Exponents(int N, double p, double q) : N_(N), p_(p), q_(q) {
  if (!admissible(N, p, q)) {
    std::ostringstream ss;
    ss << "inadmissible exponents (N=" << N << ", p=" << p << ", q=" << q_text(q) << ")";
    if (N >= 1 && p >= 1.0 && p < N) ss << ": q must not exceed p* = " << N * p / (N - p);
    if (p == N) ss << ": q must be finite when p = N";
    throw ValidationError(ss.str());
  }
}

double Exponents::p_star() const { return p_ < N_ ? N_ * p_ / (N_ - p_) : kInf; }

std::string Exponents::to_string() const {
  std::ostringstream ss;
  ss << "N=" << N_ << ";p=" << p_ << ";q=" << q_text(q_);
  return ss.str();
}

}  // namespace pqfreq
