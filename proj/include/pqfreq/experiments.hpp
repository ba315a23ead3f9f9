#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pqfreq/bounds.hpp"
#include "pqfreq/geometry.hpp"
#include "pqfreq/solvers.hpp"

namespace pqfreq {

// Counter-based generator: value i of stream s is splitmix64(seed, s, i), so
// results never depend on evaluation order.
std::uint64_t splitmix64(std::uint64_t x);
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream) : key_(splitmix64(seed ^ splitmix64(stream))) {}
  std::uint64_t next() { return splitmix64(key_ + 0x9e3779b97f4a7c15ULL * ++counter_); }
  // Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int integer(int lo, int hi) { return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1)); }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

// Worker count from NUMERIC_THREADS (default: hardware concurrency, at least 1).
int pool_threads();
// Runs fn(0..count-1) on up to `threads` workers. The first exception is
// rethrown after all workers stop.
void run_pool(std::size_t count, const std::function<void(std::size_t)>& fn, int threads);

struct Campaign {
  std::string name = "campaign";
  std::string kind = "verify";  // verify | buser | asymptotic | moser_trudinger | pepper
  std::uint64_t seed = 1;
  double h = 1.0 / 32.0;
  std::vector<std::string> domains;
  int seeded_domains = 0;
  std::vector<std::pair<double, double>> exponents;  // (p, q), q may be inf
  double tolerance = 1e-3;
  SolveOptions solve;
  std::string output_dir = ".";

  // sweeps
  std::vector<int> k_list;
  double beta = 0.6;
  double h_max = 1.0 / 64.0;
  std::size_t node_budget = 2'000'000;
  int N = 2;
  std::vector<double> p_grid;
  std::string quantity = "beta";
  std::vector<double> q_grid;
  std::string domain = "disk:r=1";
  double p = 4.0;
  std::vector<int> m_grid;
  std::vector<double> eps_factors;

  static Campaign from_json(const std::string& text);
  static Campaign load(const std::string& path);
  std::string to_json() const;
};

// Domain specs drawn from the campaign seed: disks, squares, annuli, strips,
// perforated squares and pepper windows with randomized parameters.
std::vector<std::string> seeded_domain_specs(std::uint64_t seed, int count);

struct Summary {
  int pass_count = 0;
  int fail_count = 0;
  double worst_margin = kInf;  // relative: margin / max(|bound|, tiny)
};

struct VerifyResult {
  std::vector<BoundRow> rows;
  Summary summary;
};

VerifyResult verify_inequalities(const Campaign& campaign);

// Generic numeric table for sweep output.
struct SweepTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::map<std::string, double> summary;
  std::vector<std::string> flags;  // skipped points and failed checks
  bool pass = true;
};

struct BuserPolicy {
  double h_max = 1.0 / 64.0;
  std::size_t node_budget = 2'000'000;
};
SweepTable buser_sweep(const std::vector<int>& k_list, double beta, const BuserPolicy& policy,
                       const SolveOptions& options = {});
SweepTable asymptotic_sweep(int N, const std::vector<double>& p_grid, const std::string& quantity,
                            const SolveOptions& options = {});
SweepTable moser_trudinger_trend(const DomainSpec& domain, const std::vector<double>& q_grid,
                                 const SolveOptions& options = {});
SweepTable pepper_trend(double p, const std::vector<int>& m_grid, const std::vector<double>& eps_factors,
                        double h, const SolveOptions& options = {});
SweepTable run_sweep(const Campaign& campaign);

// Reporting: 12 significant digits, stable column order.
std::string format_number(double v);
std::string rows_csv(std::vector<BoundRow> rows);
std::string summary_json(const Summary& s, const std::string& config_json);
std::string sweep_csv(const SweepTable& t);
std::string sweep_summary_json(const SweepTable& t, const std::string& config_json);
Summary summarize(const std::vector<BoundRow>& rows);

}  // namespace pqfreq
