#pragma once

#include <cstdint>
#include <vector>

namespace pqfreq {

// s-t cut graph over n nodes, solved with Boost's Boykov-Kolmogorov max-flow.
// Terminal capacities accumulate; pairwise edges carry a capacity in each
// direction.
class CutGraph {
 public:
  explicit CutGraph(std::uint32_t nodes);

  void add_edge(std::uint32_t u, std::uint32_t v, double cap_uv, double cap_vu);
  void add_terminal(std::uint32_t u, double source_cap, double sink_cap);

  // Value of the minimum cut.
  double solve();
  // After solve(): true when u ends on the source side (reachable from s).
  bool source_side(std::uint32_t u) const { return side_[u] != 0; }

 private:
  std::uint32_t n_;
  std::vector<std::uint32_t> eu_, ev_;
  std::vector<double> cuv_, cvu_;
  std::vector<double> src_, snk_;
  std::vector<std::uint8_t> side_;
};

}  // namespace pqfreq
