#include <vector>

#include "pqfreq/geometry.hpp"

namespace pqfreq {

namespace {

// Flood-fills nodes with mask == want; returns the label per node (-1 for
// other nodes) and the component count.
template <int Connectivity>
int label_components(const GridFrame& g, const std::vector<std::uint8_t>& mask, std::uint8_t want,
                     std::vector<int>& label) {
  static_assert(Connectivity == 4 || Connectivity == 8);
  static constexpr int di[8] = {1, -1, 0, 0, 1, 1, -1, -1};
  static constexpr int dj[8] = {0, 0, 1, -1, 1, -1, 1, -1};
  label.assign(g.size(), -1);
  std::vector<std::size_t> stack;
  int count = 0;
  for (std::size_t seed = 0; seed < g.size(); ++seed) {
    if (mask[seed] != want || label[seed] >= 0) continue;
    label[seed] = count;
    stack.push_back(seed);
    while (!stack.empty()) {
      std::size_t cur = stack.back();
      stack.pop_back();
      int i = g.col(cur), j = g.row(cur);
      for (int n = 0; n < Connectivity; ++n) {
        int a = i + di[n], b = j + dj[n];
        if (!g.contains(a, b)) continue;
        std::size_t nb = g.index(a, b);
        if (mask[nb] != want || label[nb] >= 0) continue;
        label[nb] = count;
        stack.push_back(nb);
      }
    }
    ++count;
  }
  return count;
}

}  // namespace

int inside_components(const GridDomain& domain) {
  std::vector<int> label;
  return label_components<8>(domain.frame(), domain.mask(), 1, label);
}

int topology_order(const GridDomain& domain) {
  const GridFrame& g = domain.frame();
  if (g.dim != 2) throw ValidationError("topology_order: needs a 2D domain");
  int parts = inside_components(domain);
  if (parts != 1)
    throw ValidationError("topology_order: domain is not connected (" + std::to_string(parts) +
                          " components)");
  std::vector<int> label;
  int count = label_components<4>(g, domain.mask(), 0, label);
  std::vector<char> outer(count, 0);
  for (int i = 0; i < g.nx; ++i) {
    outer[label[g.index(i, 0)]] = 1;
    outer[label[g.index(i, g.ny - 1)]] = 1;
  }
  for (int j = 0; j < g.ny; ++j) {
    outer[label[g.index(0, j)]] = 1;
    outer[label[g.index(g.nx - 1, j)]] = 1;
  }
  int holes = 0;
  for (char o : outer) holes += o ? 0 : 1;
  return holes + 1;
}

}  // namespace pqfreq
