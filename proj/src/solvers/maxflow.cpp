#include <algorithm>
#include <utility>

#include <boost/graph/boykov_kolmogorov_max_flow.hpp>
#include <boost/graph/compressed_sparse_row_graph.hpp>

#include "pqfreq/maxflow.hpp"

namespace pqfreq {

namespace {

using Graph = boost::compressed_sparse_row_graph<boost::directedS, boost::no_property, boost::no_property,
                                                 boost::no_property, std::uint32_t, std::uint32_t>;
using Edge = boost::graph_traits<Graph>::edge_descriptor;

}  // namespace

CutGraph::CutGraph(std::uint32_t nodes) : n_(nodes), src_(nodes, 0.0), snk_(nodes, 0.0) {}

void CutGraph::add_edge(std::uint32_t u, std::uint32_t v, double cap_uv, double cap_vu) {
  eu_.push_back(u);
  ev_.push_back(v);
  cuv_.push_back(cap_uv);
  cvu_.push_back(cap_vu);
}

void CutGraph::add_terminal(std::uint32_t u, double source_cap, double sink_cap) {
  src_[u] += source_cap;
  snk_[u] += sink_cap;
}

double CutGraph::solve() {
  const std::uint32_t s = n_, t = n_ + 1, nv = n_ + 2;
  // Flow through s -> u -> t is forced; only the excess needs a terminal arc.
  double forced = 0.0;
  std::vector<double> src(src_), snk(snk_);
  std::uint32_t terminals = 0;
  for (std::uint32_t u = 0; u < n_; ++u) {
    double m = std::min(src[u], snk[u]);
    forced += m;
    src[u] -= m;
    snk[u] -= m;
    if (src[u] > 0.0 || snk[u] > 0.0) ++terminals;
  }

  // Arc pairs (forward, reverse), laid out sorted by source vertex.
  const std::size_t pairs = eu_.size() + terminals;
  std::vector<std::uint32_t> from, to;
  std::vector<double> cap;
  from.reserve(2 * pairs);
  to.reserve(2 * pairs);
  cap.reserve(2 * pairs);
  auto push = [&](std::uint32_t a, std::uint32_t b, double c_ab, double c_ba) {
    from.push_back(a);
    to.push_back(b);
    cap.push_back(c_ab);
    from.push_back(b);
    to.push_back(a);
    cap.push_back(c_ba);
  };
  for (std::size_t k = 0; k < eu_.size(); ++k) push(eu_[k], ev_[k], cuv_[k], cvu_[k]);
  for (std::uint32_t u = 0; u < n_; ++u) {
    if (src[u] > 0.0) push(s, u, src[u], 0.0);
    else if (snk[u] > 0.0) push(u, t, snk[u], 0.0);
  }
  const std::size_t m = from.size();
  std::vector<std::uint32_t> start(nv + 1, 0);
  for (auto a : from) ++start[a + 1];
  for (std::uint32_t v = 0; v < nv; ++v) start[v + 1] += start[v];
  std::vector<std::uint32_t> slot(m);
  {
    std::vector<std::uint32_t> fill(start.begin(), start.end() - 1);
    for (std::size_t k = 0; k < m; ++k) slot[k] = fill[from[k]]++;
  }
  std::vector<std::pair<std::uint32_t, std::uint32_t>> sorted(m);
  std::vector<double> capacity(m), residual(m, 0.0);
  std::vector<Edge> reverse(m);
  for (std::size_t k = 0; k < m; ++k) {
    sorted[slot[k]] = {from[k], to[k]};
    capacity[slot[k]] = cap[k];
    // the twin arc starts where this one ends
    reverse[slot[k]] = Edge(to[k], slot[k ^ 1]);
  }
  from = {};
  to = {};
  cap = {};
  slot = {};

  Graph g(boost::edges_are_sorted, sorted.begin(), sorted.end(), nv);
  sorted = {};

  auto eidx = boost::get(boost::edge_index, g);
  auto vidx = boost::get(boost::vertex_index, g);
  std::vector<Edge> pred(nv);
  std::vector<boost::default_color_type> color(nv);
  std::vector<long> dist(nv, 0);
  double flow = boost::boykov_kolmogorov_max_flow(
      g, boost::make_iterator_property_map(capacity.begin(), eidx),
      boost::make_iterator_property_map(residual.begin(), eidx),
      boost::make_iterator_property_map(reverse.begin(), eidx),
      boost::make_iterator_property_map(pred.begin(), vidx),
      boost::make_iterator_property_map(color.begin(), vidx),
      boost::make_iterator_property_map(dist.begin(), vidx), vidx, s, t);

  side_.assign(n_, 0);
  for (std::uint32_t u = 0; u < n_; ++u)
    side_[u] = color[u] == boost::color_traits<boost::default_color_type>::black() ? 1 : 0;
  return flow + forced;
}

}  // namespace pqfreq
