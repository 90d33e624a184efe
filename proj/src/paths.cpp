#include <algorithm>
#include <numeric>
#include <random>

#include "netrobust/errors.hpp"
#include "netrobust/measures.hpp"

namespace netrobust {

namespace {

struct DistanceTotals {
  std::uint64_t max = 0;
  double sum = 0.0;
  double inverse_sum = 0.0;
  std::size_t pairs = 0;
};

DistanceTotals distance_totals(const Graph& g, std::span<const NodeId> sources) {
  DistanceTotals totals;
  for (NodeId s : sources) {
    auto dist = bfs_distances(g, s);
    for (NodeId t : g.nodes()) {
      if (t == s || dist[t] == kUnreachable) continue;
      totals.max = std::max<std::uint64_t>(totals.max, dist[t]);
      totals.sum += dist[t];
      totals.inverse_sum += 1.0 / dist[t];
      ++totals.pairs;
    }
  }
  return totals;
}

void require_two_nodes(const Graph& g, const char* what) {
  if (g.node_count() < 2) throw DomainError(std::string(what) + " needs at least two nodes");
}

}  // namespace

double diameter(const Graph& g) {
  require_two_nodes(g, "diameter");
  auto lcc = largest_component(g);
  return static_cast<double>(distance_totals(g, lcc).max);
}

double average_distance(const Graph& g) {
  require_two_nodes(g, "average distance");
  auto lcc = largest_component(g);
  auto totals = distance_totals(g, lcc);
  return totals.pairs == 0 ? 0.0 : totals.sum / static_cast<double>(totals.pairs);
}

double average_inverse_distance(const Graph& g) {
  require_two_nodes(g, "average inverse distance");
  const auto n = static_cast<double>(g.node_count());
  auto nodes = g.nodes();
  return distance_totals(g, nodes).inverse_sum / (n * (n - 1.0));
}

// ---------------------------------------------------------------------------
// Brandes accumulation

BetweennessScores pivot_betweenness(const Graph& g, std::span<const NodeId> pivots,
                                    double scale) {
  BetweennessScores out;
  out.vertex.assign(g.id_bound(), 0.0);
  out.edges = g.edges();
  out.edge.assign(out.edges.size(), 0.0);

  // Edge index for every adjacency slot, so predecessors carry their edge.
  std::vector<std::vector<std::uint32_t>> slot_edge(g.id_bound());
  for (NodeId v = 0; v < g.id_bound(); ++v) slot_edge[v].resize(g.degree(v));
  for (std::uint32_t e = 0; e < out.edges.size(); ++e) {
    auto [u, v] = out.edges[e];
    auto nu = g.neighbors(u);
    auto nv = g.neighbors(v);
    slot_edge[u][std::lower_bound(nu.begin(), nu.end(), v) - nu.begin()] = e;
    slot_edge[v][std::lower_bound(nv.begin(), nv.end(), u) - nv.begin()] = e;
  }

  struct Pred {
    NodeId node;
    std::uint32_t edge;
  };
  std::vector<std::vector<Pred>> preds(g.id_bound());
  std::vector<double> sigma(g.id_bound());
  std::vector<double> delta(g.id_bound());
  std::vector<std::int64_t> dist(g.id_bound());
  std::vector<NodeId> order;
  order.reserve(g.node_count());

  for (NodeId s : pivots) {
    order.clear();
    for (NodeId v : g.nodes()) {
      preds[v].clear();
      sigma[v] = 0.0;
      delta[v] = 0.0;
      dist[v] = -1;
    }
    sigma[s] = 1.0;
    dist[s] = 0;
    order.push_back(s);
    for (std::size_t head = 0; head < order.size(); ++head) {
      NodeId v = order[head];
      auto nbrs = g.neighbors(v);
      for (std::size_t slot = 0; slot < nbrs.size(); ++slot) {
        NodeId w = nbrs[slot];
        if (dist[w] < 0) {
          dist[w] = dist[v] + 1;
          order.push_back(w);
        }
        if (dist[w] == dist[v] + 1) {
          sigma[w] += sigma[v];
          preds[w].push_back({v, slot_edge[v][slot]});
        }
      }
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      NodeId w = *it;
      for (const Pred& p : preds[w]) {
        const double c = sigma[p.node] / sigma[w] * (1.0 + delta[w]);
        out.edge[p.edge] += c;
        delta[p.node] += c;
      }
      if (w != s) out.vertex[w] += delta[w];
    }
  }
  if (scale != 1.0) {
    for (double& b : out.vertex) b *= scale;
    for (double& b : out.edge) b *= scale;
  }
  return out;
}

BetweennessScores betweenness(const Graph& g) {
  auto nodes = g.nodes();
  return pivot_betweenness(g, nodes, 1.0);
}

std::vector<NodeId> sample_pivots(const Graph& g, std::size_t k, std::uint64_t seed) {
  auto nodes = g.nodes();
  if (k < 1 || k > nodes.size()) throw ParameterError("k must lie in [1, n]");
  std::mt19937_64 rng(seed);
  // Partial Fisher-Yates.
  for (std::size_t i = 0; i < k; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, nodes.size() - 1);
    std::swap(nodes[i], nodes[pick(rng)]);
  }
  nodes.resize(k);
  std::sort(nodes.begin(), nodes.end());
  return nodes;
}

namespace {

double vertex_average(const Graph& g, const BetweennessScores& scores) {
  double total = 0.0;
  for (NodeId v : g.nodes()) total += scores.vertex[v];
  return total / static_cast<double>(g.node_count());
}

double edge_average(const BetweennessScores& scores) {
  double total = std::accumulate(scores.edge.begin(), scores.edge.end(), 0.0);
  return total / static_cast<double>(scores.edge.size());
}

void require_vertex_betweenness(const Graph& g) {
  if (g.node_count() < 3) throw DomainError("vertex betweenness needs at least three nodes");
}

void require_edge_betweenness(const Graph& g) {
  if (g.edge_count() < 1) throw DomainError("edge betweenness needs at least one edge");
}

}  // namespace

double average_vertex_betweenness(const Graph& g) {
  require_vertex_betweenness(g);
  return vertex_average(g, betweenness(g));
}

double average_edge_betweenness(const Graph& g) {
  require_edge_betweenness(g);
  return edge_average(betweenness(g));
}

MeasureResult approx_average_vertex_betweenness(const Graph& g, std::size_t k,
                                                std::uint64_t seed) {
  require_vertex_betweenness(g);
  auto pivots = sample_pivots(g, k, seed);
  const double scale = static_cast<double>(g.node_count()) / static_cast<double>(k);
  MeasureResult r;
  r.measure_id = MeasureId::approx_avg_vertex_betweenness;
  r.value = vertex_average(g, pivot_betweenness(g, pivots, scale));
  r.exact = false;
  r.higher_is_more_robust = false;
  r.k_used = k;
  return r;
}

MeasureResult approx_average_edge_betweenness(const Graph& g, std::size_t k,
                                              std::uint64_t seed) {
  require_edge_betweenness(g);
  auto pivots = sample_pivots(g, k, seed);
  const double scale = static_cast<double>(g.node_count()) / static_cast<double>(k);
  MeasureResult r;
  r.measure_id = MeasureId::approx_avg_edge_betweenness;
  r.value = edge_average(pivot_betweenness(g, pivots, scale));
  r.exact = false;
  r.higher_is_more_robust = false;
  r.k_used = k;
  return r;
}

// ---------------------------------------------------------------------------

double global_clustering_coefficient(const Graph& g) {
  double triangles = 0.0;  // each counted once per corner
  double triples = 0.0;
  for (NodeId v : g.nodes()) {
    auto nbrs = g.neighbors(v);
    const auto d = static_cast<double>(nbrs.size());
    triples += d * (d - 1.0) / 2.0;
    for (std::size_t i = 0; i < nbrs.size(); ++i) {
      for (std::size_t j = i + 1; j < nbrs.size(); ++j) {
        if (g.has_edge(nbrs[i], nbrs[j])) triangles += 1.0;
      }
    }
  }
  // triangles already equals 3 * (triangle count).
  return triples == 0.0 ? 0.0 : triangles / triples;
}

double lcc_measure(const Graph& g, std::size_t reference_n) {
  return largest_connected_component_fraction(g, reference_n);
}

}  // namespace netrobust
