#include <algorithm>
#include <queue>

#include "flow.hpp"
#include "netrobust/errors.hpp"
#include "netrobust/measures.hpp"

namespace netrobust {

namespace detail {

void FlowNetwork::add_arc(std::size_t u, std::size_t v, std::int64_t cap,
                          std::int64_t reverse_cap) {
  arcs_.push_back({v, head_[u], cap});
  head_[u] = static_cast<int>(arcs_.size() - 1);
  arcs_.push_back({u, head_[v], reverse_cap});
  head_[v] = static_cast<int>(arcs_.size() - 1);
}

bool FlowNetwork::build_levels(std::size_t s, std::size_t t) {
  std::fill(level_.begin(), level_.end(), -1);
  std::queue<std::size_t> queue;
  level_[s] = 0;
  queue.push(s);
  while (!queue.empty()) {
    auto v = queue.front();
    queue.pop();
    for (int a = head_[v]; a != -1; a = arcs_[a].next) {
      if (arcs_[a].cap > 0 && level_[arcs_[a].to] < 0) {
        level_[arcs_[a].to] = level_[v] + 1;
        queue.push(arcs_[a].to);
      }
    }
  }
  return level_[t] >= 0;
}

std::int64_t FlowNetwork::push(std::size_t v, std::size_t t, std::int64_t pushed) {
  if (v == t) return pushed;
  for (int& a = cursor_[v]; a != -1; a = arcs_[a].next) {
    Arc& arc = arcs_[a];
    if (arc.cap <= 0 || level_[arc.to] != level_[v] + 1) continue;
    std::int64_t got = push(arc.to, t, std::min(pushed, arc.cap));
    if (got > 0) {
      arc.cap -= got;
      arcs_[a ^ 1].cap += got;
      return got;
    }
  }
  return 0;
}

std::int64_t FlowNetwork::max_flow(std::size_t s, std::size_t t, std::int64_t limit) {
  std::int64_t flow = 0;
  while (flow < limit && build_levels(s, t)) {
    cursor_ = head_;
    while (flow < limit) {
      std::int64_t got = push(s, t, limit - flow);
      if (got == 0) break;
      flow += got;
    }
  }
  return flow;
}

}  // namespace detail

namespace {

constexpr std::int64_t kUnbounded = std::numeric_limits<std::int32_t>::max();

// Internally vertex-disjoint s-t paths for non-adjacent s, t (node-split
// network: x_in = 2x, x_out = 2x + 1).
std::size_t local_vertex_connectivity(const Graph& g, NodeId s, NodeId t, std::size_t limit) {
  detail::FlowNetwork net(2 * g.id_bound());
  for (NodeId x : g.nodes()) {
    net.add_arc(2 * x, 2 * x + 1, (x == s || x == t) ? kUnbounded : 1);
    for (NodeId y : g.neighbors(x)) net.add_arc(2 * x + 1, 2 * y, kUnbounded);
  }
  return static_cast<std::size_t>(
      net.max_flow(2 * s + 1, 2 * t, static_cast<std::int64_t>(limit)));
}

std::size_t local_edge_connectivity(const Graph& g, NodeId s, NodeId t, std::size_t limit) {
  detail::FlowNetwork net(g.id_bound());
  for (auto [u, v] : g.edges()) net.add_arc(u, v, 1, 1);
  return static_cast<std::size_t>(net.max_flow(s, t, static_cast<std::int64_t>(limit)));
}

std::size_t min_degree(const Graph& g) {
  std::size_t best = std::numeric_limits<std::size_t>::max();
  for (NodeId v : g.nodes()) best = std::min(best, g.degree(v));
  return best;
}

}  // namespace

std::size_t vertex_connectivity(const Graph& g) {
  const std::size_t n = g.node_count();
  if (n < 2) throw DomainError("vertex connectivity needs at least two nodes");
  if (!is_connected(g)) return 0;
  if (g.edge_count() == n * (n - 1) / 2) return n - 1;

  // Esfahanian-Hakimi: some minimum cut either separates a minimum-degree
  // node v from a non-neighbour, or separates two non-adjacent neighbours
  // of v.
  const auto nodes = g.nodes();
  NodeId v = *std::min_element(nodes.begin(), nodes.end(),
                               [&](NodeId a, NodeId b) { return g.degree(a) < g.degree(b); });
  std::size_t best = g.degree(v);
  for (NodeId u : nodes) {
    if (best == 0) break;
    if (u == v || g.has_edge(u, v)) continue;
    best = std::min(best, local_vertex_connectivity(g, v, u, best));
  }
  auto nbrs = g.neighbors(v);
  for (std::size_t i = 0; i < nbrs.size() && best > 0; ++i) {
    for (std::size_t j = i + 1; j < nbrs.size() && best > 0; ++j) {
      if (g.has_edge(nbrs[i], nbrs[j])) continue;
      best = std::min(best, local_vertex_connectivity(g, nbrs[i], nbrs[j], best));
    }
  }
  return best;
}

std::size_t edge_connectivity(const Graph& g) {
  if (g.node_count() < 2) throw DomainError("edge connectivity needs at least two nodes");
  if (!is_connected(g)) return 0;
  const auto nodes = g.nodes();
  std::size_t best = min_degree(g);
  // The fixed source lies on one side of every cut.
  for (std::size_t i = 1; i < nodes.size() && best > 0; ++i) {
    best = std::min(best, local_edge_connectivity(g, nodes[0], nodes[i], best));
  }
  return best;
}

}  // namespace netrobust
