#include "netrobust/defenses.hpp"

#include <algorithm>
#include <random>

#include "netrobust/errors.hpp"

namespace netrobust {

std::optional<DefenseKind> parse_defense_kind(std::string_view name) {
  if (name == "random_addition") return DefenseKind::random_addition;
  if (name == "preferential_addition") return DefenseKind::preferential_addition;
  if (name == "random_edge_rewiring") return DefenseKind::random_edge_rewiring;
  if (name == "random_neighbor_rewiring") return DefenseKind::random_neighbor_rewiring;
  if (name == "preferential_random_edge_rewiring") {
    return DefenseKind::preferential_random_edge_rewiring;
  }
  if (name == "netshield") return DefenseKind::netshield;
  return std::nullopt;
}

std::string_view defense_name(DefenseKind kind) {
  switch (kind) {
    case DefenseKind::random_addition: return "random_addition";
    case DefenseKind::preferential_addition: return "preferential_addition";
    case DefenseKind::random_edge_rewiring: return "random_edge_rewiring";
    case DefenseKind::random_neighbor_rewiring: return "random_neighbor_rewiring";
    case DefenseKind::preferential_random_edge_rewiring:
      return "preferential_random_edge_rewiring";
    case DefenseKind::netshield: return "netshield";
  }
  return "?";
}

std::string format_action(const DefenseAction& action) {
  return (action.type == DefenseAction::Type::add ? "+" : "-") +
         std::to_string(action.edge.first) + "-" + std::to_string(action.edge.second);
}

namespace {

Edge ordered(NodeId u, NodeId v) { return u < v ? Edge{u, v} : Edge{v, u}; }

class DefenseStepper {
 public:
  DefenseStepper(const Graph& g, const DefenseStrategy& strategy)
      : editor_(g), strategy_(strategy), rng_(strategy.seed) {}

  std::vector<DefenseAction> step() {
    std::vector<DefenseAction> actions;
    switch (strategy_.kind) {
      case DefenseKind::random_addition:
        random_add(actions, std::nullopt);
        break;
      case DefenseKind::preferential_addition:
        preferential_add(actions);
        break;
      case DefenseKind::random_edge_rewiring:
        random_edge_rewire(actions);
        break;
      case DefenseKind::random_neighbor_rewiring:
        random_neighbor_rewire(actions);
        break;
      case DefenseKind::preferential_random_edge_rewiring:
        preferential_rewire(actions);
        break;
      case DefenseKind::netshield:
        throw ParameterError("netshield selects monitored nodes; it does not edit edges");
    }
    return actions;
  }

  const Graph& graph() const { return editor_.graph(); }
  Graph release() && { return std::move(editor_).release(); }

 private:
  NodeId random_node(const std::vector<NodeId>& nodes) {
    std::uniform_int_distribution<std::size_t> pick(0, nodes.size() - 1);
    return nodes[pick(rng_)];
  }

  void add(std::vector<DefenseAction>& log, NodeId u, NodeId v) {
    editor_.add_edge(u, v);
    log.push_back({DefenseAction::Type::add, ordered(u, v)});
  }

  void remove(std::vector<DefenseAction>& log, NodeId u, NodeId v) {
    editor_.remove_edge(u, v);
    log.push_back({DefenseAction::Type::remove, ordered(u, v)});
  }

  // Edge between two uniformly drawn nodes; `banned` is never re-added.
  void random_add(std::vector<DefenseAction>& log, std::optional<Edge> banned) {
    auto nodes = graph().nodes();
    if (nodes.size() >= 2) {
      for (std::size_t attempt = 0; attempt < strategy_.max_tries; ++attempt) {
        NodeId u = random_node(nodes);
        NodeId v = random_node(nodes);
        if (u == v || graph().has_edge(u, v)) continue;
        if (banned && ordered(u, v) == *banned) continue;
        add(log, u, v);
        return;
      }
    }
    throw FeasibilityError("no free node pair found for random edge addition");
  }

  // Lowest-degree non-adjacent pair, ties by lowest id.
  void preferential_add(std::vector<DefenseAction>& log) {
    auto nodes = graph().nodes();
    std::stable_sort(nodes.begin(), nodes.end(),
                     [&](NodeId a, NodeId b) { return graph().degree(a) < graph().degree(b); });
    std::optional<Edge> best;
    std::size_t best_cost = 0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (best && 2 * graph().degree(nodes[i]) > best_cost) break;
      for (std::size_t j = i + 1; j < nodes.size(); ++j) {
        const std::size_t cost = graph().degree(nodes[i]) + graph().degree(nodes[j]);
        if (best && cost > best_cost) break;
        if (graph().has_edge(nodes[i], nodes[j])) continue;
        Edge candidate = ordered(nodes[i], nodes[j]);
        if (!best || cost < best_cost || candidate < *best) {
          best = candidate;
          best_cost = cost;
        }
        break;
      }
    }
    if (!best) throw FeasibilityError("graph is complete; no edge can be added");
    add(log, best->first, best->second);
  }

  Edge random_edge() {
    auto edges = graph().edges();
    if (edges.empty()) throw FeasibilityError("rewiring needs at least one edge");
    std::uniform_int_distribution<std::size_t> pick(0, edges.size() - 1);
    return edges[pick(rng_)];
  }

  void random_edge_rewire(std::vector<DefenseAction>& log) {
    Edge e = random_edge();
    remove(log, e.first, e.second);
    random_add(log, e);
  }

  // Uniform node first, then one of its edges.
  void random_neighbor_rewire(std::vector<DefenseAction>& log) {
    if (graph().edge_count() == 0) throw FeasibilityError("rewiring needs at least one edge");
    auto nodes = graph().nodes();
    for (std::size_t attempt = 0; attempt < strategy_.max_tries; ++attempt) {
      NodeId u = random_node(nodes);
      auto nbrs = graph().neighbors(u);
      if (nbrs.empty()) continue;
      std::uniform_int_distribution<std::size_t> pick(0, nbrs.size() - 1);
      NodeId v = nbrs[pick(rng_)];
      remove(log, u, v);
      random_add(log, ordered(u, v));
      return;
    }
    throw FeasibilityError("no node with an incident edge found for neighbor rewiring");
  }

  // Drops the higher-degree end of a random edge and reattaches the other
  // end to a random node.
  void preferential_rewire(std::vector<DefenseAction>& log) {
    Edge e = random_edge();
    const auto du = graph().degree(e.first);
    const auto dv = graph().degree(e.second);
    const NodeId high = du > dv ? e.first : e.second;
    const NodeId low = high == e.first ? e.second : e.first;
    remove(log, e.first, e.second);
    auto nodes = graph().nodes();
    for (std::size_t attempt = 0; attempt < strategy_.max_tries; ++attempt) {
      NodeId w = random_node(nodes);
      if (w == low || w == high || graph().has_edge(low, w)) continue;
      add(log, low, w);
      return;
    }
    throw FeasibilityError("no reconnection target found for preferential rewiring");
  }

  GraphEditor editor_;
  DefenseStrategy strategy_;
  std::mt19937_64 rng_;
};

void validate(const DefenseStrategy& strategy) {
  if (strategy.kind == DefenseKind::netshield) {
    throw ParameterError("netshield is not a heuristic edge defense");
  }
  if (strategy.max_tries == 0) throw ParameterError("max_tries must be positive");
}

}  // namespace

DefenseResult apply_heuristic_defense(const Graph& g, const DefenseStrategy& strategy) {
  validate(strategy);
  DefenseStepper stepper(g, strategy);
  DefenseResult out;
  for (std::size_t i = 0; i < strategy.budget; ++i) out.steps.push_back(stepper.step());
  out.graph = std::move(stepper).release();
  return out;
}

PerturbationTrace run_defense(const Graph& g_attacked, const DefenseStrategy& strategy,
                              MeasureId measure, MeasureOptions options) {
  validate(strategy);
  if (options.reference_n == 0) options.reference_n = g_attacked.node_count();
  DefenseStepper stepper(g_attacked, strategy);
  PerturbationTrace trace;
  trace.curve.push_back(measure_or_flag(stepper.graph(), measure, options));
  for (std::size_t i = 0; i < strategy.budget; ++i) {
    std::string text;
    for (const auto& action : stepper.step()) {
      if (!text.empty()) text += ' ';
      text += format_action(action);
    }
    trace.actions.push_back(std::move(text));
    trace.curve.push_back(measure_or_flag(stepper.graph(), measure, options));
  }
  return trace;
}

// ---------------------------------------------------------------------------
// Netshield

namespace {

std::vector<NodeId> positions_of(const Graph& g) {
  std::vector<NodeId> position(g.id_bound(), kUnreachable);
  auto nodes = g.nodes();
  for (std::size_t i = 0; i < nodes.size(); ++i) position[nodes[i]] = static_cast<NodeId>(i);
  return position;
}

}  // namespace

SpectrumResult leading_eigenpair(const Graph& g) {
  if (g.empty()) throw DomainError("leading eigenpair of an empty graph");
  if (g.node_count() <= kDenseCutoff) {
    auto full = adjacency_spectrum(g, true);
    SpectrumResult r;
    r.matrix_kind = MatrixKind::adjacency;
    r.eigenvalues = {full.eigenvalues.front()};
    r.eigenvectors = full.eigenvectors->leftCols(1);
    r.k_used = 1;
    return r;
  }
  SolverConfig cfg;
  cfg.k = 1;
  return top_k_adjacency(g, cfg);
}

double shield_value(const Graph& g, std::span<const NodeId> set, const SpectrumResult& spectrum) {
  if (spectrum.eigenvalues.empty() || !spectrum.eigenvectors) {
    throw PreconditionError("shield value needs lambda1 and u1");
  }
  const double lambda1 = spectrum.eigenvalues.front();
  const auto u = spectrum.eigenvectors->col(0);
  auto position = positions_of(g);
  double value = 0.0;
  for (NodeId i : set) {
    const double ui = u[position[i]];
    value += 2.0 * lambda1 * ui * ui;
    for (NodeId j : set) {
      if (g.has_edge(i, j)) value -= ui * u[position[j]];
    }
  }
  return value;
}

MonitoredSet netshield_select(const Graph& g, std::size_t k) {
  if (k < 1 || k > g.node_count()) throw ParameterError("k must lie in [1, n]");
  if (!is_connected(g)) throw DomainError("netshield needs a connected graph");

  const auto spectrum = leading_eigenpair(g);
  const double lambda1 = spectrum.eigenvalues.front();
  const auto u = spectrum.eigenvectors->col(0);
  const auto nodes = g.nodes();
  auto position = positions_of(g);

  // penalty[i] = sum of u(j) over already selected neighbours j of i.
  std::vector<double> penalty(nodes.size(), 0.0);
  std::vector<bool> selected(nodes.size(), false);
  MonitoredSet out;
  for (std::size_t round = 0; round < k; ++round) {
    std::size_t best = nodes.size();
    double best_gain = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (selected[i]) continue;
      const double gain = 2.0 * lambda1 * u[i] * u[i] - 2.0 * u[i] * penalty[i];
      if (best == nodes.size() || gain > best_gain) {
        best = i;
        best_gain = gain;
      }
    }
    selected[best] = true;
    out.nodes.push_back(nodes[best]);
    out.shield_value += best_gain;
    for (NodeId w : g.neighbors(nodes[best])) penalty[position[w]] += u[best];
  }

  GraphEditor rest(g);
  for (NodeId v : out.nodes) rest.remove_node(v);
  const double remaining = rest.graph().empty() ? 0.0 : spectral_radius(rest.graph());
  out.eigendrop = lambda1 - remaining;
  return out;
}

}  // namespace netrobust
