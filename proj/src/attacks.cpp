#include "netrobust/attacks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "netrobust/errors.hpp"

namespace netrobust {

std::optional<Selector> parse_selector(std::string_view name) {
  if (name == "rnd") return Selector::random;
  if (name == "id") return Selector::initial_degree;
  if (name == "rd") return Selector::recalculated_degree;
  if (name == "ib") return Selector::initial_betweenness;
  if (name == "rb") return Selector::recalculated_betweenness;
  return std::nullopt;
}

std::string_view selector_name(Selector s) {
  switch (s) {
    case Selector::random: return "rnd";
    case Selector::initial_degree: return "id";
    case Selector::recalculated_degree: return "rd";
    case Selector::initial_betweenness: return "ib";
    case Selector::recalculated_betweenness: return "rb";
  }
  return "?";
}

std::string format_target(const AttackTarget& target) {
  if (const auto* v = std::get_if<NodeId>(&target)) return std::to_string(*v);
  const auto& e = std::get<Edge>(target);
  return std::to_string(e.first) + "-" + std::to_string(e.second);
}

namespace {

bool uses_betweenness(Selector s) {
  return s == Selector::initial_betweenness || s == Selector::recalculated_betweenness;
}

bool recalculates(Selector s) {
  return s == Selector::recalculated_degree || s == Selector::recalculated_betweenness;
}

// Index of the highest score; ties (within 1e-9 relative) drawn uniformly.
std::size_t pick_best(const std::vector<double>& scores, const std::vector<bool>& taken,
                      std::mt19937_64& rng) {
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!taken[i]) best = std::max(best, scores[i]);
  }
  const double slack = 1e-9 * std::max(1.0, std::abs(best));
  std::vector<std::size_t> tied;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!taken[i] && scores[i] >= best - slack) tied.push_back(i);
  }
  if (tied.size() == 1) return tied.front();
  std::uniform_int_distribution<std::size_t> pick(0, tied.size() - 1);
  return tied[pick(rng)];
}

std::vector<double> node_scores(const Graph& g, const std::vector<NodeId>& nodes, Selector s) {
  std::vector<double> scores(nodes.size());
  if (uses_betweenness(s)) {
    auto b = betweenness(g);
    for (std::size_t i = 0; i < nodes.size(); ++i) scores[i] = b.vertex[nodes[i]];
  } else {
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      scores[i] = static_cast<double>(g.degree(nodes[i]));
    }
  }
  return scores;
}

// Scores aligned with g.edges().
std::vector<double> edge_scores(const Graph& g, Selector s) {
  if (uses_betweenness(s)) return betweenness(g).edge;
  auto edges = g.edges();
  std::vector<double> scores(edges.size());
  for (std::size_t i = 0; i < edges.size(); ++i) {
    scores[i] = static_cast<double>(g.degree(edges[i].first) + g.degree(edges[i].second));
  }
  return scores;
}

std::vector<AttackTarget> select_nodes(const Graph& g, const AttackStrategy& strategy,
                                       std::size_t count) {
  std::mt19937_64 rng(strategy.seed);
  std::vector<AttackTarget> out;
  auto nodes = g.nodes();

  if (strategy.selector == Selector::random) {
    std::shuffle(nodes.begin(), nodes.end(), rng);
    for (std::size_t i = 0; i < count; ++i) out.emplace_back(nodes[i]);
    return out;
  }

  if (!recalculates(strategy.selector)) {
    auto scores = node_scores(g, nodes, strategy.selector);
    std::vector<bool> taken(nodes.size(), false);
    for (std::size_t i = 0; i < count; ++i) {
      auto idx = pick_best(scores, taken, rng);
      taken[idx] = true;
      out.emplace_back(nodes[idx]);
    }
    return out;
  }

  GraphEditor work(g);
  std::vector<double> scores;
  bool stale = true;
  for (std::size_t i = 0; i < count; ++i) {
    nodes = work.graph().nodes();
    if (stale) {
      scores = node_scores(work.graph(), nodes, strategy.selector);
    }
    std::vector<bool> taken(nodes.size(), false);
    auto idx = pick_best(scores, taken, rng);
    NodeId victim = nodes[idx];
    // Removing an isolated node changes no other score.
    stale = work.graph().degree(victim) > 0;
    if (!stale) scores.erase(scores.begin() + static_cast<std::ptrdiff_t>(idx));
    work.remove_node(victim);
    out.emplace_back(victim);
  }
  return out;
}

std::vector<AttackTarget> select_edges(const Graph& g, const AttackStrategy& strategy,
                                       std::size_t count) {
  std::mt19937_64 rng(strategy.seed);
  std::vector<AttackTarget> out;
  auto edges = g.edges();

  if (strategy.selector == Selector::random) {
    std::shuffle(edges.begin(), edges.end(), rng);
    for (std::size_t i = 0; i < count; ++i) out.emplace_back(edges[i]);
    return out;
  }

  if (!recalculates(strategy.selector)) {
    auto scores = edge_scores(g, strategy.selector);
    std::vector<bool> taken(edges.size(), false);
    for (std::size_t i = 0; i < count; ++i) {
      auto idx = pick_best(scores, taken, rng);
      taken[idx] = true;
      out.emplace_back(edges[idx]);
    }
    return out;
  }

  GraphEditor work(g);
  for (std::size_t i = 0; i < count; ++i) {
    edges = work.graph().edges();
    auto scores = edge_scores(work.graph(), strategy.selector);
    std::vector<bool> taken(edges.size(), false);
    Edge victim = edges[pick_best(scores, taken, rng)];
    work.remove_edge(victim.first, victim.second);
    out.emplace_back(victim);
  }
  return out;
}

}  // namespace

std::vector<AttackTarget> select_targets(const Graph& g, const AttackStrategy& strategy,
                                         std::size_t count) {
  const std::size_t available =
      strategy.target_kind == TargetKind::node ? g.node_count() : g.edge_count();
  if (count > available) {
    throw ParameterError("cannot remove " + std::to_string(count) + " targets; only " +
                         std::to_string(available) + " available");
  }
  return strategy.target_kind == TargetKind::node ? select_nodes(g, strategy, count)
                                                  : select_edges(g, strategy, count);
}

namespace {

void remove_target(GraphEditor& editor, const AttackTarget& target) {
  if (const auto* v = std::get_if<NodeId>(&target)) {
    editor.remove_node(*v);
  } else {
    const auto& e = std::get<Edge>(target);
    editor.remove_edge(e.first, e.second);
  }
}

}  // namespace

Graph apply_targets(const Graph& g, const std::vector<AttackTarget>& targets) {
  GraphEditor editor(g);
  for (const auto& t : targets) remove_target(editor, t);
  return std::move(editor).release();
}

MeasureResult measure_or_flag(const Graph& g, MeasureId id, const MeasureOptions& options) {
  try {
    return evaluate(g, id, options);
  } catch (const Error& e) {
    const auto& info = measure_info(id);
    MeasureResult r;
    r.measure_id = id;
    r.higher_is_more_robust = info.higher_is_more_robust;
    r.exact = info.exact;
    r.value = std::numeric_limits<double>::quiet_NaN();
    r.flagged = true;
    r.note = e.what();
    return r;
  }
}

AttackRun run_attack(const Graph& g, const AttackStrategy& strategy, std::size_t count,
                     MeasureId measure, MeasureOptions options, bool keep_snapshots) {
  if (options.reference_n == 0) options.reference_n = g.node_count();
  AttackRun run;
  run.removed = select_targets(g, strategy, count);

  GraphEditor editor(g);
  run.trace.curve.push_back(measure_or_flag(editor.graph(), measure, options));
  if (keep_snapshots) run.trace.snapshots.push_back(editor.graph());
  for (const auto& target : run.removed) {
    remove_target(editor, target);
    run.trace.actions.push_back(format_target(target));
    run.trace.curve.push_back(measure_or_flag(editor.graph(), measure, options));
    if (keep_snapshots) run.trace.snapshots.push_back(editor.graph());
  }
  run.attacked = std::move(editor).release();
  return run;
}

double area_under_curve(const PerturbationTrace& trace) {
  const auto& c = trace.curve;
  if (c.empty()) return 0.0;
  if (c.size() == 1) return c.front().value;
  double area = 0.0;
  for (std::size_t i = 1; i < c.size(); ++i) area += 0.5 * (c[i - 1].value + c[i].value);
  return area / static_cast<double>(c.size() - 1);
}

}  // namespace netrobust
