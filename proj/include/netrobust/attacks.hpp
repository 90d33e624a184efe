#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "netrobust/graph.hpp"
#include "netrobust/measures.hpp"

namespace netrobust {

enum class TargetKind { node, edge };

enum class Selector {
  random,
  initial_degree,
  recalculated_degree,
  initial_betweenness,
  recalculated_betweenness,
};

/// Edge variants score an edge by deg(u) + deg(v) or by edge betweenness.
struct AttackStrategy {
  TargetKind target_kind = TargetKind::node;
  Selector selector = Selector::random;
  std::uint64_t seed = 0;
};

/// Short names: rnd, id, rd, ib, rb.
std::optional<Selector> parse_selector(std::string_view name);
std::string_view selector_name(Selector s);

using AttackTarget = std::variant<NodeId, Edge>;

std::string format_target(const AttackTarget& target);

/// Ordered removal list. Initial strategies rank once on the intact graph;
/// recalculated strategies re-rank after every removal. Equal scores are
/// resolved by a seeded uniform draw among the tied candidates.
std::vector<AttackTarget> select_targets(const Graph& g, const AttackStrategy& strategy,
                                         std::size_t count);

struct PerturbationTrace {
  /// Removed elements for attacks, applied actions for defenses (as text).
  std::vector<std::string> actions;
  /// curve[0] is the unperturbed graph; curve[i] follows the i-th action.
  std::vector<MeasureResult> curve;
  std::vector<Graph> snapshots;  // filled only on request
};

struct AttackRun {
  std::vector<AttackTarget> removed;
  PerturbationTrace trace;
  Graph attacked;
};

/// Removes `count` targets one at a time, measuring after each step. The
/// lcc measure is taken relative to the intact graph's node count.
/// Measure failures on fragmented graphs are recorded as NaN and flagged.
AttackRun run_attack(const Graph& g, const AttackStrategy& strategy, std::size_t count,
                     MeasureId measure = MeasureId::lcc, MeasureOptions options = {},
                     bool keep_snapshots = false);

Graph apply_targets(const Graph& g, const std::vector<AttackTarget>& targets);

/// Mean of trapezoids over the curve (the curve's area on a unit-spaced
/// axis divided by its length). Lower is a stronger attack for lcc.
double area_under_curve(const PerturbationTrace& trace);

/// Measures with failures mapped to NaN + flagged.
MeasureResult measure_or_flag(const Graph& g, MeasureId id, const MeasureOptions& options);

}  // namespace netrobust
