#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "netrobust/attacks.hpp"
#include "netrobust/graph.hpp"
#include "netrobust/measures.hpp"
#include "netrobust/spectral.hpp"

namespace netrobust {

enum class DefenseKind {
  random_addition,
  preferential_addition,
  random_edge_rewiring,
  random_neighbor_rewiring,
  preferential_random_edge_rewiring,
  netshield,
};

std::optional<DefenseKind> parse_defense_kind(std::string_view name);
std::string_view defense_name(DefenseKind kind);

struct DefenseStrategy {
  DefenseKind kind = DefenseKind::random_addition;
  /// Edge actions for heuristic kinds, monitored nodes for netshield.
  std::size_t budget = 1;
  std::uint64_t seed = 0;
  /// Resampling attempts per action before giving up.
  std::size_t max_tries = 100;
};

struct DefenseAction {
  enum class Type { add, remove } type;
  Edge edge;
};

std::string format_action(const DefenseAction& action);

struct DefenseResult {
  Graph graph;
  /// One entry per step; a rewiring step contributes a remove then an add.
  std::vector<std::vector<DefenseAction>> steps;
};

/// Applies `budget` steps of a heuristic defense (netshield is rejected).
/// Throws FeasibilityError when no valid action is found within max_tries.
DefenseResult apply_heuristic_defense(const Graph& g, const DefenseStrategy& strategy);

/// Recovery curve: the measure before and after every step. Budget 0 yields
/// a single-point curve.
PerturbationTrace run_defense(const Graph& g_attacked, const DefenseStrategy& strategy,
                              MeasureId measure = MeasureId::lcc,
                              MeasureOptions options = {});

// ---------------------------------------------------------------------------
// Netshield

struct MonitoredSet {
  std::vector<NodeId> nodes;
  double shield_value = 0.0;
  double eigendrop = 0.0;
};

/// Shield value of S against a spectrum whose first pair is (lambda1, u1),
/// with vector entries indexed by position in g.nodes().
double shield_value(const Graph& g, std::span<const NodeId> set, const SpectrumResult& spectrum);

/// Leading adjacency eigenpair used by netshield (dense below the cutoff).
SpectrumResult leading_eigenpair(const Graph& g);

/// Greedy selection of k nodes by marginal shield-value gain over a fixed
/// spectrum. Requires a connected graph.
MonitoredSet netshield_select(const Graph& g, std::size_t k);

}  // namespace netrobust
