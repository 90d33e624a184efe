#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <variant>
#include <vector>

#include "netrobust/graph.hpp"

namespace netrobust {

/// lambda1 * beta / delta. Throws DomainError for delta <= 0 or an empty graph.
double effective_strength(const Graph& g, double beta, double delta);

// ---------------------------------------------------------------------------
// Dissemination

struct SisConfig {
  double beta = 0.0;
  double delta = 1.0;
  std::size_t steps = 100;
  /// Explicit seed nodes, or a fraction of the unmonitored nodes drawn at
  /// random (at least one node).
  std::variant<std::vector<NodeId>, double> initially_infected = 0.1;
  /// Removed from the graph before the run starts.
  std::vector<NodeId> monitored;
  std::uint64_t seed = 0;
};

/// Healed nodes are permanently immune.
using SirConfig = SisConfig;

struct SimulationCounts {
  std::size_t susceptible = 0;
  std::size_t infected = 0;
  std::size_t recovered = 0;
};

struct SimulationTrace {
  bool sir = false;
  double beta = 0.0;
  double delta = 0.0;
  double strength = 0.0;
  std::uint64_t seed = 0;
  /// Nodes taking part: n minus the monitored set.
  std::size_t population = 0;
  /// counts[t] is the state after step t; counts[0] is the initial state.
  std::vector<SimulationCounts> counts;

  double infected_fraction(std::size_t t) const;
  /// Mean infected fraction over the final `tail` rows.
  double tail_mean(std::size_t tail) const;
  bool died_out() const { return counts.back().infected == 0; }
};

/// Synchronous updates: infected nodes first attempt every susceptible
/// neighbour with probability beta, then nodes infected before the step
/// heal with probability delta. Always returns steps + 1 rows.
SimulationTrace run_sis(const Graph& g, const SisConfig& cfg);

/// As run_sis with absorbing recovery; stops once no node is infected.
SimulationTrace run_sir(const Graph& g, const SirConfig& cfg);

// ---------------------------------------------------------------------------
// Cascading failures

struct CascadeConfig {
  double l_max = 0.8;
  double r = 0.0;
  std::vector<NodeId> attacked;
  std::vector<NodeId> defended;
  double boost = 0.5;
  std::uint64_t seed = 0;
  std::size_t max_steps = 1000;
};

struct CascadeState {
  std::size_t step = 0;
  /// Indexed by node id; zero for ids that are not present.
  std::vector<double> capacity;
  std::vector<double> load;
  /// Every node failed so far, sorted.
  std::vector<NodeId> failed;
};

/// Betweenness-derived capacities in [0.01, 1], indexed by node id.
std::vector<double> cascade_capacities(const Graph& g);

/// state[0] has the attacked nodes failed; each later state follows one
/// round of equal-split redistribution. Stops at a fixpoint or max_steps.
std::vector<CascadeState> run_cascade(const Graph& g, const CascadeConfig& cfg);

// ---------------------------------------------------------------------------
// Sweeps

enum class SweepKind { sis, sir, cascade_r, cascade_lmax };

std::string_view sweep_parameter_name(SweepKind kind);

struct SweepGrid {
  SweepKind kind = SweepKind::sis;
  /// Effective strengths for epidemics (beta = s * delta / lambda1), r or
  /// l_max values for cascades.
  std::vector<double> values;
  std::vector<std::uint64_t> seeds;
  SisConfig epidemic;
  CascadeConfig cascade;
  /// Fraction of trailing steps averaged for mean_fraction.
  double tail = 0.1;
  std::size_t jobs = 1;
};

struct SweepRow {
  double value = 0.0;
  std::uint64_t seed = 0;
  /// Infected fraction (epidemics) or failed fraction (cascades).
  double final_fraction = 0.0;
  /// Tail mean for epidemics; equals final_fraction for cascades.
  double mean_fraction = 0.0;
  std::size_t steps = 0;
};

/// One row per (value, seed), values outermost. Throws ParameterError on an
/// empty grid. Rows are identical for any job count.
std::vector<SweepRow> sweep(const Graph& g, const SweepGrid& grid);

}  // namespace netrobust
