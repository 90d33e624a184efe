#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "netrobust/graph.hpp"
#include "netrobust/spectral.hpp"

namespace netrobust {

enum class MeasureId {
  vertex_connectivity,
  edge_connectivity,
  diameter,
  avg_distance,
  avg_inverse_distance,
  avg_vertex_betweenness,
  avg_edge_betweenness,
  clustering,
  lcc,
  spectral_radius,
  spectral_gap,
  natural_connectivity,
  spectral_scaling,
  generalized_robustness_index,
  algebraic_connectivity,
  spanning_trees,
  effective_resistance,
  approx_avg_vertex_betweenness,
  approx_avg_edge_betweenness,
  approx_natural_connectivity,
  approx_spanning_trees,
  approx_effective_resistance,
};

struct MeasureInfo {
  MeasureId id;
  std::string_view name;
  bool higher_is_more_robust;
  bool exact;
  /// For approximations: the measure they approximate.
  std::optional<MeasureId> exact_counterpart;
};

const MeasureInfo& measure_info(MeasureId id);
std::span<const MeasureInfo> all_measures();
std::optional<MeasureId> parse_measure_id(std::string_view name);

struct MeasureResult {
  double value = 0.0;
  MeasureId measure_id = MeasureId::lcc;
  bool higher_is_more_robust = true;
  bool exact = true;
  std::optional<std::size_t> k_used;
  /// Set when the value was produced under a documented fallback
  /// (largest component only, disconnected spanning-tree count, failed
  /// evaluation inside a campaign).
  bool flagged = false;
  std::string note;
};

struct MeasureOptions {
  /// Approximation parameter; 0 picks the default (10% of n for sampled
  /// betweenness, 30 for spectral approximations, both clamped to n).
  std::size_t k = 0;
  std::uint64_t seed = 0;
  /// Denominator for the lcc measure; 0 means the graph's node count.
  std::size_t reference_n = 0;
};

/// Dispatches to the measure named by `id`. Domain errors propagate.
MeasureResult evaluate(const Graph& g, MeasureId id, const MeasureOptions& options = {});

// ---------------------------------------------------------------------------
// Connectivity

std::size_t vertex_connectivity(const Graph& g);
std::size_t edge_connectivity(const Graph& g);

// ---------------------------------------------------------------------------
// Distances. Diameter and average distance use the largest connected
// component when the graph is disconnected.

double diameter(const Graph& g);
double average_distance(const Graph& g);
/// Global efficiency over all ordered pairs, 1/inf = 0.
double average_inverse_distance(const Graph& g);

// ---------------------------------------------------------------------------
// Betweenness (ordered source/target pairs, i.e. both (s,t) and (t,s)).

struct BetweennessScores {
  std::vector<double> vertex;  // indexed by node id
  std::vector<Edge> edges;     // g.edges()
  std::vector<double> edge;    // aligned with `edges`
};

BetweennessScores betweenness(const Graph& g);

/// Brandes accumulation restricted to `pivots`, every score multiplied by
/// `scale`.
BetweennessScores pivot_betweenness(const Graph& g, std::span<const NodeId> pivots,
                                    double scale);

/// k distinct present nodes drawn uniformly with the given seed, ascending.
std::vector<NodeId> sample_pivots(const Graph& g, std::size_t k, std::uint64_t seed);

double average_vertex_betweenness(const Graph& g);
double average_edge_betweenness(const Graph& g);
MeasureResult approx_average_vertex_betweenness(const Graph& g, std::size_t k,
                                                std::uint64_t seed);
MeasureResult approx_average_edge_betweenness(const Graph& g, std::size_t k,
                                              std::uint64_t seed);

// ---------------------------------------------------------------------------
// Graph structure

double global_clustering_coefficient(const Graph& g);
double lcc_measure(const Graph& g, std::size_t reference_n = 0);

// ---------------------------------------------------------------------------
// Adjacency spectrum

double spectral_radius(const Graph& g);
double spectral_gap(const Graph& g);
double natural_connectivity(const Graph& g);
MeasureResult approx_natural_connectivity(const Graph& g, std::size_t k,
                                          std::uint64_t seed = 0);

/// ln((1/n) sum exp(eigenvalues)) with the largest value factored out.
double natural_connectivity_from(std::span<const double> eigenvalues, std::size_t n);

struct SpectralScalingReport {
  double xi = 0.0;
  /// Least-squares fit of log u1(i) against log SC_odd(i); NaN when the
  /// x values have no spread (vertex-transitive graphs).
  double r_corr = 0.0;
  double slope = 0.0;
  bool regression_defined = false;
  /// xi below the 1e-2 threshold.
  bool good_expansion = false;
  std::size_t pairs_used = 0;
};

inline constexpr double kGoodExpansionThreshold = 1e-2;

SpectralScalingReport spectral_scaling(const Graph& g);
/// Spectral scaling with SC_odd truncated to the top-k eigenpairs.
SpectralScalingReport generalized_robustness_index(const Graph& g, std::size_t k = 30);

/// Shared evaluation on an explicit spectrum: eigenvalues descending and
/// matching eigenvector columns; u1 is column 0.
SpectralScalingReport spectral_scaling_from(std::span<const double> eigenvalues,
                                            const Eigen::MatrixXd& eigenvectors);

// ---------------------------------------------------------------------------
// Laplacian spectrum

double algebraic_connectivity(const Graph& g);

struct SpanningTreeCount {
  double value = 0.0;
  double log_value = 0.0;  // -inf when disconnected
  bool disconnected = false;
};

SpanningTreeCount num_spanning_trees(const Graph& g);
MeasureResult approx_num_spanning_trees(const Graph& g, std::size_t k, std::uint64_t seed = 0);

double effective_resistance(const Graph& g);
MeasureResult approx_effective_resistance(const Graph& g, std::size_t k,
                                          std::uint64_t seed = 0);

}  // namespace netrobust
