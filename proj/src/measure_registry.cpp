#include <algorithm>
#include <array>
#include <cmath>

#include "netrobust/errors.hpp"
#include "netrobust/measures.hpp"

namespace netrobust {

namespace {

using M = MeasureId;

// Direction column follows the robustness-measure comparison table.
constexpr std::array<MeasureInfo, 22> kMeasures{{
    {M::vertex_connectivity, "vertex_connectivity", true, true, std::nullopt},
    {M::edge_connectivity, "edge_connectivity", true, true, std::nullopt},
    {M::diameter, "diameter", false, true, std::nullopt},
    {M::avg_distance, "avg_distance", false, true, std::nullopt},
    {M::avg_inverse_distance, "avg_inverse_distance", true, true, std::nullopt},
    {M::avg_vertex_betweenness, "avg_vertex_betweenness", false, true, std::nullopt},
    {M::avg_edge_betweenness, "avg_edge_betweenness", false, true, std::nullopt},
    {M::clustering, "clustering", true, true, std::nullopt},
    {M::lcc, "lcc", true, true, std::nullopt},
    {M::spectral_radius, "spectral_radius", true, true, std::nullopt},
    {M::spectral_gap, "spectral_gap", true, true, std::nullopt},
    {M::natural_connectivity, "natural_connectivity", true, true, std::nullopt},
    {M::spectral_scaling, "spectral_scaling", false, true, std::nullopt},
    {M::generalized_robustness_index, "generalized_robustness_index", false, true, std::nullopt},
    {M::algebraic_connectivity, "algebraic_connectivity", true, true, std::nullopt},
    {M::spanning_trees, "spanning_trees", true, true, std::nullopt},
    {M::effective_resistance, "effective_resistance", false, true, std::nullopt},
    {M::approx_avg_vertex_betweenness, "approx_avg_vertex_betweenness", false, false,
     M::avg_vertex_betweenness},
    {M::approx_avg_edge_betweenness, "approx_avg_edge_betweenness", false, false,
     M::avg_edge_betweenness},
    {M::approx_natural_connectivity, "approx_natural_connectivity", true, false,
     M::natural_connectivity},
    {M::approx_spanning_trees, "approx_spanning_trees", true, false, M::spanning_trees},
    {M::approx_effective_resistance, "approx_effective_resistance", false, false,
     M::effective_resistance},
}};

std::size_t default_k(const Graph& g, MeasureId id) {
  const std::size_t n = g.node_count();
  if (id == M::approx_avg_vertex_betweenness || id == M::approx_avg_edge_betweenness) {
    return std::clamp<std::size_t>(static_cast<std::size_t>(std::lround(0.1 * n)), 1, n);
  }
  return std::min<std::size_t>(30, n);
}

}  // namespace

const MeasureInfo& measure_info(MeasureId id) {
  return kMeasures[static_cast<std::size_t>(id)];
}

std::span<const MeasureInfo> all_measures() { return kMeasures; }

std::optional<MeasureId> parse_measure_id(std::string_view name) {
  for (const auto& info : kMeasures) {
    if (info.name == name) return info.id;
  }
  return std::nullopt;
}

MeasureResult evaluate(const Graph& g, MeasureId id, const MeasureOptions& options) {
  const MeasureInfo& info = measure_info(id);
  MeasureResult r;
  r.measure_id = id;
  r.higher_is_more_robust = info.higher_is_more_robust;
  r.exact = info.exact;

  const bool uses_k = !info.exact || id == MeasureId::generalized_robustness_index;
  const std::size_t k = uses_k ? (options.k == 0 ? default_k(g, id) : options.k) : 0;
  if (uses_k) {
    if (g.empty()) throw DomainError(std::string(info.name) + " of an empty graph");
    if (k > g.node_count()) throw ParameterError("k must lie in [1, n]");
    r.k_used = k;
  }

  auto flag_if_fragmented = [&] {
    if (!is_connected(g)) {
      r.flagged = true;
      r.note = "evaluated on the largest connected component";
    }
  };

  auto take = [&](const MeasureResult& approx) {
    r.value = approx.value;
    r.flagged = approx.flagged;
    r.note = approx.note;
  };

  switch (id) {
    case MeasureId::vertex_connectivity:
      r.value = static_cast<double>(netrobust::vertex_connectivity(g));
      break;
    case MeasureId::edge_connectivity:
      r.value = static_cast<double>(netrobust::edge_connectivity(g));
      break;
    case MeasureId::diameter:
      r.value = netrobust::diameter(g);
      flag_if_fragmented();
      break;
    case MeasureId::avg_distance:
      r.value = average_distance(g);
      flag_if_fragmented();
      break;
    case MeasureId::avg_inverse_distance:
      r.value = average_inverse_distance(g);
      break;
    case MeasureId::avg_vertex_betweenness:
      r.value = average_vertex_betweenness(g);
      break;
    case MeasureId::avg_edge_betweenness:
      r.value = average_edge_betweenness(g);
      break;
    case MeasureId::clustering:
      r.value = global_clustering_coefficient(g);
      break;
    case MeasureId::lcc:
      r.value = lcc_measure(g, options.reference_n);
      break;
    case MeasureId::spectral_radius:
      r.value = netrobust::spectral_radius(g);
      break;
    case MeasureId::spectral_gap:
      r.value = netrobust::spectral_gap(g);
      break;
    case MeasureId::natural_connectivity:
      r.value = netrobust::natural_connectivity(g);
      break;
    case MeasureId::spectral_scaling: {
      auto report = netrobust::spectral_scaling(g);
      r.value = report.xi;
      if (report.good_expansion) r.note = "good expansion";
      break;
    }
    case MeasureId::generalized_robustness_index:
      r.value = netrobust::generalized_robustness_index(g, k).xi;
      break;
    case MeasureId::algebraic_connectivity:
      r.value = netrobust::algebraic_connectivity(g);
      break;
    case MeasureId::spanning_trees: {
      auto count = num_spanning_trees(g);
      r.value = count.value;
      if (count.disconnected) {
        r.flagged = true;
        r.note = "disconnected graph has no spanning tree";
      }
      break;
    }
    case MeasureId::effective_resistance:
      r.value = netrobust::effective_resistance(g);
      break;
    case MeasureId::approx_avg_vertex_betweenness:
      take(approx_average_vertex_betweenness(g, k, options.seed));
      break;
    case MeasureId::approx_avg_edge_betweenness:
      take(approx_average_edge_betweenness(g, k, options.seed));
      break;
    case MeasureId::approx_natural_connectivity:
      take(netrobust::approx_natural_connectivity(g, k, options.seed));
      break;
    case MeasureId::approx_spanning_trees:
      take(approx_num_spanning_trees(g, k, options.seed));
      break;
    case MeasureId::approx_effective_resistance:
      take(netrobust::approx_effective_resistance(g, k, options.seed));
      break;
  }
  return r;
}

}  // namespace netrobust
