#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace netrobust {

using NodeId = std::uint32_t;
using Edge = std::pair<NodeId, NodeId>;

/// Undirected, unweighted simple graph.
///
/// Node ids live in a fixed id space [0, id_bound()). Removing a node keeps
/// its id reserved (so traces and mappings stay valid) and the node stops
/// counting towards node_count(). A freshly built graph is dense: every id
/// below id_bound() is present.
///
/// Graph is a value type. Mutation goes through the free functions below,
/// which return a modified copy.
class Graph {
 public:
  Graph() = default;

  /// n nodes, no edges.
  explicit Graph(std::size_t n);

  /// n nodes and the given edges. Self-loops are dropped and duplicates
  /// collapsed; endpoints must be < n.
  Graph(std::size_t n, std::span<const Edge> edges);

  std::size_t id_bound() const noexcept { return adjacency_.size(); }
  std::size_t node_count() const noexcept { return node_count_; }
  std::size_t edge_count() const noexcept { return edge_count_; }
  bool empty() const noexcept { return node_count_ == 0; }

  /// True when every id below id_bound() is present.
  bool dense() const noexcept { return node_count_ == adjacency_.size(); }

  bool contains(NodeId v) const noexcept {
    return v < present_.size() && present_[v];
  }
  bool has_edge(NodeId u, NodeId v) const;

  /// Sorted neighbor ids of a present node.
  std::span<const NodeId> neighbors(NodeId v) const { return adjacency_[v]; }
  std::size_t degree(NodeId v) const { return adjacency_[v].size(); }
  std::size_t max_degree() const;

  /// Present node ids, ascending.
  std::vector<NodeId> nodes() const;

  /// All edges as (u, v) with u < v, sorted lexicographically.
  std::vector<Edge> edges() const;

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  friend Graph remove_node(const Graph&, NodeId);
  friend Graph add_node(const Graph&, NodeId);
  friend Graph remove_edge(const Graph&, NodeId, NodeId);
  friend Graph add_edge(const Graph&, NodeId, NodeId);
  friend class GraphEditor;

  std::vector<std::vector<NodeId>> adjacency_;
  std::vector<bool> present_;
  std::size_t node_count_ = 0;
  std::size_t edge_count_ = 0;
};

/// In-place mutation for hot loops (attack campaigns, defenses) that own a
/// private copy. Same preconditions as the free functions.
class GraphEditor {
 public:
  explicit GraphEditor(Graph g) : g_(std::move(g)) {}

  void remove_node(NodeId v);
  void add_node(NodeId v);
  void remove_edge(NodeId u, NodeId v);
  void add_edge(NodeId u, NodeId v);

  const Graph& graph() const noexcept { return g_; }
  Graph release() && { return std::move(g_); }

 private:
  Graph g_;
};

/// Deletes v and its incident edges. The id stays reserved.
Graph remove_node(const Graph& g, NodeId v);
/// Re-inserts a previously removed id as an isolated node.
Graph add_node(const Graph& g, NodeId v);
Graph remove_edge(const Graph& g, NodeId u, NodeId v);
Graph add_edge(const Graph& g, NodeId u, NodeId v);

/// Result of parsing an edge list: the dense graph plus the original integer
/// label of every dense id (first-appearance order).
struct LoadedGraph {
  Graph graph;
  std::vector<std::int64_t> labels;
};

/// Parses whitespace-separated "u v" lines. Lines starting with '#' and
/// blank lines are skipped. Self-loops are dropped, duplicates collapsed.
LoadedGraph load_edge_list(std::istream& in);
LoadedGraph load_edge_list(std::string_view text);
LoadedGraph load_edge_list_file(const std::string& path);

/// One "u v" line per edge, u < v, sorted.
std::string serialize_edge_list(const Graph& g);

/// Parameters for the clustered scale-free (Holme-Kim) generator.
struct GeneratorParams {
  std::size_t n = 300;
  std::size_t m_attach = 2;
  double p_triangle = 0.3;
  std::uint64_t seed = 0;
};

/// Preferential attachment with triangle closing. Each node after the first
/// m_attach gets exactly m_attach distinct neighbours, so the result is
/// connected with m_attach * (n - m_attach) edges.
Graph generate_clustered_scale_free(const GeneratorParams& params);

/// rows x cols 4-neighbour lattice.
Graph generate_grid(std::size_t rows, std::size_t cols);

/// Connected components over present nodes. Each component is sorted;
/// components are ordered by their smallest id.
std::vector<std::vector<NodeId>> connected_components(const Graph& g);

/// |largest component| / reference_n. reference_n = 0 means node_count().
/// Returns 0 for an empty graph.
double largest_connected_component_fraction(const Graph& g,
                                            std::size_t reference_n = 0);

/// Nodes of the largest component (ties go to the component with the
/// smallest id).
std::vector<NodeId> largest_component(const Graph& g);

bool is_connected(const Graph& g);

inline constexpr std::uint32_t kUnreachable =
    std::numeric_limits<std::uint32_t>::max();

/// Hop distances from source, indexed by node id. Unreachable and removed
/// ids hold kUnreachable.
std::vector<std::uint32_t> bfs_distances(const Graph& g, NodeId source);

/// Relabels present nodes to 0..node_count()-1 (ascending id order).
/// `original` maps each new id back to its id in g.
struct CompactGraph {
  Graph graph;
  std::vector<NodeId> original;
};
CompactGraph compact(const Graph& g);

/// Subgraph induced by `nodes`, relabelled in the given order.
Graph induced_subgraph(const Graph& g, std::span<const NodeId> nodes);

/// 64-bit FNV-1a over the normalized serialization (including node count).
std::uint64_t graph_digest(const Graph& g);

}  // namespace netrobust
