#include "netrobust/graph.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <queue>
#include <random>
#include <sstream>
#include <unordered_map>

#include "netrobust/errors.hpp"

namespace netrobust {

Graph::Graph(std::size_t n)
    : adjacency_(n), present_(n, true), node_count_(n) {}

Graph::Graph(std::size_t n, std::span<const Edge> edges) : Graph(n) {
  for (auto [u, v] : edges) {
    if (u >= n || v >= n) {
      throw PreconditionError("edge endpoint out of range");
    }
    if (u == v) continue;
    adjacency_[u].push_back(v);
    adjacency_[v].push_back(u);
  }
  std::size_t half_degree_sum = 0;
  for (auto& nbrs : adjacency_) {
    std::sort(nbrs.begin(), nbrs.end());
    nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
    half_degree_sum += nbrs.size();
  }
  edge_count_ = half_degree_sum / 2;
}

bool Graph::has_edge(NodeId u, NodeId v) const {
  if (!contains(u) || !contains(v)) return false;
  const auto& nbrs = adjacency_[u];
  return std::binary_search(nbrs.begin(), nbrs.end(), v);
}

std::size_t Graph::max_degree() const {
  std::size_t best = 0;
  for (const auto& nbrs : adjacency_) best = std::max(best, nbrs.size());
  return best;
}

std::vector<NodeId> Graph::nodes() const {
  std::vector<NodeId> out;
  out.reserve(node_count_);
  for (NodeId v = 0; v < present_.size(); ++v) {
    if (present_[v]) out.push_back(v);
  }
  return out;
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count_);
  for (NodeId u = 0; u < adjacency_.size(); ++u) {
    for (NodeId v : adjacency_[u]) {
      if (u < v) out.emplace_back(u, v);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Mutation

namespace {

void require_node(const Graph& g, NodeId v) {
  if (!g.contains(v)) {
    throw PreconditionError("node " + std::to_string(v) + " does not exist");
  }
}

void erase_sorted(std::vector<NodeId>& nbrs, NodeId v) {
  auto it = std::lower_bound(nbrs.begin(), nbrs.end(), v);
  if (it != nbrs.end() && *it == v) nbrs.erase(it);
}

void insert_sorted(std::vector<NodeId>& nbrs, NodeId v) {
  nbrs.insert(std::lower_bound(nbrs.begin(), nbrs.end(), v), v);
}

}  // namespace

void GraphEditor::remove_node(NodeId v) {
  require_node(g_, v);
  for (NodeId u : g_.adjacency_[v]) erase_sorted(g_.adjacency_[u], v);
  g_.edge_count_ -= g_.adjacency_[v].size();
  g_.adjacency_[v].clear();
  g_.present_[v] = false;
  --g_.node_count_;
}

void GraphEditor::add_node(NodeId v) {
  if (v >= g_.id_bound()) {
    throw PreconditionError("node id " + std::to_string(v) +
                            " outside the graph's id space");
  }
  if (g_.present_[v]) {
    throw PreconditionError("node " + std::to_string(v) + " already exists");
  }
  g_.present_[v] = true;
  ++g_.node_count_;
}

void GraphEditor::remove_edge(NodeId u, NodeId v) {
  if (!g_.has_edge(u, v)) {
    throw PreconditionError("edge (" + std::to_string(u) + ", " +
                            std::to_string(v) + ") does not exist");
  }
  erase_sorted(g_.adjacency_[u], v);
  erase_sorted(g_.adjacency_[v], u);
  --g_.edge_count_;
}

void GraphEditor::add_edge(NodeId u, NodeId v) {
  require_node(g_, u);
  require_node(g_, v);
  if (u == v) throw PreconditionError("self-loops are not allowed");
  if (g_.has_edge(u, v)) {
    throw PreconditionError("edge (" + std::to_string(u) + ", " +
                            std::to_string(v) + ") already exists");
  }
  insert_sorted(g_.adjacency_[u], v);
  insert_sorted(g_.adjacency_[v], u);
  ++g_.edge_count_;
}

Graph remove_node(const Graph& g, NodeId v) {
  GraphEditor ed(g);
  ed.remove_node(v);
  return std::move(ed).release();
}

Graph add_node(const Graph& g, NodeId v) {
  GraphEditor ed(g);
  ed.add_node(v);
  return std::move(ed).release();
}

Graph remove_edge(const Graph& g, NodeId u, NodeId v) {
  GraphEditor ed(g);
  ed.remove_edge(u, v);
  return std::move(ed).release();
}

Graph add_edge(const Graph& g, NodeId u, NodeId v) {
  GraphEditor ed(g);
  ed.add_edge(u, v);
  return std::move(ed).release();
}

// ---------------------------------------------------------------------------
// Edge-list I/O

namespace {

bool parse_label(std::string_view token, std::int64_t& out) {
  const char* first = token.data();
  const char* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc{} && ptr == last;
}

}  // namespace

LoadedGraph load_edge_list(std::istream& in) {
  std::unordered_map<std::int64_t, NodeId> index;
  std::vector<std::int64_t> labels;
  std::vector<Edge> edges;

  auto intern = [&](std::int64_t label) {
    auto [it, inserted] = index.try_emplace(label, static_cast<NodeId>(labels.size()));
    if (inserted) labels.push_back(label);
    return it->second;
  };

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view rest(line);
    std::vector<std::string_view> tokens;
    while (!rest.empty()) {
      auto start = rest.find_first_not_of(" \t\r");
      if (start == std::string_view::npos) break;
      rest.remove_prefix(start);
      auto end = rest.find_first_of(" \t\r");
      tokens.push_back(rest.substr(0, end));
      if (end == std::string_view::npos) break;
      rest.remove_prefix(end);
    }
    if (tokens.empty() || tokens.front().front() == '#') continue;
    if (tokens.size() != 2) {
      throw ParseError(line_no, "expected two node ids, got " +
                                    std::to_string(tokens.size()) + " tokens");
    }
    std::int64_t a = 0;
    std::int64_t b = 0;
    if (!parse_label(tokens[0], a) || !parse_label(tokens[1], b)) {
      throw ParseError(line_no, "node ids must be integers");
    }
    NodeId u = intern(a);
    NodeId v = intern(b);
    if (u != v) edges.emplace_back(u, v);
  }
  if (labels.empty()) throw ParseError(0, "empty edge list");
  return {Graph(labels.size(), edges), std::move(labels)};
}

LoadedGraph load_edge_list(std::string_view text) {
  std::istringstream in{std::string(text)};
  return load_edge_list(in);
}

LoadedGraph load_edge_list_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return load_edge_list(in);
}

std::string serialize_edge_list(const Graph& g) {
  std::string out;
  for (auto [u, v] : g.edges()) {
    out += std::to_string(u);
    out += ' ';
    out += std::to_string(v);
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// Generators

Graph generate_clustered_scale_free(const GeneratorParams& params) {
  const std::size_t n = params.n;
  const std::size_t m = params.m_attach;
  if (m < 1) throw ParameterError("m_attach must be >= 1");
  if (n < m + 1) throw ParameterError("n must be at least m_attach + 1");
  if (!(params.p_triangle >= 0.0 && params.p_triangle <= 1.0)) {
    throw ParameterError("p_triangle must lie in [0, 1]");
  }

  std::mt19937_64 rng(params.seed);
  std::uniform_real_distribution<double> coin(0.0, 1.0);

  std::vector<std::vector<NodeId>> adj(n);
  std::vector<Edge> edges;
  edges.reserve(m * (n - m));

  // Degree-weighted urn; the seed nodes appear once each.
  std::vector<NodeId> urn;
  for (NodeId v = 0; v < m; ++v) urn.push_back(v);

  std::vector<NodeId> chosen;
  for (auto source = static_cast<NodeId>(m); source < n; ++source) {
    chosen.clear();
    auto is_chosen = [&](NodeId v) {
      return std::find(chosen.begin(), chosen.end(), v) != chosen.end();
    };
    auto connect = [&](NodeId v) {
      chosen.push_back(v);
      adj[source].push_back(v);
      adj[v].push_back(source);
      edges.emplace_back(source, v);
    };
    auto preferential = [&]() {
      std::uniform_int_distribution<std::size_t> pick(0, urn.size() - 1);
      for (;;) {
        NodeId v = urn[pick(rng)];
        if (!is_chosen(v)) return v;
      }
    };

    NodeId target = preferential();
    connect(target);
    while (chosen.size() < m) {
      if (coin(rng) < params.p_triangle) {
        std::vector<NodeId> candidates;
        for (NodeId w : adj[target]) {
          if (w != source && !is_chosen(w)) candidates.push_back(w);
        }
        if (!candidates.empty()) {
          std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
          connect(candidates[pick(rng)]);
          continue;
        }
      }
      target = preferential();
      connect(target);
    }
    for (NodeId v : chosen) urn.push_back(v);
    for (std::size_t i = 0; i < m; ++i) urn.push_back(source);
  }
  return Graph(n, edges);
}

Graph generate_grid(std::size_t rows, std::size_t cols) {
  if (rows == 0 || cols == 0) throw ParameterError("grid dimensions must be positive");
  std::vector<Edge> edges;
  auto id = [cols](std::size_t r, std::size_t c) {
    return static_cast<NodeId>(r * cols + c);
  };
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      if (c + 1 < cols) edges.emplace_back(id(r, c), id(r, c + 1));
      if (r + 1 < rows) edges.emplace_back(id(r, c), id(r + 1, c));
    }
  }
  return Graph(rows * cols, edges);
}

// ---------------------------------------------------------------------------
// Traversal

std::vector<std::vector<NodeId>> connected_components(const Graph& g) {
  std::vector<std::vector<NodeId>> components;
  std::vector<bool> seen(g.id_bound(), false);
  std::vector<NodeId> stack;
  for (NodeId s : g.nodes()) {
    if (seen[s]) continue;
    std::vector<NodeId> comp;
    seen[s] = true;
    stack.push_back(s);
    while (!stack.empty()) {
      NodeId v = stack.back();
      stack.pop_back();
      comp.push_back(v);
      for (NodeId w : g.neighbors(v)) {
        if (!seen[w]) {
          seen[w] = true;
          stack.push_back(w);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    components.push_back(std::move(comp));
  }
  return components;
}

std::vector<NodeId> largest_component(const Graph& g) {
  auto comps = connected_components(g);
  std::vector<NodeId> best;
  for (auto& c : comps) {
    if (c.size() > best.size()) best = std::move(c);
  }
  return best;
}

double largest_connected_component_fraction(const Graph& g, std::size_t reference_n) {
  const std::size_t denom = reference_n == 0 ? g.node_count() : reference_n;
  if (denom == 0) return 0.0;
  return static_cast<double>(largest_component(g).size()) / static_cast<double>(denom);
}

bool is_connected(const Graph& g) {
  return g.node_count() > 0 && largest_component(g).size() == g.node_count();
}

std::vector<std::uint32_t> bfs_distances(const Graph& g, NodeId source) {
  if (!g.contains(source)) {
    throw PreconditionError("source node " + std::to_string(source) + " does not exist");
  }
  std::vector<std::uint32_t> dist(g.id_bound(), kUnreachable);
  std::queue<NodeId> queue;
  dist[source] = 0;
  queue.push(source);
  while (!queue.empty()) {
    NodeId v = queue.front();
    queue.pop();
    for (NodeId w : g.neighbors(v)) {
      if (dist[w] == kUnreachable) {
        dist[w] = dist[v] + 1;
        queue.push(w);
      }
    }
  }
  return dist;
}

CompactGraph compact(const Graph& g) {
  CompactGraph out;
  out.original = g.nodes();
  if (g.dense()) {
    out.graph = g;
    return out;
  }
  out.graph = induced_subgraph(g, out.original);
  return out;
}

Graph induced_subgraph(const Graph& g, std::span<const NodeId> nodes) {
  std::vector<NodeId> position(g.id_bound(), kUnreachable);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    position[nodes[i]] = static_cast<NodeId>(i);
  }
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (NodeId w : g.neighbors(nodes[i])) {
      NodeId j = position[w];
      if (j != kUnreachable && i < j) edges.emplace_back(static_cast<NodeId>(i), j);
    }
  }
  return Graph(nodes.size(), edges);
}

std::uint64_t graph_digest(const Graph& g) {
  std::uint64_t hash = 14695981039346656037ULL;
  auto mix = [&hash](std::string_view bytes) {
    for (unsigned char c : bytes) {
      hash ^= c;
      hash *= 1099511628211ULL;
    }
  };
  mix("n=" + std::to_string(g.node_count()) + "\n");
  mix(serialize_edge_list(g));
  return hash;
}

}  // namespace netrobust
