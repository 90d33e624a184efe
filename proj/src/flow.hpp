#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

namespace netrobust::detail {

/// Dinic max-flow over integer capacities. Small and single-use: build,
/// call max_flow once.
class FlowNetwork {
 public:
  explicit FlowNetwork(std::size_t nodes) : head_(nodes, -1), level_(nodes), cursor_(nodes) {}

  /// Arc u->v with capacity `cap` and its residual twin v->u with `reverse_cap`
  /// (pass cap for an undirected edge).
  void add_arc(std::size_t u, std::size_t v, std::int64_t cap, std::int64_t reverse_cap = 0);

  /// Flow from s to t, stopping early once `limit` is reached.
  std::int64_t max_flow(std::size_t s, std::size_t t,
                        std::int64_t limit = std::numeric_limits<std::int64_t>::max());

 private:
  struct Arc {
    std::size_t to;
    int next;
    std::int64_t cap;
  };

  bool build_levels(std::size_t s, std::size_t t);
  std::int64_t push(std::size_t v, std::size_t t, std::int64_t pushed);

  std::vector<int> head_;
  std::vector<Arc> arcs_;
  std::vector<int> level_;
  std::vector<int> cursor_;
};

}  // namespace netrobust::detail
