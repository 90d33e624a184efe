#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "doctest.h"
#include "netrobust/defenses.hpp"
#include "netrobust/errors.hpp"
#include "oracles.hpp"

using namespace netrobust;

namespace {

constexpr DefenseKind kHeuristics[] = {
    DefenseKind::random_addition,
    DefenseKind::preferential_addition,
    DefenseKind::random_edge_rewiring,
    DefenseKind::random_neighbor_rewiring,
    DefenseKind::preferential_random_edge_rewiring,
};

bool is_rewiring(DefenseKind k) {
  return k != DefenseKind::random_addition && k != DefenseKind::preferential_addition;
}

std::vector<double> perron(const Graph& g) {
  auto r = leading_eigenpair(g);
  std::vector<double> u(g.id_bound());
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = (*r.eigenvectors)(static_cast<Eigen::Index>(i), 0);
  return u;
}

}  // namespace

TEST_CASE("defense names round trip") {
  for (auto k : kHeuristics) CHECK(parse_defense_kind(defense_name(k)) == k);
  CHECK(parse_defense_kind("netshield") == DefenseKind::netshield);
  CHECK_FALSE(parse_defense_kind("shield"));
}

TEST_CASE("preferential addition closes the path") {
  auto r = apply_heuristic_defense(oracle::path(3), {DefenseKind::preferential_addition, 1, 0});
  CHECK(r.graph == oracle::complete(3));
  REQUIRE(r.steps.size() == 1);
  CHECK(format_action(r.steps[0][0]) == "+0-2");
}

TEST_CASE("preferential rewiring on a star moves the leaf end") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto r = apply_heuristic_defense(oracle::star(4), {DefenseKind::preferential_random_edge_rewiring, 1, seed});
    REQUIRE(r.steps[0].size() == 2);
    const auto cut = r.steps[0][0];
    const auto added = r.steps[0][1];
    CHECK(cut.type == DefenseAction::Type::remove);
    CHECK(cut.edge.first == 0);
    CHECK(added.type == DefenseAction::Type::add);
    // The freed leaf joins another leaf, never the hub.
    CHECK(added.edge.first != 0);
    const NodeId leaf = cut.edge.second;
    CHECK((added.edge.first == leaf || added.edge.second == leaf));
    CHECK(r.graph.degree(0) == 3);
  }
}

TEST_CASE("heuristic defense invariants") {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    auto g = generate_clustered_scale_free({60, 2, 0.3, seed});
    for (auto kind : kHeuristics) {
      const std::size_t budget = 12;
      auto r = apply_heuristic_defense(g, {kind, budget, seed});
      CHECK(r.graph.node_count() == g.node_count());
      CHECK(r.steps.size() == budget);
      if (is_rewiring(kind)) {
        CHECK(r.graph.edge_count() == g.edge_count());
        auto before = g.edges(), after = r.graph.edges();
        std::vector<Edge> diff;
        std::set_symmetric_difference(before.begin(), before.end(), after.begin(), after.end(),
                                      std::back_inserter(diff));
        CHECK(diff.size() <= 2 * budget);
      } else {
        CHECK(r.graph.edge_count() == g.edge_count() + budget);
      }
      for (NodeId v : r.graph.nodes()) {
        auto n = r.graph.neighbors(v);
        CHECK(std::adjacent_find(n.begin(), n.end()) == n.end());
        CHECK_FALSE(std::binary_search(n.begin(), n.end(), v));
      }
      // Same seed, same result.
      CHECK(apply_heuristic_defense(g, {kind, budget, seed}).graph == r.graph);
    }
  }
}

TEST_CASE("defense failures") {
  CHECK_THROWS_AS(apply_heuristic_defense(oracle::complete(4), {DefenseKind::random_addition, 1, 0}), FeasibilityError);
  CHECK_THROWS_AS(apply_heuristic_defense(oracle::complete(4), {DefenseKind::preferential_addition, 1, 0}), FeasibilityError);
  CHECK_THROWS_AS(apply_heuristic_defense(Graph(4), {DefenseKind::random_edge_rewiring, 1, 0}), FeasibilityError);
  CHECK_THROWS_AS(apply_heuristic_defense(oracle::path(4), {DefenseKind::netshield, 1, 0}), ParameterError);
  DefenseStrategy zero{DefenseKind::random_addition, 1, 0, 0};
  CHECK_THROWS_AS(apply_heuristic_defense(oracle::path(4), zero), ParameterError);
}

TEST_CASE("recovery curves") {
  auto g = generate_clustered_scale_free({80, 2, 0.3, 4});
  auto attacked = run_attack(g, {TargetKind::node, Selector::recalculated_betweenness, 0}, 15).attacked;

  auto trace = run_defense(attacked, {DefenseKind::preferential_addition, 20, 0}, MeasureId::lcc);
  CHECK(trace.curve.size() == 21);
  CHECK(trace.actions.size() == 20);
  for (std::size_t i = 1; i < trace.curve.size(); ++i) CHECK(trace.curve[i].value >= trace.curve[i - 1].value);

  auto none = run_defense(attacked, {DefenseKind::random_addition, 0, 0});
  REQUIRE(none.curve.size() == 1);
  CHECK(none.curve[0].value == doctest::Approx(largest_connected_component_fraction(attacked)));

  auto a = run_defense(attacked, {DefenseKind::random_neighbor_rewiring, 10, 5});
  auto b = run_defense(attacked, {DefenseKind::random_neighbor_rewiring, 10, 5});
  CHECK(a.actions == b.actions);
  for (std::size_t i = 0; i < a.curve.size(); ++i) CHECK(a.curve[i].value == b.curve[i].value);
}

TEST_CASE("shield value examples") {
  auto g = oracle::random_connected(9, 0.3, 2);
  auto spec = leading_eigenpair(g);
  const double lambda = spec.eigenvalues[0];
  auto u = perron(g);
  for (NodeId i = 0; i < 9; ++i) {
    std::vector<NodeId> s{i};
    CHECK(shield_value(g, s, spec) == doctest::Approx(2.0 * lambda * u[i] * u[i]));
  }
  for (auto [i, j] : std::vector<Edge>{{0, 1}, {2, 5}, {3, 8}, {4, 6}}) {
    std::vector<NodeId> s{i, j};
    std::vector<NodeId> a{i}, b{j};
    if (!g.has_edge(i, j))
      CHECK(shield_value(g, s, spec) == doctest::Approx(shield_value(g, a, spec) + shield_value(g, b, spec)));
    CHECK(shield_value(g, s, spec) == doctest::Approx(oracle::shield_value(g, s, lambda, u)));
  }

  auto p2 = oracle::path(2);
  std::vector<NodeId> both{0, 1};
  CHECK(shield_value(p2, both, leading_eigenpair(p2)) == doctest::Approx(1.0));
}

TEST_CASE("netshield selection") {
  auto star = netshield_select(oracle::star(5), 1);
  CHECK(star.nodes == std::vector<NodeId>{0});

  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto g = oracle::random_connected(10, 0.3, seed);
    auto [lambda, u] = oracle::leading_pair(g);
    NodeId best = 0;
    for (NodeId i = 1; i < 10; ++i)
      if (u[i] * u[i] > u[best] * u[best]) best = i;
    CHECK(netshield_select(g, 1).nodes == std::vector<NodeId>{best});

    for (std::size_t k = 1; k <= 3; ++k) {
      auto set = netshield_select(g, k);
      CHECK(set.nodes.size() == k);
      CHECK(set.shield_value >= 0.0);
      // Sv is monotone submodular under a fixed spectrum.
      CHECK(set.shield_value >= (1.0 - std::exp(-1.0)) * oracle::exhaustive_shield(g, k, lambda, u) - 1e-9);
      CHECK(set.eigendrop > 0.0);
    }
  }

  CHECK_THROWS_AS(netshield_select(oracle::path(3), 0), ParameterError);
  CHECK_THROWS_AS(netshield_select(oracle::path(3), 4), ParameterError);
  CHECK_THROWS_AS(netshield_select(Graph(3, std::vector<Edge>{{0, 1}}), 1), DomainError);
}

TEST_CASE("netshield avoids adjacent pairs") {
  // Two K5 cliques joined by the edges 0-5 and 1-6. The four bridge ends
  // score alike; the penalty keeps the pair off a shared edge.
  std::vector<Edge> e{{0, 5}, {1, 6}};
  for (NodeId u = 0; u < 5; ++u)
    for (NodeId v = u + 1; v < 5; ++v) {
      e.emplace_back(u, v);
      e.emplace_back(u + 5, v + 5);
    }
  Graph g(10, e);
  auto [lambda, u] = oracle::leading_pair(g);
  auto set = netshield_select(g, 2);
  CHECK_FALSE(g.has_edge(set.nodes[0], set.nodes[1]));
  CHECK((set.nodes[0] < 5) != (set.nodes[1] < 5));
  CHECK(set.shield_value == doctest::Approx(oracle::exhaustive_shield(g, 2, lambda, u)));
}

TEST_CASE("greedy netshield can trail the exhaustive optimum") {
  // The k=1 choice (node 3) caps every pair containing it at 1.961 while
  // {4, 6} reaches 2.247, so any nested greedy stays below 90% here.
  Graph g(7, std::vector<Edge>{{0, 4}, {1, 3}, {1, 6}, {2, 4}, {2, 6}, {3, 4}, {3, 6}, {4, 5}});
  auto [lambda, u] = oracle::leading_pair(g);
  CHECK(netshield_select(g, 1).nodes == std::vector<NodeId>{3});
  auto pair = netshield_select(g, 2);
  CHECK(pair.nodes == std::vector<NodeId>{3, 6});
  const double best = oracle::exhaustive_shield(g, 2, lambda, u);
  CHECK(oracle::shield_value(g, {4, 6}, lambda, u) == doctest::Approx(best));
  CHECK(pair.shield_value / best == doctest::Approx(0.8726).epsilon(1e-3));
}

namespace {

std::map<DefenseKind, double> recovery_after_rb_attack() {
  std::map<DefenseKind, double> final_lcc;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto g = generate_clustered_scale_free({200, 3, 0.3, seed});
    auto attacked = run_attack(g, {TargetKind::node, Selector::recalculated_betweenness, seed}, 30).attacked;
    MeasureOptions opt;
    opt.reference_n = 200;
    for (auto kind : kHeuristics) final_lcc[kind] += run_defense(attacked, {kind, 30, seed}, MeasureId::lcc, opt).curve.back().value / 10.0;
  }
  return final_lcc;
}

}  // namespace

TEST_CASE("addition beats rewiring after an attack") {
  auto lcc = recovery_after_rb_attack();
  CHECK(lcc[DefenseKind::preferential_addition] >= lcc[DefenseKind::random_addition]);
  for (auto kind : {DefenseKind::random_edge_rewiring, DefenseKind::random_neighbor_rewiring,
                    DefenseKind::preferential_random_edge_rewiring})
    CHECK(lcc[DefenseKind::random_addition] >= lcc[kind]);
}

// Not reproduced on these ensembles: uniform-edge rewiring edges out
// node-first rewiring (see the decisions ledger). Kept visible, not fatal.
TEST_CASE("neighbor rewiring at least matches edge rewiring" * doctest::may_fail()) {
  auto lcc = recovery_after_rb_attack();
  CHECK(lcc[DefenseKind::random_neighbor_rewiring] >= lcc[DefenseKind::random_edge_rewiring]);
}
