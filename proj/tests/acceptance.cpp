// Runs every acceptance criterion at its stated tolerance and prints one
// PASS/FAIL line each. Exit status is nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "netrobust/attacks.hpp"
#include "netrobust/cli.hpp"
#include "netrobust/defenses.hpp"
#include "netrobust/measures.hpp"
#include "netrobust/simulators.hpp"
#include "oracles.hpp"

using namespace netrobust;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) {
      pass = false;
      detail = what;
    }
  }
};

std::string num(double x) { return cli::format_double(x); }

// n = 200 ensembles shared by the attack and defense ordering criteria.
Graph ensemble_graph(std::uint64_t seed) { return generate_clustered_scale_free({200, 3, 0.3, seed}); }

// ---------------------------------------------------------------------------

Outcome betweenness_oracle() {
  Outcome o;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const std::size_t n = 4 + seed % 9;
    auto g = oracle::random_connected(n, 0.25, 1000 + seed);
    auto want = oracle::brute_force_betweenness(g);
    const double v = average_vertex_betweenness(g);
    const double e = average_edge_betweenness(g);
    o.require(std::abs(v - want.average_vertex) <= 1e-9,
              "vertex mismatch on graph " + std::to_string(seed) + ": " + num(v) + " vs " + num(want.average_vertex));
    o.require(std::abs(e - want.average_edge) <= 1e-9,
              "edge mismatch on graph " + std::to_string(seed) + ": " + num(e) + " vs " + num(want.average_edge));
  }
  if (o.pass) o.detail = "50 graphs, n in [4, 12]";
  return o;
}

Outcome resistance_oracle() {
  Outcome o;
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const std::size_t n = 10 + 2 * seed;
    auto g = oracle::random_connected(n, 3.0 / static_cast<double>(n), 2000 + seed);
    const double err = std::abs(effective_resistance(g) - oracle::effective_resistance(g));
    worst = std::max(worst, err);
    o.require(err <= 1e-6, "graph " + std::to_string(seed) + " off by " + num(err));
  }
  const double tri = effective_resistance(oracle::complete(3));
  o.require(std::abs(tri - 2.0) <= 1e-9, "triangle gave " + num(tri));
  if (o.pass) o.detail = "max abs error " + num(worst) + ", triangle " + num(tri);
  return o;
}

Outcome spanning_tree_oracle() {
  Outcome o;
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const std::size_t n = 6 + seed;
    auto g = oracle::random_connected(n, 0.2, 3000 + seed);
    const double want = oracle::spanning_trees(g);
    const double rel = std::abs(num_spanning_trees(g).value - want) / want;
    worst = std::max(worst, rel);
    o.require(rel <= 1e-6, "graph " + std::to_string(seed) + " relative error " + num(rel));
  }
  o.require(num_spanning_trees(oracle::path(7)).value == 1.0 || std::abs(num_spanning_trees(oracle::path(7)).value - 1.0) < 1e-9,
            "tree count != 1");
  o.require(std::abs(num_spanning_trees(oracle::cycle(3)).value - 3.0) < 1e-9, "C3 count != 3");
  o.require(std::abs(num_spanning_trees(oracle::complete(4)).value - 16.0) < 1e-9, "K4 count != 16");
  if (o.pass) o.detail = "max relative error " + num(worst);
  return o;
}

Outcome approximations_at_full_k() {
  Outcome o;
  const std::pair<MeasureId, MeasureId> pairs[] = {
      {MeasureId::approx_avg_vertex_betweenness, MeasureId::avg_vertex_betweenness},
      {MeasureId::approx_avg_edge_betweenness, MeasureId::avg_edge_betweenness},
      {MeasureId::approx_natural_connectivity, MeasureId::natural_connectivity},
      {MeasureId::approx_spanning_trees, MeasureId::spanning_trees},
      {MeasureId::approx_effective_resistance, MeasureId::effective_resistance},
  };
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const std::size_t n = 20 + 8 * seed;
    auto g = oracle::random_connected(n, 4.0 / static_cast<double>(n), 4000 + seed);
    for (auto [approx, exact] : pairs) {
      MeasureOptions opt;
      opt.k = n;
      opt.seed = seed;
      const double a = evaluate(g, approx, opt).value;
      const double e = evaluate(g, exact).value;
      // Spanning-tree counts reach 1e20 and beyond; compare relative to scale.
      const double err = std::abs(a - e) / std::max(1.0, std::abs(e));
      worst = std::max(worst, err);
      o.require(err <= 1e-9, std::string(measure_info(approx).name) + " off by " + num(err) +
                                 " on graph " + std::to_string(seed));
    }
  }
  if (o.pass) o.detail = "max scaled error " + num(worst);
  return o;
}

Outcome sampled_betweenness_accuracy() {
  Outcome o;
  auto g = generate_clustered_scale_free({300, 2, 0.3, 7});
  const double exact = average_vertex_betweenness(g);
  std::map<std::size_t, double> mean_err;
  for (std::size_t k : {10, 30, 150}) {
    double sum = 0.0;
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
      sum += std::abs(approx_average_vertex_betweenness(g, k, seed).value - exact) / exact;
    }
    mean_err[k] = sum / 30.0;
  }
  o.require(mean_err[30] <= 0.05, "k=30 mean relative error " + num(mean_err[30]));
  o.require(mean_err[150] <= mean_err[10], "k=150 error " + num(mean_err[150]) + " above k=10 error " + num(mean_err[10]));
  if (o.pass) {
    o.detail = "mean relative error k=10 " + num(mean_err[10]) + ", k=30 " + num(mean_err[30]) + ", k=150 " +
               num(mean_err[150]);
  }
  return o;
}

Outcome monotone_under_addition() {
  Outcome o;
  std::mt19937_64 rng(6);
  std::size_t violations = 0;
  std::string first;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 5 + rng() % 36;
    auto g = oracle::random_connected(n, 2.0 / static_cast<double>(n), 6000 + trial);
    std::vector<Edge> missing;
    for (NodeId u = 0; u < n; ++u)
      for (NodeId v = u + 1; v < n; ++v)
        if (!g.has_edge(u, v)) missing.emplace_back(u, v);
    if (missing.empty()) continue;
    auto [u, v] = missing[rng() % missing.size()];
    auto h = add_edge(g, u, v);
    auto note = [&](bool ok, const char* what) {
      if (ok) return;
      ++violations;
      if (first.empty()) first = std::string(what) + " in trial " + std::to_string(trial);
    };
    note(effective_resistance(h) < effective_resistance(g), "effective resistance did not drop");
    note(algebraic_connectivity(h) >= algebraic_connectivity(g) - 1e-9, "algebraic connectivity fell");
    note(natural_connectivity(h) >= natural_connectivity(g) - 1e-12, "natural connectivity fell");
    note(spectral_radius(h) >= spectral_radius(g) - 1e-12, "spectral radius fell");
    note(num_spanning_trees(h).value >= num_spanning_trees(g).value, "spanning trees fell");
    note(average_distance(h) <= average_distance(g), "average distance rose");
  }
  o.require(violations == 0, std::to_string(violations) + " violations, first: " + first);
  if (o.pass) o.detail = "1000 trials, 0 violations";
  return o;
}

Outcome attack_ordering() {
  Outcome o;
  const Selector selectors[] = {Selector::random, Selector::initial_degree, Selector::recalculated_degree,
                                Selector::initial_betweenness, Selector::recalculated_betweenness};
  std::map<Selector, double> auc;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto g = ensemble_graph(seed);
    for (Selector s : selectors) {
      auc[s] += area_under_curve(run_attack(g, {TargetKind::node, s, seed}, 40).trace) / 20.0;
    }
  }
  const double rnd = auc[Selector::random], id = auc[Selector::initial_degree],
               rd = auc[Selector::recalculated_degree], ib = auc[Selector::initial_betweenness],
               rb = auc[Selector::recalculated_betweenness];
  o.require(rb <= ib, "RB " + num(rb) + " > IB " + num(ib));
  o.require(rb <= rd, "RB " + num(rb) + " > RD " + num(rd));
  for (double t : {id, rd, ib, rb}) o.require(rnd >= t, "RND " + num(rnd) + " below a targeted AUC " + num(t));
  if (o.pass) {
    o.detail = "mean AUC rnd " + num(rnd) + ", id " + num(id) + ", rd " + num(rd) + ", ib " + num(ib) + ", rb " + num(rb);
  }
  return o;
}

Outcome defense_ordering() {
  Outcome o;
  const DefenseKind kinds[] = {DefenseKind::random_addition, DefenseKind::preferential_addition,
                               DefenseKind::random_edge_rewiring, DefenseKind::random_neighbor_rewiring,
                               DefenseKind::preferential_random_edge_rewiring};
  std::map<DefenseKind, double> final_lcc;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto g = ensemble_graph(seed);
    auto attacked = run_attack(g, {TargetKind::node, Selector::recalculated_betweenness, seed}, 30).attacked;
    // LCC relative to the intact graph, continuing the attack curve.
    MeasureOptions opt;
    opt.reference_n = g.node_count();
    for (DefenseKind k : kinds) {
      auto trace = run_defense(attacked, {k, 30, seed}, MeasureId::lcc, opt);
      final_lcc[k] += trace.curve.back().value / 10.0;
    }
  }
  const double pref = final_lcc[DefenseKind::preferential_addition];
  const double rnd = final_lcc[DefenseKind::random_addition];
  const double best_rewire = std::max({final_lcc[DefenseKind::random_edge_rewiring],
                                       final_lcc[DefenseKind::random_neighbor_rewiring],
                                       final_lcc[DefenseKind::preferential_random_edge_rewiring]});
  o.require(pref >= rnd, "preferential " + num(pref) + " < random addition " + num(rnd));
  o.require(rnd >= best_rewire, "random addition " + num(rnd) + " < best rewiring " + num(best_rewire));
  if (o.pass) {
    o.detail = "final LCC preferential " + num(pref) + ", random " + num(rnd) + ", rewiring " +
               num(final_lcc[DefenseKind::random_edge_rewiring]) + "/" +
               num(final_lcc[DefenseKind::random_neighbor_rewiring]) + "/" +
               num(final_lcc[DefenseKind::preferential_random_edge_rewiring]);
  }
  return o;
}

Outcome netshield_correctness() {
  Outcome o;
  std::size_t argmax_misses = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto g = oracle::random_connected(8 + seed % 12, 0.3, 9000 + seed);
    auto [lambda, u] = oracle::leading_pair(g);
    NodeId best = 0;
    for (NodeId i = 1; i < g.id_bound(); ++i)
      if (u[i] * u[i] > u[best] * u[best]) best = i;
    if (netshield_select(g, 1).nodes != std::vector<NodeId>{best}) ++argmax_misses;
  }
  o.require(argmax_misses == 0, std::to_string(argmax_misses) + "/20 k=1 picks differ from argmax u1^2");

  std::size_t checked = 0, below = 0, no_drop = 0;
  double worst_ratio = 1.0;
  std::string worst_case;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const std::size_t n = 3 + seed % 8;
    auto g = oracle::random_connected(n, 0.35, 9500 + seed);
    auto [lambda, u] = oracle::leading_pair(g);
    const double lambda_before = spectral_radius(g);
    for (std::size_t k = 1; k <= std::min<std::size_t>(3, n); ++k) {
      auto set = netshield_select(g, k);
      const double best = oracle::exhaustive_shield(g, k, lambda, u);
      const double ratio = set.shield_value / best;
      if (ratio < worst_ratio) {
        worst_ratio = ratio;
        worst_case = "graph " + std::to_string(seed) + " (n=" + std::to_string(n) + ", k=" + std::to_string(k) + ")";
      }
      if (set.shield_value < 0.9 * best - 1e-12) ++below;
      Graph rest = g;
      for (NodeId v : set.nodes) rest = remove_node(rest, v);
      const double after = rest.empty() ? 0.0 : spectral_radius(rest);
      if (!(after < lambda_before)) ++no_drop;
      ++checked;
    }
  }
  o.require(below == 0, std::to_string(below) + "/" + std::to_string(checked) +
                            " greedy sets below 0.9 x exhaustive optimum, worst ratio " + num(worst_ratio) +
                            " on " + worst_case);
  o.require(no_drop == 0, std::to_string(no_drop) + " removals left lambda1 unchanged");
  const std::string summary = "argmax " + std::to_string(20 - argmax_misses) + "/20, eigendrop " +
                              std::to_string(checked - no_drop) + "/" + std::to_string(checked) +
                              ", ratio >= 0.9 in " + std::to_string(checked - below) + "/" +
                              std::to_string(checked) + " (worst " + num(worst_ratio) + ")";
  o.detail = o.pass ? summary : o.detail + "; " + summary;
  return o;
}

Outcome epidemic_threshold() {
  Outcome o;
  auto g = generate_clustered_scale_free({300, 2, 0.3, 7});
  const double lambda1 = spectral_radius(g);
  const double delta = 0.05;
  auto config = [&](double s, std::uint64_t seed) {
    SisConfig cfg;
    cfg.beta = s * delta / lambda1;
    cfg.delta = delta;
    cfg.steps = 5000;
    cfg.initially_infected = 0.1;
    cfg.seed = seed;
    return cfg;
  };

  std::size_t extinct = 0, endemic = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    if (run_sis(g, config(0.5, seed)).died_out()) ++extinct;
    if (run_sis(g, config(3.0, seed)).tail_mean(500) > 0.01) ++endemic;
  }
  o.require(extinct >= 18, "s=0.5 extinct in " + std::to_string(extinct) + "/20");
  o.require(endemic >= 16, "s=3 endemic in " + std::to_string(endemic) + "/20");

  const auto shield = netshield_select(g, 5).nodes;
  double shielded = 0.0, random = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto cfg = config(3.21, seed);
    cfg.monitored = shield;
    shielded += run_sis(g, cfg).tail_mean(500) / 20.0;

    std::mt19937_64 rng(seed);
    auto nodes = g.nodes();
    std::shuffle(nodes.begin(), nodes.end(), rng);
    cfg.monitored.assign(nodes.begin(), nodes.begin() + 5);
    random += run_sis(g, cfg).tail_mean(500) / 20.0;
  }
  o.require(shielded < random, "netshield mean " + num(shielded) + " >= random mean " + num(random));
  if (o.pass) {
    o.detail = "extinct " + std::to_string(extinct) + "/20 at s=0.5, endemic " + std::to_string(endemic) +
               "/20 at s=3, monitored means netshield " + num(shielded) + " vs random " + num(random);
  }
  return o;
}

Outcome cascade_redundancy() {
  Outcome o;
  auto g = generate_grid(15, 20);
  auto attacked = select_targets(g, {TargetKind::node, Selector::initial_degree, 1}, 4);
  CascadeConfig cfg;
  cfg.l_max = 0.8;
  for (const auto& t : attacked) cfg.attacked.push_back(std::get<NodeId>(t));

  auto mean_failed = [&](double r) {
    cfg.r = r;
    double sum = 0.0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      cfg.seed = seed;
      sum += static_cast<double>(run_cascade(g, cfg).back().failed.size()) / 300.0;
    }
    return sum / 20.0;
  };
  std::vector<double> curve;
  std::string shown;
  for (double r : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    curve.push_back(mean_failed(r));
    shown += (shown.empty() ? "" : ", ") + num(curve.back());
  }
  for (std::size_t i = 1; i < curve.size(); ++i)
    o.require(curve[i] <= curve[i - 1], "failure fraction rose between r grid points: " + shown);
  const double low = mean_failed(0.1), high = mean_failed(0.9);
  o.require(low > high, "r=0.1 " + num(low) + " not above r=0.9 " + num(high));
  if (o.pass) o.detail = "failed fraction over r grid [" + shown + "], r=0.1 " + num(low) + ", r=0.9 " + num(high);
  return o;
}

Outcome cli_determinism() {
  Outcome o;
  const fs::path dir = fs::temp_directory_path() / ("netrobust_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const std::string g = "gen:csf:n=120,m=2,p=0.3,seed=11";
  const std::vector<std::vector<std::string>> commands{
      {"attack", "--strategy", "rnd", "--kind", "node", "--count", "20", "--seed", "3"},
      {"attack", "--strategy", "rb", "--kind", "edge", "--count", "15", "--seed", "3"},
      {"defend", "--strategy", "random_addition", "--budget", "10", "--attack", "rb:20", "--seed", "3"},
      {"defend", "--strategy", "random_neighbor_rewiring", "--budget", "10", "--seed", "3"},
      {"sis", "--strength", "3", "--delta", "0.05", "--steps", "400", "--seed", "3"},
      {"sir", "--strength", "2", "--delta", "0.1", "--steps", "300", "--seed", "3"},
      {"cascade", "--lmax", "0.8", "--r", "0.2", "--attack", "id:4", "--seed", "3"},
      {"sweep", "--model", "cascade", "--param", "r", "--values", "0,0.5,1", "--runs", "3", "--attack", "id:4", "--seed", "3", "--jobs", "2"},
      {"measure", "--id", "approx_avg_vertex_betweenness", "--k", "12", "--seed", "3"},
      {"approx-error", "--id", "natural_connectivity", "--k-grid", "5,15", "--runs", "3", "--seed", "3"},
  };
  auto read = [](const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
  };
  int index = 0;
  for (const auto& base : commands) {
    std::string text[2];
    for (int rep = 0; rep < 2; ++rep) {
      auto args = base;
      const auto out = dir / ("run" + std::to_string(index) + "_" + std::to_string(rep) + ".csv");
      args.insert(args.end(), {"--in", g, "--out", out.string()});
      std::ostringstream sink, err;
      const int code = cli::run(args, sink, err);
      o.require(code == 0, base[0] + " exited " + std::to_string(code) + ": " + err.str());
      text[rep] = read(out);
    }
    o.require(!text[0].empty() && text[0] == text[1], base[0] + " output differs between runs (check " + std::to_string(index) + ")");
    ++index;
  }
  fs::remove_all(dir);
  if (o.pass) o.detail = std::to_string(commands.size()) + " commands byte-identical on re-run";
  return o;
}

Outcome expansion_verdict() {
  Outcome o;
  auto k8 = spectral_scaling(oracle::complete(8));
  auto bar = spectral_scaling(oracle::barbell(6));
  o.require(k8.xi < 1e-2 && k8.good_expansion, "K8 xi " + num(k8.xi) + " not classified as good expansion");
  o.require(bar.xi > k8.xi, "barbell xi " + num(bar.xi) + " not above K8 xi " + num(k8.xi));
  if (o.pass) o.detail = "xi K8 " + num(k8.xi) + ", barbell " + num(bar.xi);
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    double budget_seconds;
    std::function<Outcome()> check;
  };
  const std::vector<Criterion> criteria{
      {"betweenness matches path enumeration", 10, betweenness_oracle},
      {"effective resistance matches pseudoinverse", 10, resistance_oracle},
      {"spanning trees match reduced determinant", 10, spanning_tree_oracle},
      {"approximations exact at k = n", 0, approximations_at_full_k},
      {"sampled betweenness accuracy", 300, sampled_betweenness_accuracy},
      {"monotonicity under edge addition", 120, monotone_under_addition},
      {"attack ordering", 300, attack_ordering},
      {"defense ordering", 300, defense_ordering},
      {"netshield correctness", 60, netshield_correctness},
      {"epidemic threshold", 600, epidemic_threshold},
      {"cascade redundancy direction", 300, cascade_redundancy},
      {"CLI determinism", 0, cli_determinism},
      {"spectral scaling expansion verdict", 0, expansion_verdict},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto& c = criteria[i];
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.budget_seconds > 0 && secs > c.budget_seconds) {
      o.pass = false;
      o.detail += " (took " + num(secs) + " s, budget " + num(c.budget_seconds) + " s)";
    }
    if (!o.pass) ++failures;
    char time_buf[32];
    std::snprintf(time_buf, sizeof time_buf, "%.2f", secs);
    std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << (i + 1) << ". " << c.name << " (" << time_buf << " s): " << o.detail
              << std::endl;
  }
  std::cout << (criteria.size() - static_cast<std::size_t>(failures)) << "/" << criteria.size()
            << " criteria passed" << std::endl;
  return failures == 0 ? 0 : 1;
}
