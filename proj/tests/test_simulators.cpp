#include <cmath>

#include "doctest.h"
#include "netrobust/errors.hpp"
#include "netrobust/measures.hpp"
#include "netrobust/simulators.hpp"
#include "oracles.hpp"

using namespace netrobust;

TEST_CASE("effective strength") {
  CHECK(effective_strength(oracle::complete(5), 0.25, 1.0) == doctest::Approx(1.0));
  CHECK(effective_strength(oracle::complete(5), 0.0, 0.3) == 0.0);
  CHECK_THROWS_AS(effective_strength(oracle::complete(5), 0.1, 0.0), DomainError);
}

TEST_CASE("sis without infection dies out") {
  auto g = generate_clustered_scale_free({100, 2, 0.3, 1});
  SisConfig cfg;
  cfg.beta = 0.0;
  cfg.delta = 0.2;
  cfg.steps = 200;
  cfg.seed = 3;
  auto t = run_sis(g, cfg);
  CHECK(t.counts.size() == 201);
  for (std::size_t i = 1; i < t.counts.size(); ++i) CHECK(t.counts[i].infected <= t.counts[i - 1].infected);
  CHECK(t.died_out());
  CHECK(t.strength == 0.0);

  cfg.delta = 1.0;
  cfg.initially_infected = std::vector<NodeId>{7};
  cfg.steps = 5;
  auto one = run_sis(g, cfg);
  std::vector<std::size_t> infected;
  for (const auto& c : one.counts) infected.push_back(c.infected);
  CHECK(infected == std::vector<std::size_t>{1, 0, 0, 0, 0, 0});
}

TEST_CASE("epidemic conservation") {
  auto g = generate_clustered_scale_free({150, 2, 0.3, 2});
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    SisConfig cfg;
    cfg.beta = 0.08;
    cfg.delta = 0.1;
    cfg.steps = 300;
    cfg.seed = seed;
    cfg.monitored = {0, 1, 2};
    auto sis = run_sis(g, cfg);
    CHECK(sis.population == 147);
    for (const auto& c : sis.counts) {
      CHECK(c.susceptible + c.infected == 147);
      CHECK(c.recovered == 0);
    }

    auto sir = run_sir(g, cfg);
    std::size_t touched = 0;
    for (const auto& c : sir.counts) {
      CHECK(c.susceptible + c.infected + c.recovered == 147);
      CHECK(c.infected + c.recovered >= touched);
      touched = c.infected + c.recovered;
    }
    CHECK(sir.counts.size() <= 301);
    if (sir.counts.size() < 301) CHECK(sir.died_out());
  }
}

TEST_CASE("sir absorbs") {
  auto g = generate_clustered_scale_free({80, 2, 0.3, 5});
  SirConfig cfg;
  cfg.beta = 1.0;
  cfg.delta = 1.0;
  cfg.steps = 1000;
  cfg.initially_infected = std::vector<NodeId>{10};
  cfg.seed = 1;
  auto t = run_sir(g, cfg);
  CHECK(t.died_out());
  CHECK(t.counts.back().recovered == 80);
  CHECK(t.counts.back().susceptible == 0);

  // A disconnected piece is never reached.
  Graph split(6, std::vector<Edge>{{0, 1}, {1, 2}, {3, 4}, {4, 5}});
  cfg.initially_infected = std::vector<NodeId>{0};
  auto s = run_sir(split, cfg);
  CHECK(s.counts.back().recovered == 3);
  CHECK(s.counts.back().susceptible == 3);
}

TEST_CASE("sis validation and determinism") {
  auto g = oracle::cycle(30);
  SisConfig cfg;
  cfg.beta = 1.5;
  CHECK_THROWS_AS(run_sis(g, cfg), ParameterError);
  cfg.beta = 0.1;
  cfg.delta = 0.0;
  CHECK_THROWS_AS(run_sis(g, cfg), ParameterError);
  cfg.delta = 0.1;
  cfg.initially_infected = 0.0;
  CHECK_THROWS_AS(run_sis(g, cfg), ParameterError);
  cfg.initially_infected = std::vector<NodeId>{4};
  cfg.monitored = {4};
  CHECK_THROWS_AS(run_sis(g, cfg), PreconditionError);

  cfg.monitored.clear();
  cfg.initially_infected = 0.2;
  cfg.seed = 77;
  cfg.beta = 0.4;
  auto a = run_sis(g, cfg);
  auto b = run_sis(g, cfg);
  CHECK(a.counts.size() == b.counts.size());
  for (std::size_t i = 0; i < a.counts.size(); ++i) CHECK(a.counts[i].infected == b.counts[i].infected);
  CHECK(a.counts[0].infected == 6);
}

TEST_CASE("cascade capacities") {
  auto caps = cascade_capacities(oracle::star(4));
  CHECK(caps[0] == doctest::Approx(1.0));
  for (NodeId v = 1; v <= 4; ++v) CHECK(caps[v] == doctest::Approx(0.01));
  auto flat = cascade_capacities(oracle::cycle(5));
  for (double c : flat) CHECK(c == 1.0);
}

TEST_CASE("cascade examples") {
  auto g = generate_grid(10, 10);
  CascadeConfig cfg;
  cfg.seed = 4;
  auto quiet = run_cascade(g, cfg);
  CHECK(quiet.size() == 1);
  CHECK(quiet.back().failed.empty());

  cfg.attacked = {44, 45};
  cfg.r = 1.0;
  cfg.l_max = 1e-9;
  auto contained = run_cascade(g, cfg);
  CHECK(contained.back().failed == std::vector<NodeId>{44, 45});

  cfg.l_max = 0.9;
  cfg.r = 0.0;
  auto states = run_cascade(g, cfg);
  CHECK(states[0].failed == std::vector<NodeId>{44, 45});
  for (std::size_t i = 1; i < states.size(); ++i) {
    CHECK(states[i].step == i);
    CHECK(states[i].failed.size() >= states[i - 1].failed.size());
  }
  const auto& last = states.back();
  std::vector<bool> down(100, false);
  for (NodeId v : last.failed) {
    down[v] = true;
    CHECK(last.load[v] == 0.0);
  }
  for (NodeId v = 0; v < 100; ++v)
    if (!down[v]) CHECK(last.load[v] <= last.capacity[v] * (1.0 + cfg.r) + 1e-12);

  auto again = run_cascade(g, cfg);
  REQUIRE(again.size() == states.size());
  for (std::size_t i = 0; i < states.size(); ++i) {
    CHECK(again[i].failed == states[i].failed);
    CHECK(again[i].load == states[i].load);
  }

  cfg.r = 1.5;
  CHECK_THROWS_AS(run_cascade(g, cfg), ParameterError);
  cfg.r = 0.0;
  cfg.l_max = 0.0;
  CHECK_THROWS_AS(run_cascade(g, cfg), ParameterError);
}

TEST_CASE("defended nodes hold longer") {
  auto g = generate_grid(12, 12);
  CascadeConfig cfg;
  cfg.attacked = {65, 66, 77, 78};
  cfg.l_max = 0.9;
  std::size_t plain = 0, guarded = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    cfg.seed = seed;
    cfg.defended.clear();
    plain += run_cascade(g, cfg).back().failed.size();
    for (NodeId v = 0; v < 144; ++v) cfg.defended.push_back(v);
    guarded += run_cascade(g, cfg).back().failed.size();
  }
  CHECK(guarded <= plain);
}

TEST_CASE("sweeps") {
  auto g = generate_grid(8, 8);
  SweepGrid grid;
  grid.kind = SweepKind::cascade_r;
  grid.values = {0.0, 0.5, 1.0};
  grid.seeds = {1, 2, 3, 4};
  grid.cascade.attacked = {27, 28};
  auto rows = sweep(g, grid);
  REQUIRE(rows.size() == 12);
  CHECK(rows[0].value == 0.0);
  CHECK(rows[0].seed == 1);
  CHECK(rows[5].value == 0.5);
  CHECK(rows[5].seed == 2);

  grid.jobs = 3;
  auto parallel = sweep(g, grid);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(parallel[i].final_fraction == rows[i].final_fraction);
    CHECK(parallel[i].steps == rows[i].steps);
  }

  SweepGrid epi;
  epi.kind = SweepKind::sis;
  epi.values = {0.5, 2.0};
  epi.seeds = {1, 2};
  epi.epidemic.delta = 0.2;
  epi.epidemic.steps = 50;
  auto erows = sweep(g, epi);
  CHECK(erows.size() == 4);
  for (const auto& r : erows) CHECK(r.steps == 50);

  epi.values = {1000.0};
  CHECK_THROWS_AS(sweep(g, epi), ParameterError);
  epi.values.clear();
  CHECK_THROWS_AS(sweep(g, epi), ParameterError);
  CHECK(sweep_parameter_name(SweepKind::cascade_lmax) == "l_max");
}

TEST_CASE("cascade failures grow with initial load") {
  auto g = generate_grid(15, 20);
  SweepGrid grid;
  grid.kind = SweepKind::cascade_lmax;
  grid.values = {0.2, 0.4, 0.6, 0.8, 1.0};
  for (std::uint64_t s = 0; s < 20; ++s) grid.seeds.push_back(s);
  grid.cascade.attacked = {142, 143, 157, 158};
  auto rows = sweep(g, grid);
  std::vector<double> mean(grid.values.size(), 0.0);
  for (std::size_t i = 0; i < rows.size(); ++i) mean[i / grid.seeds.size()] += rows[i].final_fraction / 20.0;
  for (std::size_t i = 1; i < mean.size(); ++i) CHECK(mean[i] >= mean[i - 1]);
  CHECK(mean.back() > mean.front());
}
