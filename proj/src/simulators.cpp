#include "netrobust/simulators.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "netrobust/errors.hpp"
#include "netrobust/measures.hpp"
#include "netrobust/parallel.hpp"

namespace netrobust {

double effective_strength(const Graph& g, double beta, double delta) {
  if (!(delta > 0.0)) throw DomainError("delta must be positive");
  if (g.empty()) throw DomainError("effective strength of an empty graph");
  return spectral_radius(g) * beta / delta;
}

double SimulationTrace::infected_fraction(std::size_t t) const {
  if (population == 0) return 0.0;
  return static_cast<double>(counts.at(t).infected) / static_cast<double>(population);
}

double SimulationTrace::tail_mean(std::size_t tail) const {
  tail = std::clamp<std::size_t>(tail, 1, counts.size());
  double sum = 0.0;
  for (std::size_t t = counts.size() - tail; t < counts.size(); ++t) sum += infected_fraction(t);
  return sum / static_cast<double>(tail);
}

namespace {

enum class Health : std::uint8_t { susceptible, infected, recovered };

void validate(const SisConfig& cfg) {
  if (!(cfg.beta >= 0.0 && cfg.beta <= 1.0)) throw ParameterError("beta must lie in [0, 1]");
  if (!(cfg.delta > 0.0 && cfg.delta <= 1.0)) throw ParameterError("delta must lie in (0, 1]");
  if (const auto* c = std::get_if<double>(&cfg.initially_infected)) {
    if (!(*c > 0.0 && *c <= 1.0)) throw ParameterError("initial fraction must lie in (0, 1]");
  }
}

SimulationTrace simulate(const Graph& g, const SisConfig& cfg, bool sir) {
  validate(cfg);
  GraphEditor editor(g);
  for (NodeId v : cfg.monitored) {
    if (editor.graph().contains(v)) editor.remove_node(v);
  }
  const Graph& h = editor.graph();
  const auto nodes = h.nodes();

  std::mt19937_64 rng(cfg.seed);
  std::vector<Health> state(h.id_bound(), Health::susceptible);
  std::vector<NodeId> infected;
  if (const auto* explicit_set = std::get_if<std::vector<NodeId>>(&cfg.initially_infected)) {
    for (NodeId v : *explicit_set) {
      if (h.contains(v) && state[v] != Health::infected) {
        state[v] = Health::infected;
        infected.push_back(v);
      }
    }
  } else {
    const double c = std::get<double>(cfg.initially_infected);
    auto count = static_cast<std::size_t>(std::lround(c * static_cast<double>(nodes.size())));
    count = std::clamp<std::size_t>(count, 1, nodes.size());
    std::vector<NodeId> pool = nodes;
    for (std::size_t i = 0; i < count && i < pool.size(); ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
      std::swap(pool[i], pool[pick(rng)]);
      state[pool[i]] = Health::infected;
      infected.push_back(pool[i]);
    }
  }
  if (infected.empty()) {
    throw PreconditionError("no infected node remains after removing monitored nodes");
  }
  std::sort(infected.begin(), infected.end());

  SimulationTrace trace;
  trace.sir = sir;
  trace.beta = cfg.beta;
  trace.delta = cfg.delta;
  trace.strength = effective_strength(g, cfg.beta, cfg.delta);
  trace.seed = cfg.seed;
  trace.population = nodes.size();

  SimulationCounts counts;
  counts.infected = infected.size();
  counts.susceptible = nodes.size() - infected.size();
  trace.counts.push_back(counts);

  std::bernoulli_distribution infect(cfg.beta);
  std::bernoulli_distribution heal(cfg.delta);
  std::vector<NodeId> next;
  for (std::size_t t = 1; t <= cfg.steps; ++t) {
    if (infected.empty()) {
      if (sir) break;
      trace.counts.push_back(counts);
      continue;
    }
    // Infection phase; `infected` still holds the pre-step set.
    std::vector<NodeId> fresh;
    for (NodeId v : infected) {
      for (NodeId w : h.neighbors(v)) {
        if (state[w] == Health::susceptible && infect(rng)) {
          state[w] = Health::infected;
          fresh.push_back(w);
        }
      }
    }
    // Healing phase, old infections only.
    next.clear();
    for (NodeId v : infected) {
      if (heal(rng)) {
        state[v] = sir ? Health::recovered : Health::susceptible;
        if (sir) ++counts.recovered;
      } else {
        next.push_back(v);
      }
    }
    next.insert(next.end(), fresh.begin(), fresh.end());
    std::sort(next.begin(), next.end());
    infected.swap(next);
    counts.infected = infected.size();
    counts.susceptible = nodes.size() - counts.infected - counts.recovered;
    trace.counts.push_back(counts);
  }
  return trace;
}

}  // namespace

SimulationTrace run_sis(const Graph& g, const SisConfig& cfg) { return simulate(g, cfg, false); }

SimulationTrace run_sir(const Graph& g, const SirConfig& cfg) { return simulate(g, cfg, true); }

// ---------------------------------------------------------------------------
// Cascades

std::vector<double> cascade_capacities(const Graph& g) {
  std::vector<double> capacity(g.id_bound(), 0.0);
  const auto nodes = g.nodes();
  if (nodes.empty()) return capacity;
  constexpr double kFloor = 0.01;
  const auto b = g.node_count() >= 3 ? betweenness(g).vertex : std::vector<double>(g.id_bound());
  double lo = b[nodes.front()];
  double hi = lo;
  for (NodeId v : nodes) {
    lo = std::min(lo, b[v]);
    hi = std::max(hi, b[v]);
  }
  for (NodeId v : nodes) {
    capacity[v] = hi > lo ? kFloor + (1.0 - kFloor) * (b[v] - lo) / (hi - lo) : 1.0;
  }
  return capacity;
}

std::vector<CascadeState> run_cascade(const Graph& g, const CascadeConfig& cfg) {
  if (!(cfg.l_max > 0.0 && cfg.l_max <= 1.0)) throw ParameterError("l_max must lie in (0, 1]");
  if (!(cfg.r >= 0.0 && cfg.r <= 1.0)) throw ParameterError("r must lie in [0, 1]");
  if (!(cfg.boost >= 0.0)) throw ParameterError("boost must be non-negative");
  for (NodeId v : cfg.attacked) {
    if (!g.contains(v)) throw ParameterError("attacked node " + std::to_string(v) + " not in graph");
  }

  CascadeState s;
  s.capacity = cascade_capacities(g);
  s.load.assign(g.id_bound(), 0.0);
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> fraction(0.0, cfg.l_max);
  for (NodeId v : g.nodes()) s.load[v] = fraction(rng) * s.capacity[v];

  std::vector<double> limit(g.id_bound(), 0.0);
  for (NodeId v : g.nodes()) limit[v] = s.capacity[v] * (1.0 + cfg.r);
  for (NodeId v : cfg.defended) {
    if (g.contains(v)) limit[v] *= 1.0 + cfg.boost;
  }

  std::vector<bool> down(g.id_bound(), false);
  std::vector<std::pair<NodeId, double>> pending;
  auto fail = [&](NodeId v) {
    down[v] = true;
    pending.emplace_back(v, s.load[v]);
    s.load[v] = 0.0;
    s.failed.push_back(v);
  };
  for (NodeId v : cfg.attacked) {
    if (!down[v]) fail(v);
  }
  std::sort(s.failed.begin(), s.failed.end());

  std::vector<CascadeState> states{s};
  while (!pending.empty() && s.step < cfg.max_steps) {
    ++s.step;
    auto shedding = std::move(pending);
    pending.clear();
    for (const auto& [v, amount] : shedding) {
      std::size_t live = 0;
      for (NodeId w : g.neighbors(v)) live += down[w] ? 0 : 1;
      if (live == 0) continue;  // nowhere to go; the load is lost
      const double share = amount / static_cast<double>(live);
      for (NodeId w : g.neighbors(v)) {
        if (!down[w]) s.load[w] += share;
      }
    }
    for (NodeId v : g.nodes()) {
      if (!down[v] && s.load[v] > limit[v]) fail(v);
    }
    std::sort(s.failed.begin(), s.failed.end());
    states.push_back(s);
  }
  return states;
}

// ---------------------------------------------------------------------------
// Sweeps

std::string_view sweep_parameter_name(SweepKind kind) {
  switch (kind) {
    case SweepKind::sis:
    case SweepKind::sir: return "s";
    case SweepKind::cascade_r: return "r";
    case SweepKind::cascade_lmax: return "l_max";
  }
  return "?";
}

std::vector<SweepRow> sweep(const Graph& g, const SweepGrid& grid) {
  if (grid.values.empty() || grid.seeds.empty()) throw ParameterError("sweep grid is empty");
  if (!(grid.tail > 0.0 && grid.tail <= 1.0)) throw ParameterError("tail must lie in (0, 1]");
  const bool epidemic = grid.kind == SweepKind::sis || grid.kind == SweepKind::sir;

  double lambda1 = 0.0;
  if (epidemic) {
    validate(grid.epidemic);
    lambda1 = spectral_radius(g);
    for (double s : grid.values) {
      const double beta = s > 0.0 ? s * grid.epidemic.delta / lambda1 : 0.0;
      if (!(s >= 0.0) || !(beta <= 1.0)) {
        throw ParameterError("strength " + std::to_string(s) + " gives beta outside [0, 1]");
      }
    }
  }

  const std::size_t total = grid.values.size() * grid.seeds.size();
  std::vector<SweepRow> rows(total);
  auto run_one = [&](std::size_t index) {
    SweepRow row;
    row.value = grid.values[index / grid.seeds.size()];
    row.seed = grid.seeds[index % grid.seeds.size()];
    if (epidemic) {
      SisConfig cfg = grid.epidemic;
      cfg.beta = row.value > 0.0 ? row.value * cfg.delta / lambda1 : 0.0;
      cfg.seed = row.seed;
      auto trace = grid.kind == SweepKind::sis ? run_sis(g, cfg) : run_sir(g, cfg);
      const auto tail = static_cast<std::size_t>(
          std::ceil(grid.tail * static_cast<double>(cfg.steps)));
      row.final_fraction = trace.infected_fraction(trace.counts.size() - 1);
      row.mean_fraction = trace.tail_mean(tail);
      row.steps = trace.counts.size() - 1;
    } else {
      CascadeConfig cfg = grid.cascade;
      (grid.kind == SweepKind::cascade_r ? cfg.r : cfg.l_max) = row.value;
      cfg.seed = row.seed;
      auto states = run_cascade(g, cfg);
      row.final_fraction = static_cast<double>(states.back().failed.size()) /
                           static_cast<double>(g.node_count());
      row.mean_fraction = row.final_fraction;
      row.steps = states.back().step;
    }
    rows[index] = row;
  };

  parallel_for(total, grid.jobs, run_one);
  return rows;
}

}  // namespace netrobust
