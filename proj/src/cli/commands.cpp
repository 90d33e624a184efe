#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "netrobust/attacks.hpp"
#include "netrobust/cli.hpp"
#include "netrobust/defenses.hpp"
#include "netrobust/errors.hpp"
#include "netrobust/simulators.hpp"

#ifndef NETROBUST_VERSION
#define NETROBUST_VERSION "unknown"
#endif

namespace netrobust::cli {

namespace {

using Json = nlohmann::ordered_json;

// Raised while validating; maps to exit status 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Cell integer(std::size_t x) { return static_cast<std::int64_t>(x); }

struct Common {
  std::string input;
  std::string out;
  std::string format;
  std::optional<std::uint64_t> seed;
  std::size_t jobs = 1;
};

// What a command hands back once validation has passed.
struct Output {
  Table table;
  std::optional<Json> document;  // replaces the table in JSON mode
  std::optional<std::string> bare;  // stdout text when no --out is given
};

struct Prepared {
  Json config = Json::object();
  std::shared_ptr<const LoadedGraph> loaded;
  std::function<Output()> compute;
};

void add_common(CLI::App* cmd, Common& c, bool needs_input) {
  auto* in = cmd->add_option("--in", c.input, "edge-list path or gen:csf:n=..,m=..,p=..[,seed=..]");
  if (needs_input) in->required();
  cmd->add_option("--out", c.out, "output file (stdout when omitted)");
  cmd->add_option("--format", c.format, "csv or json (default: from --out extension)")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--seed", c.seed, "random seed (mandatory for stochastic commands)");
  cmd->add_option("--jobs", c.jobs, "worker threads for ensembles")->check(CLI::Range(1, 1024));
}

std::uint64_t require_seed(const Common& c, std::string_view command) {
  if (!c.seed) throw UsageError(std::string(command) + " is stochastic; --seed is required");
  return *c.seed;
}

LoadedGraph load_input(const Common& c, Json& config) {
  GraphSource source;
  try {
    source = parse_graph_source(c.input);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  if (source.generated && !source.has_seed) {
    if (!c.seed) throw UsageError("generated input needs seed= in the spec or --seed");
    source.params.seed = *c.seed;
  }
  config["input"] = c.input;
  if (source.generated) {
    config["generator"] = {{"family", "csf"},
                           {"n", source.params.n},
                           {"m", source.params.m_attach},
                           {"p", source.params.p_triangle},
                           {"seed", source.params.seed}};
  }
  try {
    return load_source(source);
  } catch (const ParseError& e) {
    throw UsageError(c.input + ": line " + std::to_string(e.line()) + ": " + e.what());
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
}

MeasureId parse_measure(const std::string& name) {
  auto id = parse_measure_id(name);
  if (!id) throw UsageError("unknown measure id '" + name + "'");
  return *id;
}

void check_nodes(const Graph& g, const std::vector<NodeId>& nodes, std::string_view what) {
  for (NodeId v : nodes) {
    if (!g.contains(v)) {
      throw UsageError(std::string(what) + " node " + std::to_string(v) + " is not in the graph");
    }
  }
}

// "rb:30" -> node attack plan.
struct AttackSpec {
  Selector selector = Selector::random;
  std::size_t count = 0;
};

AttackSpec parse_attack_spec(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw UsageError("--attack expects selector:count, e.g. rb:30");
  auto selector = parse_selector(text.substr(0, colon));
  if (!selector) throw UsageError("unknown attack selector in '" + text + "'");
  AttackSpec spec;
  spec.selector = *selector;
  try {
    std::size_t used = 0;
    const auto n = std::stoll(text.substr(colon + 1), &used);
    if (used != text.size() - colon - 1 || n < 0) throw std::invalid_argument("count");
    spec.count = static_cast<std::size_t>(n);
  } catch (const std::exception&) {
    throw UsageError("invalid attack count in '" + text + "'");
  }
  return spec;
}

std::vector<NodeId> attack_nodes(const Graph& g, const AttackSpec& spec, std::uint64_t seed) {
  std::vector<NodeId> nodes;
  for (const auto& t : select_targets(g, {TargetKind::node, spec.selector, seed}, spec.count)) {
    nodes.push_back(std::get<NodeId>(t));
  }
  return nodes;
}

// Accepts a JSON array of ids or an object with a "nodes" array.
std::vector<NodeId> read_node_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  Json doc;
  try {
    doc = Json::parse(in);
    const Json& list = doc.is_object() ? doc.at("nodes") : doc;
    return list.get<std::vector<NodeId>>();
  } catch (const Json::exception& e) {
    throw UsageError(path + ": expected a JSON id array or {\"nodes\": [...]}: " + e.what());
  }
}

std::string digest_hex(std::uint64_t digest) {
  std::ostringstream s;
  s << std::hex << std::setw(16) << std::setfill('0') << digest;
  return s.str();
}

std::filesystem::path resolve_out(const std::string& out) {
  std::filesystem::path p(out);
  if (p.is_relative()) {
    if (const char* dir = std::getenv("NETROBUST_OUTPUT_DIR"); dir && *dir) {
      return std::filesystem::path(dir) / p;
    }
  }
  return p;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  f << text;
  if (!f) throw Error("cannot write " + path.string());
}

bool identity_labels(const LoadedGraph& loaded) {
  for (std::size_t i = 0; i < loaded.labels.size(); ++i) {
    if (loaded.labels[i] != static_cast<std::int64_t>(i)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// measure

struct MeasureArgs {
  Common common;
  std::string id;
  std::size_t k = 0;
};

Prepared prepare_measure(const MeasureArgs& a) {
  Prepared p;
  std::vector<MeasureId> ids;
  const bool all = a.id == "all";
  if (all) {
    for (const auto& info : all_measures()) ids.push_back(info.id);
  } else {
    ids.push_back(parse_measure(a.id));
  }
  const bool sampled = !all && (ids[0] == MeasureId::approx_avg_vertex_betweenness ||
                                ids[0] == MeasureId::approx_avg_edge_betweenness);
  const std::uint64_t seed = sampled ? require_seed(a.common, "sampled betweenness")
                                     : a.common.seed.value_or(0);
  p.loaded = std::make_shared<const LoadedGraph>(load_input(a.common, p.config));
  const Graph& g = p.loaded->graph;
  if (a.k > g.node_count()) throw UsageError("--k must not exceed n");

  p.config["id"] = a.id;
  p.config["k"] = a.k;
  p.config["seed"] = seed;
  const bool single = !all;
  p.compute = [ids, single, k = a.k, seed, input = p.loaded] {
    const Graph& g = input->graph;
    MeasureOptions options;
    options.k = k;
    options.seed = seed;
    Output o;
    o.table.columns = {"measure", "value", "exact", "higher_is_more_robust", "k", "flagged", "note"};
    for (MeasureId id : ids) {
      // A single measure propagates its failure; `all` records it per row.
      MeasureResult r = single ? evaluate(g, id, options) : measure_or_flag(g, id, options);
      o.table.rows.push_back({std::string(measure_info(id).name), r.value, r.exact,
                              r.higher_is_more_robust,
                              r.k_used ? integer(*r.k_used) : Cell{}, r.flagged, r.note});
      if (single) o.bare = format_double(r.value) + "\n";
    }
    return o;
  };
  return p;
}

// ---------------------------------------------------------------------------
// attack

struct AttackArgs {
  Common common;
  std::string strategy;
  std::string kind = "node";
  std::size_t count = 0;
  std::string measure = "lcc";
  std::size_t k = 0;
};

Prepared prepare_attack(const AttackArgs& a) {
  Prepared p;
  const auto seed = require_seed(a.common, "attack");
  auto selector = parse_selector(a.strategy);
  if (!selector) throw UsageError("unknown strategy '" + a.strategy + "'");
  const MeasureId measure = parse_measure(a.measure);
  const TargetKind kind = a.kind == "node" ? TargetKind::node : TargetKind::edge;
  p.loaded = std::make_shared<const LoadedGraph>(load_input(a.common, p.config));
  const Graph& g = p.loaded->graph;
  const std::size_t available = kind == TargetKind::node ? g.node_count() : g.edge_count();
  if (a.count > available) {
    throw UsageError("--count " + std::to_string(a.count) + " exceeds the " +
                     std::to_string(available) + " available targets");
  }
  p.config.update(Json{{"strategy", a.strategy}, {"kind", a.kind}, {"count", a.count},
                       {"measure", a.measure}, {"k", a.k}, {"seed", seed}});
  p.compute = [input = p.loaded, strategy = AttackStrategy{kind, *selector, seed}, count = a.count, measure,
               k = a.k, seed] {
    const Graph& g = input->graph;
    MeasureOptions options;
    options.k = k;
    options.seed = seed;
    auto run = run_attack(g, strategy, count, measure, options);
    Output o;
    o.table.columns = {"step", "removed", "measure_value", "flagged"};
    for (std::size_t i = 0; i < run.trace.curve.size(); ++i) {
      const auto& r = run.trace.curve[i];
      o.table.rows.push_back({integer(i), i == 0 ? std::string() : run.trace.actions[i - 1],
                              r.value, r.flagged});
    }
    return o;
  };
  return p;
}


// ---------------------------------------------------------------------------
// defend

struct DefendArgs {
  Common common;
  std::string strategy;
  std::size_t budget = 1;
  std::string measure = "lcc";
  std::string attack;
  std::size_t max_tries = 100;
};

Prepared prepare_defend(const DefendArgs& a) {
  Prepared p;
  const auto seed = require_seed(a.common, "defend");
  auto kind = parse_defense_kind(a.strategy);
  if (!kind || *kind == DefenseKind::netshield) {
    throw UsageError("unknown edge defense '" + a.strategy + "' (netshield has its own command)");
  }
  const MeasureId measure = parse_measure(a.measure);
  std::optional<AttackSpec> attack;
  if (!a.attack.empty()) attack = parse_attack_spec(a.attack);
  p.loaded = std::make_shared<const LoadedGraph>(load_input(a.common, p.config));
  if (attack && attack->count > p.loaded->graph.node_count()) {
    throw UsageError("--attack count exceeds the number of nodes");
  }
  p.config.update(Json{{"strategy", a.strategy}, {"budget", a.budget}, {"measure", a.measure},
                       {"attack", a.attack}, {"max_tries", a.max_tries}, {"seed", seed}});
  p.compute = [input = p.loaded, strategy = DefenseStrategy{*kind, a.budget, seed, a.max_tries},
               measure, attack, seed] {
    const Graph& g = input->graph;
    MeasureOptions options;
    options.seed = seed;
    options.reference_n = g.node_count();
    Graph target = g;
    if (attack) {
      std::vector<AttackTarget> removed;
      for (NodeId v : attack_nodes(g, *attack, seed)) removed.emplace_back(v);
      target = apply_targets(g, removed);
    }
    auto trace = run_defense(target, strategy, measure, options);
    Output o;
    o.table.columns = {"step", "action", "measure_value", "flagged"};
    for (std::size_t i = 0; i < trace.curve.size(); ++i) {
      o.table.rows.push_back({integer(i), i == 0 ? std::string() : trace.actions[i - 1],
                              trace.curve[i].value, trace.curve[i].flagged});
    }
    return o;
  };
  return p;
}

// ---------------------------------------------------------------------------
// netshield

struct NetshieldArgs {
  Common common;
  std::size_t k = 1;
};

Prepared prepare_netshield(const NetshieldArgs& a) {
  Prepared p;
  p.loaded = std::make_shared<const LoadedGraph>(load_input(a.common, p.config));
  if (a.k < 1 || a.k > p.loaded->graph.node_count()) throw UsageError("--k must lie in [1, n]");
  p.config["k"] = a.k;
  p.compute = [input = p.loaded, k = a.k] {
    auto set = netshield_select(input->graph, k);
    Output o;
    o.table.columns = {"rank", "node"};
    for (std::size_t i = 0; i < set.nodes.size(); ++i) {
      o.table.rows.push_back({integer(i + 1), integer(set.nodes[i])});
    }
    o.document = Json{{"nodes", set.nodes},
                      {"shield_value", set.shield_value},
                      {"eigendrop", set.eigendrop}};
    return o;
  };
  return p;
}

// ---------------------------------------------------------------------------
// sis / sir

struct EpidemicArgs {
  Common common;
  std::optional<double> beta;
  std::optional<double> strength;
  double delta = 0.05;
  std::size_t steps = 1000;
  double init_frac = 0.1;
  std::vector<NodeId> init_nodes;
  std::string monitor;
};

void add_epidemic_options(CLI::App* cmd, EpidemicArgs& e) {
  auto* beta = cmd->add_option("--beta", e.beta, "per-contact infection probability")
                   ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--strength", e.strength, "effective strength s; sets beta = s*delta/lambda1")
      ->check(CLI::NonNegativeNumber)
      ->excludes(beta);
  cmd->add_option("--delta", e.delta, "per-step healing probability")->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--steps", e.steps, "number of steps")->capture_default_str();
  auto* frac = cmd->add_option("--init-frac", e.init_frac, "initially infected fraction")->capture_default_str()
                   ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--init-nodes", e.init_nodes, "initially infected node ids")
      ->delimiter(',')
      ->excludes(frac);
  cmd->add_option("--monitor", e.monitor, "JSON file of monitored (removed) node ids");
}

Prepared prepare_epidemic(const EpidemicArgs& a, bool sir) {
  Prepared p;
  const auto seed = require_seed(a.common, sir ? "sir" : "sis");
  if (!a.beta && !a.strength) throw UsageError("one of --beta or --strength is required");
  if (!(a.delta > 0.0)) throw UsageError("--delta must lie in (0, 1]");
  if (a.init_nodes.empty() && !(a.init_frac > 0.0)) throw UsageError("--init-frac must be > 0");
  std::vector<NodeId> monitored;
  if (!a.monitor.empty()) monitored = read_node_file(a.monitor);
  p.loaded = std::make_shared<const LoadedGraph>(load_input(a.common, p.config));
  const Graph& g = p.loaded->graph;
  check_nodes(g, monitored, "monitored");
  check_nodes(g, a.init_nodes, "initially infected");

  SisConfig cfg;
  cfg.delta = a.delta;
  cfg.steps = a.steps;
  cfg.seed = seed;
  cfg.monitored = monitored;
  if (a.init_nodes.empty()) {
    cfg.initially_infected = a.init_frac;
  } else {
    cfg.initially_infected = a.init_nodes;
  }
  if (a.beta) {
    cfg.beta = *a.beta;
  } else {
    const double lambda1 = spectral_radius(g);
    cfg.beta = *a.strength > 0.0 ? *a.strength * a.delta / lambda1 : 0.0;
    if (!(cfg.beta <= 1.0)) throw UsageError("--strength implies beta > 1");
  }

  p.config.update(Json{{"model", sir ? "sir" : "sis"}, {"beta", cfg.beta}, {"delta", cfg.delta},
                       {"steps", cfg.steps}, {"seed", seed}, {"monitored", monitored}});
  if (a.init_nodes.empty()) {
    p.config["init_frac"] = a.init_frac;
  } else {
    p.config["init_nodes"] = a.init_nodes;
  }
  p.compute = [input = p.loaded, cfg, sir, config = &p.config] {
    auto trace = sir ? run_sir(input->graph, cfg) : run_sis(input->graph, cfg);
    Output o;
    o.table.columns = {"step", "susceptible", "infected"};
    if (sir) o.table.columns.push_back("recovered");
    o.table.columns.push_back("infected_fraction");
    for (std::size_t t = 0; t < trace.counts.size(); ++t) {
      const auto& c = trace.counts[t];
      std::vector<Cell> row{integer(t), integer(c.susceptible), integer(c.infected)};
      if (sir) row.push_back(integer(c.recovered));
      row.push_back(trace.infected_fraction(t));
      o.table.rows.push_back(std::move(row));
    }
    (void)config;
    return o;
  };
  p.config["strength"] = effective_strength(g, cfg.beta, cfg.delta);
  return p;
}

// ---------------------------------------------------------------------------
// cascade

struct CascadeArgs {
  Common common;
  double l_max = 0.8;
  double r = 0.0;
  std::string attack;
  std::vector<NodeId> attacked;
  std::vector<NodeId> defended;
  std::string defended_file;
  double boost = 0.5;
  std::size_t max_steps = 1000;
};

void add_cascade_options(CLI::App* cmd, CascadeArgs& c) {
  cmd->add_option("--lmax", c.l_max, "maximum initial load fraction")->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--r", c.r, "redundancy")->capture_default_str()->check(CLI::Range(0.0, 1.0));
  auto* attack = cmd->add_option("--attack", c.attack, "overloaded nodes as selector:count, e.g. id:4");
  cmd->add_option("--attacked", c.attacked, "explicit overloaded node ids")
      ->delimiter(',')
      ->excludes(attack);
  cmd->add_option("--defended", c.defended, "node ids receiving a capacity boost")->delimiter(',');
  cmd->add_option("--defended-from", c.defended_file, "JSON file of defended node ids");
  cmd->add_option("--boost", c.boost, "capacity boost for defended nodes")->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--max-steps", c.max_steps, "redistribution round cap")->capture_default_str();
}

// Shared by cascade and sweep: the overloaded set is resolved up front.
CascadeConfig resolve_cascade(const CascadeArgs& a, const Graph& g, std::uint64_t seed,
                              Json& config) {
  if (!(a.l_max > 0.0)) throw UsageError("--lmax must lie in (0, 1]");
  CascadeConfig cfg;
  cfg.l_max = a.l_max;
  cfg.r = a.r;
  cfg.boost = a.boost;
  cfg.max_steps = a.max_steps;
  cfg.seed = seed;
  cfg.defended = a.defended;
  if (!a.defended_file.empty()) {
    auto extra = read_node_file(a.defended_file);
    cfg.defended.insert(cfg.defended.end(), extra.begin(), extra.end());
  }
  check_nodes(g, cfg.defended, "defended");
  if (!a.attack.empty()) {
    auto spec = parse_attack_spec(a.attack);
    if (spec.count > g.node_count()) throw UsageError("--attack count exceeds the number of nodes");
    cfg.attacked = attack_nodes(g, spec, seed);
  } else {
    check_nodes(g, a.attacked, "attacked");
    cfg.attacked = a.attacked;
  }
  config.update(Json{{"l_max", cfg.l_max}, {"r", cfg.r}, {"attack", a.attack},
                     {"attacked", cfg.attacked}, {"defended", cfg.defended},
                     {"boost", cfg.boost}, {"max_steps", cfg.max_steps}, {"seed", seed}});
  return cfg;
}

Prepared prepare_cascade(const CascadeArgs& a) {
  Prepared p;
  const auto seed = require_seed(a.common, "cascade");
  p.loaded = std::make_shared<const LoadedGraph>(load_input(a.common, p.config));
  const auto cfg = resolve_cascade(a, p.loaded->graph, seed, p.config);
  p.compute = [input = p.loaded, cfg] {
    const Graph& g = input->graph;
    auto states = run_cascade(g, cfg);
    Output o;
    o.table.columns = {"step", "failed_count", "failed_fraction", "total_live_load"};
    for (const auto& s : states) {
      double live = 0.0;
      for (NodeId v : g.nodes()) live += s.load[v];
      o.table.rows.push_back({integer(s.step), integer(s.failed.size()),
                              static_cast<double>(s.failed.size()) /
                                  static_cast<double>(g.node_count()),
                              live});
    }
    return o;
  };
  return p;
}

// ---------------------------------------------------------------------------
// sweep

struct SweepArgs {
  Common common;
  std::string model = "sis";
  std::string param;
  std::vector<double> values;
  std::size_t runs = 10;
  double tail = 0.1;
  EpidemicArgs epidemic;
  CascadeArgs cascade;
};

Prepared prepare_sweep(const SweepArgs& a) {
  Prepared p;
  const auto seed = require_seed(a.common, "sweep");
  if (a.values.empty()) throw UsageError("--values must not be empty");
  if (a.runs == 0) throw UsageError("--runs must be positive");
  SweepGrid grid;
  const bool epidemic = a.model == "sis" || a.model == "sir";
  const std::string param = a.param.empty() ? (epidemic ? "s" : "r") : a.param;
  if (epidemic) {
    if (param != "s") throw UsageError("epidemic sweeps vary --param s");
    grid.kind = a.model == "sis" ? SweepKind::sis : SweepKind::sir;
  } else if (param == "r") {
    grid.kind = SweepKind::cascade_r;
  } else if (param == "lmax") {
    grid.kind = SweepKind::cascade_lmax;
  } else {
    throw UsageError("cascade sweeps vary --param r or --param lmax");
  }
  for (double v : a.values) {
    const bool ok = epidemic ? v >= 0.0 : (param == "r" ? v >= 0.0 && v <= 1.0 : v > 0.0 && v <= 1.0);
    if (!ok) throw UsageError("sweep value " + format_double(v) + " is out of range");
  }
  p.loaded = std::make_shared<const LoadedGraph>(load_input(a.common, p.config));
  const Graph& g = p.loaded->graph;

  grid.values = a.values;
  for (std::size_t i = 0; i < a.runs; ++i) grid.seeds.push_back(seed + i);
  grid.tail = a.tail;
  grid.jobs = a.common.jobs;
  p.config.update(Json{{"model", a.model}, {"param", param}, {"values", a.values},
                       {"runs", a.runs}, {"seed", seed}, {"tail", a.tail}});
  if (epidemic) {
    const auto& e = a.epidemic;
    std::vector<NodeId> monitored;
    if (!e.monitor.empty()) monitored = read_node_file(e.monitor);
    check_nodes(g, monitored, "monitored");
    grid.epidemic.delta = e.delta;
    grid.epidemic.steps = e.steps;
    grid.epidemic.initially_infected = e.init_frac;
    grid.epidemic.monitored = monitored;
    const double lambda1 = spectral_radius(g);
    for (double s : a.values) {
      if (s * e.delta / lambda1 > 1.0) throw UsageError("strength " + format_double(s) + " implies beta > 1");
    }
    p.config.update(Json{{"delta", e.delta}, {"steps", e.steps}, {"init_frac", e.init_frac},
                         {"monitored", monitored}});
  } else {
    grid.cascade = resolve_cascade(a.cascade, g, seed, p.config);
  }
  p.compute = [input = p.loaded, grid, param] {
    auto rows = sweep(input->graph, grid);
    Output o;
    o.table.columns = {"param", "value", "seed", "final_fraction", "mean_fraction", "steps"};
    for (const auto& r : rows) {
      o.table.rows.push_back({param, r.value, static_cast<std::int64_t>(r.seed), r.final_fraction,
                              r.mean_fraction, integer(r.steps)});
    }
    return o;
  };
  return p;
}

// ---------------------------------------------------------------------------
// approx-error

struct ApproxErrorArgs {
  Common common;
  std::string id;
  std::vector<std::size_t> k_grid;
  std::size_t runs = 30;
};

Prepared prepare_approx_error(const ApproxErrorArgs& a) {
  Prepared p;
  const auto seed = require_seed(a.common, "approx-error");
  if (a.runs == 0) throw UsageError("--runs must be positive");
  const MeasureId id = parse_measure(a.id);
  p.loaded = std::make_shared<const LoadedGraph>(load_input(a.common, p.config));
  const std::size_t n = p.loaded->graph.node_count();
  std::vector<std::size_t> grid = a.k_grid;
  if (grid.empty()) {
    for (std::size_t k = 5; k <= std::min<std::size_t>(300, n); k += 10) grid.push_back(k);
  }
  if (grid.empty()) throw UsageError("graph too small for the default k grid; pass --k-grid");
  for (std::size_t k : grid) {
    if (k < 1 || k > n) throw UsageError("k = " + std::to_string(k) + " outside [1, n]");
  }
  const bool has_variant = !measure_info(id).exact || [&] {
    for (const auto& info : all_measures()) {
      if (info.exact_counterpart == id) return true;
    }
    return false;
  }();
  if (!has_variant) throw UsageError(a.id + " has no approximate variant");
  p.config.update(Json{{"id", a.id}, {"k_grid", grid}, {"runs", a.runs}, {"seed", seed}});
  p.compute = [input = p.loaded, id, grid, runs = a.runs, seed, jobs = a.common.jobs] {
    auto rows = approx_error_harness(input->graph, id, grid, runs, seed, jobs);
    Output o;
    o.table.columns = {"k", "mean_abs_error"};
    for (const auto& r : rows) o.table.rows.push_back({integer(r.k), r.mean_abs_error});
    return o;
  };
  return p;
}

// ---------------------------------------------------------------------------
// scalability

struct ScalabilityArgs {
  Common common;
  std::vector<std::string> ids;
  std::vector<std::size_t> sizes{100, 1000, 10000};
  double budget = 60.0;
  std::size_t runs = 1;
};

Prepared prepare_scalability(const ScalabilityArgs& a) {
  Prepared p;
  const auto seed = require_seed(a.common, "scalability");
  std::vector<MeasureId> ids;
  for (const auto& name : a.ids) ids.push_back(parse_measure(name));
  if (!std::is_sorted(a.sizes.begin(), a.sizes.end())) throw UsageError("--sizes must be ascending");
  for (std::size_t n : a.sizes) {
    if (n < 3) throw UsageError("sizes must be at least 3");
  }
  if (!(a.budget > 0.0)) throw UsageError("--budget must be positive");
  if (a.runs == 0) throw UsageError("--runs must be positive");
  p.config.update(Json{{"ids", a.ids}, {"sizes", a.sizes}, {"budget_seconds", a.budget},
                       {"runs", a.runs}, {"seed", seed}});
  p.compute = [ids, sizes = a.sizes, budget = a.budget, runs = a.runs, seed] {
    auto rows = scalability_harness(ids, sizes, budget, runs, seed);
    Output o;
    o.table.columns = {"measure", "n", "seconds", "status"};
    for (const auto& r : rows) {
      o.table.rows.push_back({r.measure, integer(r.n), r.seconds ? Cell{*r.seconds} : Cell{},
                              r.status});
    }
    return o;
  };
  return p;
}

// ---------------------------------------------------------------------------
// Emission

void emit(const Prepared& prepared, const Output& output, const Common& common,
          std::string_view command, double seconds, std::ostream& out) {
  std::string format = common.format;
  if (format.empty()) {
    format = common.out.size() >= 5 && common.out.ends_with(".json") ? "json" : "csv";
  }
  const std::string body = format == "json"
                               ? (output.document ? output.document->dump(2) + "\n"
                                                  : to_json(output.table))
                               : to_csv(output.table);
  if (common.out.empty()) {
    out << (output.bare && common.format.empty() ? *output.bare : body);
    return;
  }

  const auto path = resolve_out(common.out);
  write_file(path, body);

  Json manifest{{"tool", "netrobust"}, {"version", NETROBUST_VERSION},
                {"command", command}, {"config", prepared.config}};
  if (prepared.loaded) {
    const Graph& g = prepared.loaded->graph;
    manifest["graph"] = {{"n", g.node_count()},
                         {"m", g.edge_count()},
                         {"digest", digest_hex(graph_digest(g))}};
    if (!identity_labels(*prepared.loaded)) {
      std::string mapping = "id,label\n";
      for (std::size_t i = 0; i < prepared.loaded->labels.size(); ++i) {
        mapping += std::to_string(i) + "," + std::to_string(prepared.loaded->labels[i]) + "\n";
      }
      const auto ids_path = path.string() + ".ids.csv";
      write_file(ids_path, mapping);
      manifest["id_mapping"] = std::filesystem::path(ids_path).filename().string();
    }
  }
  manifest["output"] = path.filename().string();
  manifest["wall_clock_seconds"] = seconds;
  write_file(path.string() + ".manifest.json", manifest.dump(2) + "\n");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Graph robustness toolkit: measures, attacks, defenses and simulators",
               "netrobust"};
  app.require_subcommand(1);
  app.set_version_flag("--version", NETROBUST_VERSION);

  MeasureArgs measure;
  auto* measure_cmd = app.add_subcommand("measure", "evaluate one or all robustness measures");
  add_common(measure_cmd, measure.common, true);
  measure_cmd->add_option("--id", measure.id, "measure id or 'all'")->required();
  measure_cmd->add_option("--k", measure.k, "approximation parameter (0 = default)");

  AttackArgs attack;
  auto* attack_cmd = app.add_subcommand("attack", "remove nodes or edges and trace a measure");
  add_common(attack_cmd, attack.common, true);
  attack_cmd->add_option("--strategy", attack.strategy, "rnd, id, rd, ib or rb")->required();
  attack_cmd->add_option("--kind", attack.kind, "node or edge")->capture_default_str()
      ->check(CLI::IsMember({"node", "edge"}));
  attack_cmd->add_option("--count", attack.count, "number of removals")->required();
  attack_cmd->add_option("--measure", attack.measure, "measure traced after each removal")->capture_default_str();
  attack_cmd->add_option("--k", attack.k, "approximation parameter for approx_* measures");

  DefendArgs defend;
  auto* defend_cmd = app.add_subcommand("defend", "apply an edge defense and trace a measure");
  add_common(defend_cmd, defend.common, true);
  defend_cmd->add_option("--strategy", defend.strategy, "edge defense name")->required();
  defend_cmd->add_option("--budget", defend.budget, "number of defense actions")->capture_default_str();
  defend_cmd->add_option("--measure", defend.measure, "measure traced after each action")->capture_default_str();
  defend_cmd->add_option("--attack", defend.attack, "node attack applied first, e.g. rb:30");
  defend_cmd->add_option("--max-tries", defend.max_tries, "resampling attempts per action")->capture_default_str()
      ->check(CLI::PositiveNumber);

  NetshieldArgs netshield;
  auto* netshield_cmd = app.add_subcommand("netshield", "select k nodes to monitor");
  add_common(netshield_cmd, netshield.common, true);
  netshield_cmd->add_option("--k", netshield.k, "number of nodes")->required();

  EpidemicArgs sis;
  auto* sis_cmd = app.add_subcommand("sis", "susceptible-infected-susceptible simulation");
  add_common(sis_cmd, sis.common, true);
  add_epidemic_options(sis_cmd, sis);

  EpidemicArgs sir;
  auto* sir_cmd = app.add_subcommand("sir", "susceptible-infected-recovered simulation");
  add_common(sir_cmd, sir.common, true);
  add_epidemic_options(sir_cmd, sir);

  CascadeArgs cascade;
  auto* cascade_cmd = app.add_subcommand("cascade", "cascading-failure simulation");
  add_common(cascade_cmd, cascade.common, true);
  add_cascade_options(cascade_cmd, cascade);

  SweepArgs sweep_args;
  auto* sweep_cmd = app.add_subcommand("sweep", "ensemble over a parameter grid and seeds");
  add_common(sweep_cmd, sweep_args.common, true);
  sweep_cmd->add_option("--model", sweep_args.model, "sis, sir or cascade")->capture_default_str()
      ->check(CLI::IsMember({"sis", "sir", "cascade"}));
  sweep_cmd->add_option("--param", sweep_args.param, "s (epidemics), r or lmax (cascade)");
  sweep_cmd->add_option("--values", sweep_args.values, "grid values")->delimiter(',')->required();
  sweep_cmd->add_option("--runs", sweep_args.runs, "seeds per value (seed, seed+1, ...)")->capture_default_str();
  sweep_cmd->add_option("--tail", sweep_args.tail, "trailing fraction averaged")->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  sweep_cmd->add_option("--delta", sweep_args.epidemic.delta, "healing probability")->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  sweep_cmd->add_option("--steps", sweep_args.epidemic.steps, "epidemic steps")->capture_default_str();
  sweep_cmd->add_option("--init-frac", sweep_args.epidemic.init_frac, "initial fraction")->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  sweep_cmd->add_option("--monitor", sweep_args.epidemic.monitor, "JSON file of monitored ids");
  add_cascade_options(sweep_cmd, sweep_args.cascade);

  ApproxErrorArgs approx;
  auto* approx_cmd = app.add_subcommand("approx-error", "approximation error against k");
  add_common(approx_cmd, approx.common, true);
  approx_cmd->add_option("--id", approx.id, "measure with an approximate variant")->required();
  approx_cmd->add_option("--k-grid", approx.k_grid, "k values (default 5,15,...,295)")
      ->delimiter(',');
  approx_cmd->add_option("--runs", approx.runs, "seeds per k")->capture_default_str();

  ScalabilityArgs scale;
  auto* scale_cmd = app.add_subcommand("scalability", "wall-clock time against graph size");
  add_common(scale_cmd, scale.common, false);
  scale_cmd->add_option("--ids", scale.ids, "measure ids")->delimiter(',')->required();
  scale_cmd->add_option("--sizes", scale.sizes, "ascending node counts")->capture_default_str()->delimiter(',');
  scale_cmd->add_option("--budget", scale.budget, "seconds per evaluation")->capture_default_str();
  scale_cmd->add_option("--runs", scale.runs, "runs averaged per cell")->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << NETROBUST_VERSION << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  const auto start = std::chrono::steady_clock::now();
  CLI::App* chosen = app.get_subcommands().front();
  const std::string command = chosen->get_name();
  const Common* common = nullptr;
  Prepared prepared;
  try {
    if (chosen == measure_cmd) {
      common = &measure.common;
      prepared = prepare_measure(measure);
    } else if (chosen == attack_cmd) {
      common = &attack.common;
      prepared = prepare_attack(attack);
    } else if (chosen == defend_cmd) {
      common = &defend.common;
      prepared = prepare_defend(defend);
    } else if (chosen == netshield_cmd) {
      common = &netshield.common;
      prepared = prepare_netshield(netshield);
    } else if (chosen == sis_cmd) {
      common = &sis.common;
      prepared = prepare_epidemic(sis, false);
    } else if (chosen == sir_cmd) {
      common = &sir.common;
      prepared = prepare_epidemic(sir, true);
    } else if (chosen == cascade_cmd) {
      common = &cascade.common;
      prepared = prepare_cascade(cascade);
    } else if (chosen == sweep_cmd) {
      common = &sweep_args.common;
      prepared = prepare_sweep(sweep_args);
    } else if (chosen == approx_cmd) {
      common = &approx.common;
      prepared = prepare_approx_error(approx);
    } else {
      common = &scale.common;
      prepared = prepare_scalability(scale);
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    const Output output = prepared.compute();
    const std::chrono::duration<double> took = std::chrono::steady_clock::now() - start;
    emit(prepared, output, *common, command, took.count(), out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}

}  // namespace netrobust::cli
