#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "netrobust/graph.hpp"
#include "netrobust/measures.hpp"

namespace netrobust::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

/// Parses argv (without the program name) and runs the command. Results go
/// to files or `out`; diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// ---------------------------------------------------------------------------
// Input sources

/// `gen:csf:n=300,m=2,p=0.3[,seed=7]` or a file path.
struct GraphSource {
  std::string text;
  bool generated = false;
  GeneratorParams params;
  bool has_seed = false;
};

/// Throws ParameterError on a malformed generator spec.
GraphSource parse_graph_source(std::string_view text);

/// Loads or generates the graph; labels are the identity for generated
/// graphs.
LoadedGraph load_source(const GraphSource& source);

// ---------------------------------------------------------------------------
// Tabular output

/// monostate renders as an empty CSV field and JSON null.
using Cell = std::variant<std::monostate, std::string, double, std::int64_t, bool>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

/// 15 significant digits, shortest form; integral values keep a trailing
/// ".0".
std::string format_double(double x);

/// Comma-separated, header row, `.` decimal, RFC 4180 quoting.
std::string to_csv(const Table& table);

/// Array of objects keyed by column name.
std::string to_json(const Table& table);

// ---------------------------------------------------------------------------
// Harnesses

struct ApproxErrorRow {
  std::size_t k = 0;
  double mean_abs_error = 0.0;
};

/// Mean |approx - exact| over `runs` seeds (seed, seed + 1, ...) for every
/// k in the grid. `id` may name the approximation or its exact counterpart.
std::vector<ApproxErrorRow> approx_error_harness(const Graph& g, MeasureId id,
                                                 std::span<const std::size_t> k_grid,
                                                 std::size_t runs, std::uint64_t seed,
                                                 std::size_t jobs = 1);

struct ScalabilityRow {
  std::string measure;
  std::size_t n = 0;
  /// Mean wall-clock seconds; empty on timeout or failure.
  std::optional<double> seconds;
  /// "ok", "TIMEOUT" or "error: ...".
  std::string status;
};

/// Times each measure on clustered scale-free graphs of the given sizes.
/// Each evaluation runs in a child process that is killed once it exceeds
/// `budget_seconds`.
std::vector<ScalabilityRow> scalability_harness(std::span<const MeasureId> ids,
                                                std::span<const std::size_t> sizes,
                                                double budget_seconds, std::size_t runs,
                                                std::uint64_t seed);

}  // namespace netrobust::cli
