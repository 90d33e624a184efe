#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "netrobust/errors.hpp"
#include "netrobust/measures.hpp"

namespace netrobust {

namespace {

void require_dense_feasible(const Graph& g, const char* what) {
  if (g.node_count() > kDenseCutoff) {
    throw DomainError(std::string(what) + " needs the full spectrum; graph exceeds " +
                      std::to_string(kDenseCutoff) + " nodes");
  }
}

std::vector<double> adjacency_eigenvalues(const Graph& g) {
  require_dense_feasible(g, "adjacency spectrum");
  return adjacency_spectrum(g, false).eigenvalues;
}

std::vector<double> laplacian_eigenvalues(const Graph& g) {
  require_dense_feasible(g, "Laplacian spectrum");
  return laplacian_spectrum(g, false).eigenvalues;
}

SolverConfig partial_config(std::size_t k, std::uint64_t seed, bool vectors = false) {
  SolverConfig cfg;
  cfg.k = k;
  cfg.seed = seed;
  cfg.want_vectors = vectors;
  return cfg;
}

void check_k(const Graph& g, std::size_t k) {
  if (k < 1 || k > g.node_count()) throw ParameterError("k must lie in [1, n]");
}

// sinh(a) / sinh(b) for b > 0 and |a| <= b, without overflow.
double sinh_ratio(double a, double b) {
  return (std::exp(a - b) - std::exp(-a - b)) / -std::expm1(-2.0 * b);
}

double log_sinh(double b) { return b + std::log1p(-std::exp(-2.0 * b)) - std::log(2.0); }

}  // namespace

double spectral_radius(const Graph& g) {
  if (g.empty()) throw DomainError("spectral radius of an empty graph");
  if (g.node_count() <= kDenseCutoff) return adjacency_eigenvalues(g).front();
  return top_k_adjacency(g, partial_config(1, 0)).eigenvalues.front();
}

double spectral_gap(const Graph& g) {
  if (g.node_count() < 2) throw DomainError("spectral gap needs at least two nodes");
  std::vector<double> values = g.node_count() <= kDenseCutoff
                                   ? adjacency_eigenvalues(g)
                                   : top_k_adjacency(g, partial_config(2, 0)).eigenvalues;
  return values[0] - values[1];
}

double natural_connectivity_from(std::span<const double> eigenvalues, std::size_t n) {
  if (eigenvalues.empty() || n == 0) throw DomainError("natural connectivity of an empty graph");
  const double top = *std::max_element(eigenvalues.begin(), eigenvalues.end());
  double acc = 0.0;
  for (double value : eigenvalues) acc += std::exp(value - top);
  return top + std::log(acc) - std::log(static_cast<double>(n));
}

double natural_connectivity(const Graph& g) {
  if (g.empty()) throw DomainError("natural connectivity of an empty graph");
  auto values = adjacency_eigenvalues(g);
  return natural_connectivity_from(values, g.node_count());
}

MeasureResult approx_natural_connectivity(const Graph& g, std::size_t k, std::uint64_t seed) {
  if (g.empty()) throw DomainError("natural connectivity of an empty graph");
  check_k(g, k);
  auto spectrum = top_k_adjacency(g, partial_config(k, seed));
  MeasureResult r;
  r.measure_id = MeasureId::approx_natural_connectivity;
  r.value = natural_connectivity_from(spectrum.eigenvalues, g.node_count());
  r.exact = false;
  r.k_used = k;
  return r;
}

// ---------------------------------------------------------------------------
// Spectral scaling

SpectralScalingReport spectral_scaling_from(std::span<const double> eigenvalues,
                                            const Eigen::MatrixXd& eigenvectors) {
  const auto n = eigenvectors.rows();
  const auto pairs = static_cast<Eigen::Index>(eigenvalues.size());
  const double lambda1 = eigenvalues[0];
  if (!(lambda1 > 0)) throw DomainError("spectral scaling needs a positive spectral radius");

  SpectralScalingReport report;
  report.pairs_used = eigenvalues.size();

  std::vector<double> x(static_cast<std::size_t>(n));
  std::vector<double> y(static_cast<std::size_t>(n));
  double sum_sq = 0.0;
  bool finite = true;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double u1 = eigenvectors(i, 0);
    if (!(u1 > 0)) throw DomainError("principal eigenvector is not entrywise positive");
    // SC_odd(i) / sinh(lambda1); the A = sinh(lambda1)^-1/2 constant cancels
    // the sinh(lambda1) factor.
    double ratio = 0.0;
    for (Eigen::Index j = 0; j < pairs; ++j) {
      const double u = eigenvectors(i, j);
      ratio += u * u * sinh_ratio(eigenvalues[static_cast<std::size_t>(j)], lambda1);
    }
    // Odd closed walks vanish on bipartite graphs; the log is then undefined.
    if (!(ratio > 1e-13)) {
      finite = false;
      continue;
    }
    const double term = std::log(u1) - 0.5 * std::log(ratio);
    sum_sq += term * term;
    x[static_cast<std::size_t>(i)] = log_sinh(lambda1) + std::log(ratio);
    y[static_cast<std::size_t>(i)] = std::log(u1);
  }
  if (!finite) {
    report.xi = std::numeric_limits<double>::infinity();
    report.r_corr = std::numeric_limits<double>::quiet_NaN();
    report.slope = std::numeric_limits<double>::quiet_NaN();
    return report;
  }
  report.xi = std::sqrt(sum_sq / static_cast<double>(n));
  report.good_expansion = report.xi < kGoodExpansionThreshold;

  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx > 1e-20 * static_cast<double>(n) && syy > 1e-20 * static_cast<double>(n)) {
    report.regression_defined = true;
    report.slope = sxy / sxx;
    report.r_corr = sxy / std::sqrt(sxx * syy);
  } else {
    report.r_corr = std::numeric_limits<double>::quiet_NaN();
    report.slope = std::numeric_limits<double>::quiet_NaN();
  }
  return report;
}

namespace {

void require_scaling_domain(const Graph& g) {
  if (g.node_count() < 2) throw DomainError("spectral scaling needs at least two nodes");
  if (!is_connected(g)) {
    throw DomainError("spectral scaling needs a connected graph (u1 not entrywise positive)");
  }
}

}  // namespace

SpectralScalingReport spectral_scaling(const Graph& g) {
  require_scaling_domain(g);
  require_dense_feasible(g, "spectral scaling");
  auto spectrum = adjacency_spectrum(g, true);
  return spectral_scaling_from(spectrum.eigenvalues, *spectrum.eigenvectors);
}

SpectralScalingReport generalized_robustness_index(const Graph& g, std::size_t k) {
  require_scaling_domain(g);
  check_k(g, k);
  if (g.node_count() <= kDenseCutoff) {
    auto spectrum = adjacency_spectrum(g, true);
    std::span<const double> values(spectrum.eigenvalues.data(), k);
    return spectral_scaling_from(values,
                                 spectrum.eigenvectors->leftCols(static_cast<Eigen::Index>(k)));
  }
  auto spectrum = top_k_adjacency(g, partial_config(k, 0, true));
  return spectral_scaling_from(spectrum.eigenvalues, *spectrum.eigenvectors);
}

// ---------------------------------------------------------------------------
// Laplacian

double algebraic_connectivity(const Graph& g) {
  if (g.node_count() < 2) throw DomainError("algebraic connectivity needs at least two nodes");
  if (g.node_count() <= kDenseCutoff) return laplacian_eigenvalues(g)[1];
  return bottom_k_laplacian(g, partial_config(2, 0)).eigenvalues[1];
}

namespace {

// Sum of log of the nonzero eigenvalues (zero mode dropped) minus log n.
double log_tree_count(std::span<const double> ascending, std::size_t n) {
  double acc = -std::log(static_cast<double>(n));
  for (std::size_t i = 1; i < ascending.size(); ++i) acc += std::log(ascending[i]);
  return acc;
}

double resistance_sum(std::span<const double> ascending, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 1; i < ascending.size(); ++i) acc += 1.0 / ascending[i];
  return static_cast<double>(n) * acc;
}

// Smallest k nonzero Laplacian eigenvalues plus the zero mode.
std::vector<double> bottom_laplacian(const Graph& g, std::size_t k, std::uint64_t seed) {
  const std::size_t want = std::min(k + 1, g.node_count());
  return bottom_k_laplacian(g, partial_config(want, seed)).eigenvalues;
}

}  // namespace

SpanningTreeCount num_spanning_trees(const Graph& g) {
  if (g.empty()) throw DomainError("spanning trees of an empty graph");
  SpanningTreeCount out;
  if (!is_connected(g)) {
    out.disconnected = true;
    out.log_value = -std::numeric_limits<double>::infinity();
    return out;
  }
  auto values = laplacian_eigenvalues(g);
  out.log_value = log_tree_count(values, g.node_count());
  out.value = std::exp(out.log_value);
  return out;
}

MeasureResult approx_num_spanning_trees(const Graph& g, std::size_t k, std::uint64_t seed) {
  if (g.empty()) throw DomainError("spanning trees of an empty graph");
  check_k(g, k);
  MeasureResult r;
  r.measure_id = MeasureId::approx_spanning_trees;
  r.exact = false;
  r.k_used = k;
  if (!is_connected(g)) {
    r.flagged = true;
    r.note = "disconnected graph has no spanning tree";
    return r;
  }
  auto values = bottom_laplacian(g, k, seed);
  r.value = std::exp(log_tree_count(values, g.node_count()));
  return r;
}

double effective_resistance(const Graph& g) {
  if (g.empty()) throw DomainError("effective resistance of an empty graph");
  if (!is_connected(g)) throw InfiniteResistanceError("effective resistance of a disconnected graph is infinite");
  return resistance_sum(laplacian_eigenvalues(g), g.node_count());
}

MeasureResult approx_effective_resistance(const Graph& g, std::size_t k, std::uint64_t seed) {
  if (g.empty()) throw DomainError("effective resistance of an empty graph");
  check_k(g, k);
  if (!is_connected(g)) throw InfiniteResistanceError("effective resistance of a disconnected graph is infinite");
  MeasureResult r;
  r.measure_id = MeasureId::approx_effective_resistance;
  r.higher_is_more_robust = false;
  r.exact = false;
  r.k_used = k;
  r.value = resistance_sum(bottom_laplacian(g, k, seed), g.node_count());
  return r;
}

}  // namespace netrobust
