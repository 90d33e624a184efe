#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "netrobust/graph.hpp"

namespace netrobust {

enum class MatrixKind { adjacency, laplacian };

/// Eigenpairs of a graph matrix. Adjacency spectra are sorted descending,
/// Laplacian spectra ascending. Eigenvector columns match `eigenvalues`,
/// have unit norm and their largest-magnitude entry is positive.
struct SpectrumResult {
  std::vector<double> eigenvalues;
  std::optional<Eigen::MatrixXd> eigenvectors;
  MatrixKind matrix_kind = MatrixKind::adjacency;
  std::size_t k_used = 0;
};

struct SolverConfig {
  double tol = 1e-8;
  /// Cap on the Krylov dimension. 0 picks a size-dependent default.
  std::size_t max_iter = 0;
  std::size_t k = 1;
  std::uint64_t seed = 0;
  bool want_vectors = true;
};

/// Largest n for which the dense solver is used.
inline constexpr std::size_t kDenseCutoff = 2000;

Eigen::MatrixXd adjacency_matrix(const Graph& g);
Eigen::MatrixXd laplacian_matrix(const Graph& g);

/// Full spectrum of a symmetric matrix, ascending. Throws PreconditionError
/// if the matrix is not symmetric within 1e-12 or larger than kDenseCutoff.
SpectrumResult dense_symmetric_eigen(const Eigen::MatrixXd& matrix,
                                     bool want_vectors = true);

/// Full adjacency / Laplacian spectrum of a (compacted) graph.
SpectrumResult adjacency_spectrum(const Graph& g, bool want_vectors = true);
SpectrumResult laplacian_spectrum(const Graph& g, bool want_vectors = true);

/// k algebraically largest adjacency eigenpairs (Lanczos).
SpectrumResult top_k_adjacency(const Graph& g, const SolverConfig& cfg);

/// k smallest Laplacian eigenpairs, zero mode included. Runs Lanczos on
/// c*I - L with c = 2 * max_degree + 1.
SpectrumResult bottom_k_laplacian(const Graph& g, const SolverConfig& cfg);

/// Lanczos with full reorthogonalization on an implicit symmetric operator.
/// Returns the k largest eigenpairs, descending.
class SymmetricOperator {
 public:
  virtual ~SymmetricOperator() = default;
  virtual std::size_t size() const = 0;
  virtual void apply(const Eigen::VectorXd& x, Eigen::VectorXd& y) const = 0;
  /// Upper bound on the spectral norm, used to scale the residual test.
  virtual double norm_bound() const = 0;
};

SpectrumResult lanczos_largest(const SymmetricOperator& op,
                               const SolverConfig& cfg);

/// Flips each column so its largest-magnitude entry is positive.
void normalize_signs(Eigen::MatrixXd& vectors);

}  // namespace netrobust
