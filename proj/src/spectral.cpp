#include "netrobust/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "netrobust/errors.hpp"

namespace netrobust {

namespace {

// Compressed adjacency of a dense graph.
struct Csr {
  std::vector<std::size_t> offsets;
  std::vector<NodeId> targets;

  explicit Csr(const Graph& g) {
    offsets.reserve(g.id_bound() + 1);
    offsets.push_back(0);
    for (NodeId v = 0; v < g.id_bound(); ++v) {
      auto nbrs = g.neighbors(v);
      targets.insert(targets.end(), nbrs.begin(), nbrs.end());
      offsets.push_back(targets.size());
    }
  }
  std::size_t size() const { return offsets.size() - 1; }
};

class AdjacencyOperator final : public SymmetricOperator {
 public:
  explicit AdjacencyOperator(const Graph& g)
      : csr_(g), max_degree_(static_cast<double>(g.max_degree())) {}

  std::size_t size() const override { return csr_.size(); }
  void apply(const Eigen::VectorXd& x, Eigen::VectorXd& y) const override {
    y.resize(x.size());
    for (std::size_t v = 0; v < csr_.size(); ++v) {
      double acc = 0.0;
      for (auto i = csr_.offsets[v]; i < csr_.offsets[v + 1]; ++i) {
        acc += x[csr_.targets[i]];
      }
      y[v] = acc;
    }
  }
  double norm_bound() const override { return max_degree_; }

 private:
  Csr csr_;
  double max_degree_;
};

// shift * I - L
class ShiftedLaplacianOperator final : public SymmetricOperator {
 public:
  ShiftedLaplacianOperator(const Graph& g, double shift) : csr_(g), shift_(shift) {}

  std::size_t size() const override { return csr_.size(); }
  void apply(const Eigen::VectorXd& x, Eigen::VectorXd& y) const override {
    y.resize(x.size());
    for (std::size_t v = 0; v < csr_.size(); ++v) {
      const auto begin = csr_.offsets[v];
      const auto end = csr_.offsets[v + 1];
      double acc = (shift_ - static_cast<double>(end - begin)) * x[v];
      for (auto i = begin; i < end; ++i) acc += x[csr_.targets[i]];
      y[v] = acc;
    }
  }
  double norm_bound() const override { return shift_; }

 private:
  Csr csr_;
  double shift_;
};

Eigen::VectorXd random_unit_vector(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd v(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = normal(rng);
  return v.normalized();
}

// Orthogonalizes w against basis[0..count) twice (classical Gram-Schmidt
// with reorthogonalization). Returns the remaining norm.
double orthogonalize(Eigen::VectorXd& w, const Eigen::MatrixXd& basis, Eigen::Index count) {
  for (int pass = 0; pass < 2; ++pass) {
    if (count == 0) break;
    Eigen::VectorXd coeffs = basis.leftCols(count).transpose() * w;
    w.noalias() -= basis.leftCols(count) * coeffs;
  }
  return w.norm();
}

std::size_t default_krylov_cap(std::size_t n, std::size_t k) {
  if (n <= 3000) return n;
  return std::min(n, std::max<std::size_t>(8 * k + 200, 600));
}

}  // namespace

void normalize_signs(Eigen::MatrixXd& vectors) {
  for (Eigen::Index c = 0; c < vectors.cols(); ++c) {
    auto col = vectors.col(c);
    const double peak = col.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < col.size(); ++i) {
      // First entry within rounding of the peak decides the sign.
      if (std::abs(col[i]) >= peak * (1.0 - 1e-9)) {
        if (col[i] < 0) col = -col;
        break;
      }
    }
  }
}

Eigen::MatrixXd adjacency_matrix(const Graph& g) {
  auto cg = compact(g);
  const auto n = static_cast<Eigen::Index>(cg.graph.node_count());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (auto [u, v] : cg.graph.edges()) {
    a(u, v) = 1.0;
    a(v, u) = 1.0;
  }
  return a;
}

Eigen::MatrixXd laplacian_matrix(const Graph& g) {
  Eigen::MatrixXd a = adjacency_matrix(g);
  Eigen::MatrixXd l = -a;
  for (Eigen::Index i = 0; i < a.rows(); ++i) l(i, i) = a.row(i).sum();
  return l;
}

SpectrumResult dense_symmetric_eigen(const Eigen::MatrixXd& matrix, bool want_vectors) {
  if (matrix.rows() != matrix.cols()) {
    throw PreconditionError("matrix must be square");
  }
  if (static_cast<std::size_t>(matrix.rows()) > kDenseCutoff) {
    throw PreconditionError("matrix of order " + std::to_string(matrix.rows()) +
                            " exceeds the dense solver cutoff");
  }
  if (matrix.rows() > 0 && (matrix - matrix.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw PreconditionError("matrix is not symmetric");
  }
  SpectrumResult out;
  out.k_used = static_cast<std::size_t>(matrix.rows());
  if (matrix.rows() == 0) return out;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      matrix, want_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw ConvergenceError("dense symmetric eigensolver failed", 0.0);
  }
  const auto& values = solver.eigenvalues();
  out.eigenvalues.assign(values.data(), values.data() + values.size());
  if (want_vectors) {
    Eigen::MatrixXd vectors = solver.eigenvectors();
    normalize_signs(vectors);
    out.eigenvectors = std::move(vectors);
  }
  return out;
}

SpectrumResult adjacency_spectrum(const Graph& g, bool want_vectors) {
  SpectrumResult r = dense_symmetric_eigen(adjacency_matrix(g), want_vectors);
  std::reverse(r.eigenvalues.begin(), r.eigenvalues.end());
  if (r.eigenvectors) r.eigenvectors = r.eigenvectors->rowwise().reverse().eval();
  r.matrix_kind = MatrixKind::adjacency;
  return r;
}

SpectrumResult laplacian_spectrum(const Graph& g, bool want_vectors) {
  SpectrumResult r = dense_symmetric_eigen(laplacian_matrix(g), want_vectors);
  r.matrix_kind = MatrixKind::laplacian;
  return r;
}

SpectrumResult lanczos_largest(const SymmetricOperator& op, const SolverConfig& cfg) {
  const std::size_t n = op.size();
  const std::size_t k = cfg.k;
  if (n == 0) throw PreconditionError("empty operator");
  if (k < 1 || k > n) throw ParameterError("k must lie in [1, n]");
  if (!(cfg.tol > 0)) throw ParameterError("tol must be positive");

  const std::size_t cap = cfg.max_iter == 0 ? default_krylov_cap(n, k)
                                            : std::min(cfg.max_iter, n);
  if (cap < k) throw ParameterError("max_iter smaller than k");
  const double scale = std::max(op.norm_bound(), 1.0);
  const double threshold = cfg.tol * scale;

  std::mt19937_64 rng(cfg.seed);
  const auto rows = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd basis(rows, 0);
  Eigen::MatrixXd images(rows, 0);
  Eigen::MatrixXd projected(0, 0);
  Eigen::Index dim = 0;

  auto reserve = [&](Eigen::Index columns) {
    if (columns <= basis.cols()) return;
    const auto grown = std::min<Eigen::Index>(
        static_cast<Eigen::Index>(cap),
        std::max<Eigen::Index>({columns, 2 * basis.cols(), static_cast<Eigen::Index>(2 * k + 32)}));
    basis.conservativeResize(rows, grown);
    images.conservativeResize(rows, grown);
    projected.conservativeResize(grown, grown);
  };

  // Appends a new orthonormal direction derived from `w`; falls back to a
  // fresh random direction when `w` lies (numerically) in the span already.
  auto append = [&](Eigen::VectorXd w) {
    double norm = orthogonalize(w, basis, dim);
    int attempts = 0;
    while (norm < 1e-10 * scale) {
      if (++attempts > 10) return false;
      w = random_unit_vector(n, rng);
      norm = orthogonalize(w, basis, dim);
    }
    reserve(dim + 1);
    basis.col(dim) = w / norm;
    Eigen::VectorXd image;
    op.apply(basis.col(dim), image);
    images.col(dim) = image;
    // Rayleigh-Ritz projection, kept explicitly so injected directions are
    // handled exactly.
    Eigen::VectorXd column = basis.leftCols(dim + 1).transpose() * image;
    projected.col(dim).head(dim + 1) = column;
    projected.row(dim).head(dim + 1) = column.transpose();
    ++dim;
    return true;
  };

  struct Ritz {
    Eigen::VectorXd values;    // descending
    Eigen::MatrixXd vectors;   // coefficients in the basis
    double worst_residual = 0;
  };
  auto ritz = [&]() {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(projected.topLeftCorner(dim, dim));
    Ritz r;
    const auto kk = static_cast<Eigen::Index>(k);
    r.values = solver.eigenvalues().tail(kk).reverse();
    r.vectors = solver.eigenvectors().rightCols(kk).rowwise().reverse();
    for (Eigen::Index i = 0; i < kk; ++i) {
      Eigen::VectorXd residual = images.leftCols(dim) * r.vectors.col(i) -
                                 r.values[i] * (basis.leftCols(dim) * r.vectors.col(i));
      r.worst_residual = std::max(r.worst_residual, residual.norm());
    }
    return r;
  };

  append(random_unit_vector(n, rng));
  std::optional<Eigen::VectorXd> confirmed;
  Eigen::Index last_check = 0;
  Ritz current;
  for (;;) {
    const bool full = static_cast<std::size_t>(dim) >= cap;
    const bool exhausted = static_cast<std::size_t>(dim) == n;
    const Eigen::Index stride = std::max<Eigen::Index>(4, dim / 8);
    if (static_cast<std::size_t>(dim) >= k &&
        (full || exhausted || dim - last_check >= stride)) {
      last_check = dim;
      current = ritz();
      if (exhausted || current.worst_residual <= threshold) {
        if (exhausted) break;
        if (confirmed && (current.values - *confirmed).cwiseAbs().maxCoeff() <= threshold) break;
        // Inject a random direction to expose eigenvalue copies a single
        // Krylov sequence cannot see, then require convergence again.
        confirmed = current.values;
        if (full || !append(random_unit_vector(n, rng))) break;
        continue;
      }
      if (full) {
        throw ConvergenceError(
            "Lanczos did not converge within " + std::to_string(cap) + " iterations",
            current.worst_residual);
      }
    }
    if (!append(images.col(dim - 1))) {
      current = ritz();
      break;
    }
  }

  SpectrumResult out;
  out.k_used = k;
  out.eigenvalues.assign(current.values.data(), current.values.data() + current.values.size());
  if (cfg.want_vectors) {
    Eigen::MatrixXd vectors = basis.leftCols(dim) * current.vectors;
    for (Eigen::Index c = 0; c < vectors.cols(); ++c) vectors.col(c).normalize();
    normalize_signs(vectors);
    out.eigenvectors = std::move(vectors);
  }
  return out;
}

SpectrumResult top_k_adjacency(const Graph& g, const SolverConfig& cfg) {
  if (g.empty()) throw PreconditionError("graph is empty");
  auto cg = compact(g);
  AdjacencyOperator op(cg.graph);
  SpectrumResult r = lanczos_largest(op, cfg);
  r.matrix_kind = MatrixKind::adjacency;
  return r;
}

SpectrumResult bottom_k_laplacian(const Graph& g, const SolverConfig& cfg) {
  if (g.empty()) throw PreconditionError("graph is empty");
  auto cg = compact(g);
  const double shift = 2.0 * static_cast<double>(cg.graph.max_degree()) + 1.0;
  ShiftedLaplacianOperator op(cg.graph, shift);
  SpectrumResult r = lanczos_largest(op, cfg);
  for (double& value : r.eigenvalues) value = shift - value;
  r.matrix_kind = MatrixKind::laplacian;
  return r;
}

}  // namespace netrobust
