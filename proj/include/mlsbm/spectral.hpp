#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace mlsbm {

/// Dense symmetric matrix, row-major storage.
class DenseSymMatrix {
 public:
  explicit DenseSymMatrix(std::size_t n) : n_(n), data_(n * n, 0.0) {}

  std::size_t size() const noexcept { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }

  /// Adds v at (i, j) and (j, i); once on the diagonal.
  void add_symmetric(std::size_t i, std::size_t j, double v) {
    data_[i * n_ + j] += v;
    if (i != j) data_[j * n_ + i] += v;
  }

  std::span<const double> row(std::size_t i) const { return {data_.data() + i * n_, n_}; }
  bool is_zero() const noexcept;
  bool is_symmetric(double tol = 0.0) const noexcept;
  void multiply(std::span<const double> x, std::span<double> y) const;

 private:
  std::size_t n_;
  std::vector<double> data_;
};

struct EigenPairs {
  /// Sorted by decreasing |value|.
  std::vector<double> values;
  /// Unit-norm eigenvectors, vectors[c] pairs with values[c].
  std::vector<std::vector<double>> vectors;
  std::size_t iterations = 0;
  bool converged = false;
};

struct PowerIterationOptions {
  double tolerance = 1e-8;       // on the change of the Ritz (Rayleigh-quotient) values
  std::size_t max_iterations = 1000;
  std::size_t oversample = 2;    // extra block columns beyond the requested count
};

/// Top-k eigenpairs by magnitude via block power iteration with a
/// Rayleigh-Ritz step. Start vectors are a fixed function of the index,
/// so results are reproducible.
EigenPairs top_eigenpairs(const DenseSymMatrix& m, std::size_t k, const PowerIterationOptions& opts = {});

/// Eigen-decomposition of a small symmetric matrix by cyclic Jacobi.
/// Returns values (unsorted) and column eigenvectors in row-major b x b.
void jacobi_eigen(std::vector<double> a, std::size_t b, std::vector<double>& values, std::vector<double>& vecs);

}  // namespace mlsbm
