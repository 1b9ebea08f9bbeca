#include "mlsbm/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mlsbm/errors.hpp"
#include "mlsbm/rng.hpp"

namespace mlsbm {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double start_entry(std::size_t i, std::size_t c, std::size_t salt) {
  const std::uint64_t h = mix64(mix64(i + 1) ^ mix64((c + 1) * 0x100000001b3ULL + salt));
  return static_cast<double>(h >> 11) * 0x1.0p-53 * 2.0 - 1.0;
}

// Modified Gram-Schmidt in column order; columns that collapse are replaced
// by fresh deterministic vectors.
void orthonormalize(std::vector<std::vector<double>>& cols) {
  const std::size_t n = cols.empty() ? 0 : cols[0].size();
  for (std::size_t c = 0; c < cols.size(); ++c) {
    for (std::size_t salt = 0;; ++salt) {
      auto& v = cols[c];
      const double before = std::sqrt(dot(v, v));
      for (std::size_t p = 0; p < c; ++p) {
        const double proj = dot(v, cols[p]);
        for (std::size_t i = 0; i < n; ++i) v[i] -= proj * cols[p][i];
      }
      const double norm = std::sqrt(dot(v, v));
      if (norm > 1e-10 * std::max(before, 1e-300) && norm > 0.0) {
        for (double& x : v) x /= norm;
        break;
      }
      if (salt > 16) throw std::runtime_error("orthonormalize: cannot complete basis");
      for (std::size_t i = 0; i < n; ++i) v[i] = start_entry(i, c, salt + 1);
    }
  }
}

}  // namespace

bool DenseSymMatrix::is_zero() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return v == 0.0; });
}

bool DenseSymMatrix::is_symmetric(double tol) const noexcept {
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = i + 1; j < n_; ++j)
      if (std::abs(data_[i * n_ + j] - data_[j * n_ + i]) > tol) return false;
  return true;
}

void DenseSymMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  for (std::size_t i = 0; i < n_; ++i) y[i] = dot(row(i), x);
}

void jacobi_eigen(std::vector<double> a, std::size_t b, std::vector<double>& values, std::vector<double>& vecs) {
  vecs.assign(b * b, 0.0);
  for (std::size_t i = 0; i < b; ++i) vecs[i * b + i] = 1.0;
  auto at = [&](std::size_t i, std::size_t j) -> double& { return a[i * b + j]; };
  double scale = 0.0;
  for (double v : a) scale = std::max(scale, std::abs(v));
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < b; ++p)
      for (std::size_t q = p + 1; q < b; ++q) off = std::max(off, std::abs(at(p, q)));
    if (off <= 1e-15 * scale || off == 0.0) break;
    for (std::size_t p = 0; p < b; ++p) {
      for (std::size_t q = p + 1; q < b; ++q) {
        if (at(p, q) == 0.0) continue;
        const double theta = (at(q, q) - at(p, p)) / (2.0 * at(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (std::size_t k = 0; k < b; ++k) {
          const double akp = at(k, p), akq = at(k, q);
          at(k, p) = c * akp - s * akq;
          at(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < b; ++k) {
          const double apk = at(p, k), aqk = at(q, k);
          at(p, k) = c * apk - s * aqk;
          at(q, k) = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < b; ++k) {
          const double vkp = vecs[k * b + p], vkq = vecs[k * b + q];
          vecs[k * b + p] = c * vkp - s * vkq;
          vecs[k * b + q] = s * vkp + c * vkq;
        }
      }
    }
  }
  values.resize(b);
  for (std::size_t i = 0; i < b; ++i) values[i] = at(i, i);
}

EigenPairs top_eigenpairs(const DenseSymMatrix& m, std::size_t k, const PowerIterationOptions& opts) {
  const std::size_t n = m.size();
  if (k == 0 || k > n) throw ValidationError("top_eigenpairs: need 1 <= k <= n");
  const std::size_t b = std::min(n, k + opts.oversample);

  std::vector<std::vector<double>> q(b, std::vector<double>(n));
  for (std::size_t c = 0; c < b; ++c)
    for (std::size_t i = 0; i < n; ++i) q[c][i] = start_entry(i, c, 0);
  orthonormalize(q);

  std::vector<std::vector<double>> z(b, std::vector<double>(n));
  std::vector<double> h(b * b), ritz, w, prev(k, 0.0);
  std::vector<std::size_t> order(b);
  EigenPairs out;

  for (std::size_t iter = 1; iter <= opts.max_iterations; ++iter) {
    for (std::size_t c = 0; c < b; ++c) m.multiply(q[c], z[c]);
    for (std::size_t r = 0; r < b; ++r)
      for (std::size_t c = 0; c < b; ++c) h[r * b + c] = 0.5 * (dot(q[r], z[c]) + dot(q[c], z[r]));
    jacobi_eigen(h, b, ritz, w);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return std::abs(ritz[x]) > std::abs(ritz[y]); });

    // Ritz vectors of the current basis, in magnitude order.
    std::vector<std::vector<double>> y(b, std::vector<double>(n, 0.0));
    for (std::size_t c = 0; c < b; ++c)
      for (std::size_t r = 0; r < b; ++r) {
        const double coef = w[r * b + order[c]];
        if (coef == 0.0) continue;
        for (std::size_t i = 0; i < n; ++i) y[c][i] += coef * q[r][i];
      }

    const double scale = std::max(std::abs(ritz[order[0]]), 1e-300);
    bool done = iter > 1;
    for (std::size_t c = 0; c < k; ++c) {
      const double v = ritz[order[c]];
      if (std::abs(v - prev[c]) > opts.tolerance * scale) done = false;
      prev[c] = v;
    }
    out.iterations = iter;
    if (done || iter == opts.max_iterations || b == n) {
      out.converged = done || b == n;
      out.values.assign(prev.begin(), prev.end());
      out.vectors.assign(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(k));
      for (auto& v : out.vectors) {
        const double norm = std::sqrt(dot(v, v));
        if (norm > 0) for (double& x : v) x /= norm;
      }
      return out;
    }

    // Next basis: M applied to the Ritz vectors (= M Q W), re-orthonormalized.
    for (std::size_t c = 0; c < b; ++c) {
      std::fill(y[c].begin(), y[c].end(), 0.0);
      for (std::size_t r = 0; r < b; ++r) {
        const double coef = w[r * b + order[c]];
        if (coef == 0.0) continue;
        for (std::size_t i = 0; i < n; ++i) y[c][i] += coef * z[r][i];
      }
    }
    z.swap(y);
    q.swap(z);
    orthonormalize(q);
  }
  return out;
}

}  // namespace mlsbm
