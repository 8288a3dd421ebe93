#pragma once

// Test-only generators and independent oracles. Nothing here calls into the
// library's selection or update code, so the oracles can be compared against
// it directly.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "greedex/greedex.hpp"

namespace testsupport {

using Dense = std::vector<double>;

struct Gen {
  std::mt19937_64 rng;
  explicit Gen(std::uint64_t seed) : rng(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(rng); }
  std::size_t index(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
  }

  Dense gaussian(std::size_t dim) {
    Dense v(dim);
    for (auto& x : v) x = normal();
    return v;
  }

  Dense unit(std::size_t dim) {
    Dense v = gaussian(dim);
    double n = 0.0;
    for (double x : v) n += x * x;
    n = std::sqrt(n);
    for (auto& x : v) x /= n;
    return v;
  }

  /// Sparse vector with up to `max_support` nonzeros on indices 1..max_index.
  greedex::SparseVector sparse(std::size_t max_support, std::uint64_t max_index, std::uint32_t block = 0) {
    const std::size_t s = index(1, max_support);
    std::vector<greedex::Entry> entries;
    std::vector<std::uint64_t> used;
    while (entries.size() < s) {
      const std::uint64_t i = index(1, max_index);
      if (std::find(used.begin(), used.end(), i) != used.end()) continue;
      used.push_back(i);
      entries.push_back({greedex::CoordId{block, i}, uniform(-2.0, 2.0)});
    }
    return greedex::SparseVector(std::move(entries));
  }

  /// Spanning atom set in R^dim: the first `dim` atoms are a perturbed basis.
  std::vector<Dense> spanning_atoms(std::size_t dim, std::size_t count) {
    std::vector<Dense> atoms;
    for (std::size_t k = 0; k < count; ++k) {
      Dense a = gaussian(dim);
      if (k < dim) a[k] += 3.0;
      atoms.push_back(a);
    }
    return atoms;
  }
};

inline std::vector<greedex::SparseVector> to_sparse(const std::vector<Dense>& atoms) {
  std::vector<greedex::SparseVector> out;
  for (const auto& a : atoms) out.push_back(greedex::from_dense(a));
  return out;
}

inline double dense_norm(const Dense& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

// Reference greedy expansion on a finite symmetrized dictionary, dense
// arithmetic, exact sup selection. Candidates are scanned as +a_1, -a_1, +a_2,
// ... and only a strictly larger inner product replaces the incumbent.
inline std::vector<double> reference_residuals(Dense f, std::vector<Dense> atoms,
                                               double (*coef)(std::size_t), std::size_t steps) {
  for (auto& a : atoms) {
    const double n = dense_norm(a);
    for (auto& x : a) x /= n;
  }
  std::vector<double> out;
  out.reserve(steps);
  for (std::size_t m = 1; m <= steps; ++m) {
    double best = -1.0;
    const Dense* phi = nullptr;
    double sign = 1.0;
    for (const auto& a : atoms) {
      double ip = 0.0;
      for (std::size_t i = 0; i < f.size(); ++i) ip += f[i] * a[i];
      if (ip > best) best = ip, phi = &a, sign = 1.0;
      if (-ip > best) best = -ip, phi = &a, sign = -1.0;
    }
    const double c = coef(m);
    for (std::size_t i = 0; i < f.size(); ++i) f[i] -= c * sign * (*phi)[i];
    out.push_back(dense_norm(f));
  }
  return out;
}

inline double harmonic(std::size_t n) { return 1.0 / static_cast<double>(n); }
inline double power08(std::size_t n) { return std::pow(static_cast<double>(n), -0.8); }

/// sqrt(sum_{j' > j} (k + j') t^(2(k + j'))), computed term by term.
inline double analytic_tail(double t, unsigned k, unsigned groups, unsigned j) {
  double s = 0.0;
  for (unsigned g = j + 1; g < groups; ++g) {
    double p = 1.0;
    for (unsigned e = 0; e < 2 * (k + g); ++e) p *= t;
    s += (k + g) * p;
  }
  return std::sqrt(s);
}

/// Smallest k > 1 with t^k < 1/sqrt(k) and k > t^2/(1 - t^2), by plain scan
/// with repeated multiplication.
inline unsigned scan_k(double t) {
  for (unsigned k = 2;; ++k) {
    double p = 1.0;
    for (unsigned e = 0; e < k; ++e) p *= t;
    if (p * p * k < 1.0 && k * (1.0 - t * t) > t * t) return k;
  }
}

}  // namespace testsupport
