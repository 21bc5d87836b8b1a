#pragma once

// Shared fixtures for the test binaries. Eigen appears only here, as an
// eigenvalue oracle independent of the library's Jacobi solver.

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <optional>
#include <random>
#include <vector>

#include "dilkit/applications.hpp"
#include "dilkit/error.hpp"

namespace testing_support {

using dilkit::Complex;
using dilkit::ComplexMatrix;

/// Kind of the dilkit::Error thrown by f, or nullopt if none.
template <class F>
std::optional<dilkit::ErrorKind> error_kind_of(F&& f) {
  try {
    f();
  } catch (const dilkit::Error& e) {
    return e.kind();
  }
  return std::nullopt;
}

inline ComplexMatrix random_matrix(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  ComplexMatrix m(rows, cols);
  for (auto& z : m.data()) z = {g(rng), g(rng)};
  return m;
}

inline ComplexMatrix random_hermitian(std::size_t n, std::mt19937_64& rng) {
  const ComplexMatrix a = random_matrix(n, n, rng);
  return 0.5 * (a + a.adjoint());
}

inline ComplexMatrix random_unitary(std::size_t n, std::mt19937_64& rng) {
  // Gram-Schmidt on a Gaussian matrix.
  ComplexMatrix q = random_matrix(n, n, rng);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < j; ++k) {
      Complex dot = 0.0;
      for (std::size_t i = 0; i < n; ++i) dot += std::conj(q(i, k)) * q(i, j);
      for (std::size_t i = 0; i < n; ++i) q(i, j) -= dot * q(i, k);
    }
    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) norm += std::norm(q(i, j));
    norm = std::sqrt(norm);
    for (std::size_t i = 0; i < n; ++i) q(i, j) /= norm;
  }
  return q;
}

inline Eigen::MatrixXcd to_eigen(const ComplexMatrix& m) {
  Eigen::MatrixXcd e(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) e(i, j) = m(i, j);
  return e;
}

/// Ascending eigenvalues of a Hermitian matrix, computed by Eigen.
inline std::vector<double> oracle_eigenvalues(const ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(to_eigen(m), Eigen::EigenvaluesOnly);
  const auto& v = solver.eigenvalues();
  return std::vector<double>(v.data(), v.data() + v.size());
}

inline double oracle_min_eigenvalue(const ComplexMatrix& m) { return oracle_eigenvalues(m).front(); }

inline double oracle_op_norm(const ComplexMatrix& m) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(to_eigen(m));
  return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
}

inline ComplexMatrix block_gram(const dilkit::AKernel& k) {
  dilkit::BlockGrid grid(k.size(), std::vector<ComplexMatrix>(k.size()));
  for (std::size_t s = 0; s < k.size(); ++s)
    for (std::size_t t = 0; t < k.size(); ++t) grid[s][t] = k(s, t);
  return dilkit::block_assemble(grid);
}

/// A unitary representation of Z_k: pi(g^j) = W D^j W* with D a diagonal of
/// k-th roots of unity.
inline std::vector<ComplexMatrix> cyclic_representation(std::size_t k, std::size_t dim,
                                                         std::mt19937_64& rng) {
  const ComplexMatrix w = random_unitary(dim, rng);
  std::uniform_int_distribution<std::size_t> pick(0, k - 1);
  std::vector<Complex> diag;
  for (std::size_t i = 0; i < dim; ++i)
    diag.push_back(std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(pick(rng)) / k));
  std::vector<ComplexMatrix> out;
  for (std::size_t j = 0; j < k; ++j) {
    std::vector<Complex> dj;
    for (auto z : diag) dj.push_back(std::pow(z, static_cast<double>(j)));
    out.push_back(w * ComplexMatrix::diagonal(std::span<const Complex>(dj)) * w.adjoint());
  }
  return out;
}

/// omega(s) = V0* pi(s) V0 for a representation pi given by its values.
inline dilkit::AFunction synthesize(const dilkit::FiniteStarSemigroup& s,
                                    const std::vector<ComplexMatrix>& pi, const ComplexMatrix& v0) {
  std::vector<ComplexMatrix> values;
  for (const auto& p : pi) values.push_back(dilkit::adjoint_times(v0, p * v0));
  return dilkit::make_afunction(s, std::move(values));
}

/// The defining *-representation of the matrix-unit semigroup on C^m
/// amplified by C^mult: e_ij -> E_ij (x) I, 0 -> 0.
inline std::vector<ComplexMatrix> matrix_unit_representation(std::size_t m, std::size_t mult) {
  std::vector<ComplexMatrix> out(1 + m * m, ComplexMatrix(m * mult, m * mult));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      ComplexMatrix e(m, m);
      e(i, j) = 1.0;
      out[dilkit::builtin::matrix_unit(m, i, j)] = dilkit::kron(e, ComplexMatrix::identity(mult));
    }
  return out;
}

/// Random CP map M_m -> M_n with `kraus` Kraus operators.
inline dilkit::CPMap random_cp_map(std::size_t m, std::size_t n, std::size_t kraus,
                                   std::mt19937_64& rng) {
  std::vector<ComplexMatrix> ops;
  for (std::size_t k = 0; k < kraus; ++k) ops.push_back(random_matrix(m, n, rng));
  return dilkit::CPMap::from_kraus(ops);
}

/// Random contraction with operator norm drawn from [lo, hi].
inline ComplexMatrix random_contraction(std::size_t d, std::mt19937_64& rng, double lo = 0.1,
                                        double hi = 0.99) {
  ComplexMatrix t = random_matrix(d, d, rng);
  std::uniform_real_distribution<double> u(lo, hi);
  const double target = u(rng);
  return (target / oracle_op_norm(t)) * t;
}

}  // namespace testing_support
