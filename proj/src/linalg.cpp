#include "dilkit/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "dilkit/error.hpp"
#include "dilkit/kernels.hpp"

namespace dilkit {

namespace {

constexpr int kMaxSweeps = 100;

double off_diagonal_norm(const ComplexMatrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

// Zeroes a(p, q) with the unitary J = diag-phase * real rotation:
//   J(p,p) = c, J(p,q) = s, J(q,p) = -conj(e) s, J(q,q) = conj(e) c
// where e is the phase of a(p, q). a <- J* a J and v <- v J.
void rotate(ComplexMatrix& a, ComplexMatrix& v, std::size_t p, std::size_t q) {
  const Complex apq = a(p, q);
  const double mag = std::abs(apq);
  if (mag == 0.0) return;
  const Complex phase = apq / mag;
  const double theta = (a(q, q).real() - a(p, p).real()) / (2.0 * mag);
  double t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  if (theta < 0.0) t = -t;
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;
  const Complex jpp = c, jpq = s, jqp = -std::conj(phase) * s, jqq = std::conj(phase) * c;

  const std::size_t n = a.rows();
  for (std::size_t k = 0; k < n; ++k) {
    const Complex akp = a(k, p), akq = a(k, q);
    a(k, p) = akp * jpp + akq * jqp;
    a(k, q) = akp * jpq + akq * jqq;
  }
  for (std::size_t k = 0; k < n; ++k) {
    const Complex apk = a(p, k), aqk = a(q, k);
    a(p, k) = std::conj(jpp) * apk + std::conj(jqp) * aqk;
    a(q, k) = std::conj(jpq) * apk + std::conj(jqq) * aqk;
  }
  a(p, q) = a(q, p) = 0.0;
  a(p, p) = a(p, p).real();
  a(q, q) = a(q, q).real();
  for (std::size_t k = 0; k < n; ++k) {
    const Complex vkp = v(k, p), vkq = v(k, q);
    v(k, p) = vkp * jpp + vkq * jqp;
    v(k, q) = vkp * jpq + vkq * jqq;
  }
}

}  // namespace

HermitianEig hermitian_eig(const ComplexMatrix& m, double tol) {
  if (!m.is_square())
    throw Error(ErrorKind::NonSquare, "hermitian_eig needs a square matrix");
  const std::size_t n = m.rows();
  const double fro = m.frobenius_norm();
  const ComplexMatrix madj = m.adjoint();
  if (distance(m, madj) > tol * std::max(1.0, fro))
    throw Error(ErrorKind::NonHermitian, "deviation " + std::to_string(distance(m, madj)));

  ComplexMatrix a = 0.5 * (m + madj);
  ComplexMatrix v = ComplexMatrix::identity(n);
  const double stop = std::numeric_limits<double>::epsilon() * 0.5 * std::max(fro, 1e-300);
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    if (off_diagonal_norm(a) <= stop) break;
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) rotate(a, v, p, q);
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return a(i, i).real() < a(j, j).real();
  });
  HermitianEig out;
  out.values.resize(n);
  out.vectors = ComplexMatrix(n, n);
  for (std::size_t c = 0; c < n; ++c) {
    out.values[c] = a(order[c], order[c]).real();
    for (std::size_t r = 0; r < n; ++r) out.vectors(r, c) = v(r, order[c]);
  }
  return out;
}

PsdVerdict is_psd(const HermitianEig& eig, double tol) {
  PsdVerdict verdict;
  if (eig.values.empty()) return verdict;
  const double scale =
      std::max({1.0, std::abs(eig.values.front()), std::abs(eig.values.back())});
  verdict.min_eigenvalue = eig.values.front();
  verdict.psd = verdict.min_eigenvalue >= -tol * scale;
  verdict.witness = eig.vectors.block(0, 0, eig.vectors.rows(), 1);
  return verdict;
}

PsdVerdict is_psd(const ComplexMatrix& m, double tol) { return is_psd(hermitian_eig(m, tol), tol); }

ComplexMatrix psd_sqrt(const ComplexMatrix& m, double tol) {
  const HermitianEig eig = hermitian_eig(m, tol);
  const PsdVerdict v = is_psd(eig, tol);
  if (!v.psd)
    throw Error(ErrorKind::NotPSD, "min eigenvalue " + std::to_string(v.min_eigenvalue),
                v.min_eigenvalue);
  // Eigenvalues at round-off level are zero; their square roots would be ~1e-8.
  const double floor = 64.0 * std::numeric_limits<double>::epsilon() *
                       std::max(1.0, eig.values.empty() ? 0.0 : std::abs(eig.values.back()));
  ComplexMatrix scaled = eig.vectors;
  for (std::size_t c = 0; c < scaled.cols(); ++c) {
    const double root = eig.values[c] <= floor ? 0.0 : std::sqrt(eig.values[c]);
    for (std::size_t r = 0; r < scaled.rows(); ++r) scaled(r, c) *= root;
  }
  ComplexMatrix s = scaled * eig.vectors.adjoint();
  return 0.5 * (s + s.adjoint());
}

double op_norm(const ComplexMatrix& m) {
  if (m.empty()) return 0.0;
  const ComplexMatrix gram = m.rows() <= m.cols() ? m * m.adjoint() : adjoint_times(m, m);
  const HermitianEig eig = hermitian_eig(0.5 * (gram + gram.adjoint()));
  return std::sqrt(std::max(eig.values.back(), 0.0));
}

std::size_t numerical_rank(const std::vector<double>& ascending_values, double tol) {
  if (ascending_values.empty()) return 0;
  const double top = ascending_values.back();
  if (top <= 0.0) return 0;
  return static_cast<std::size_t>(std::count_if(ascending_values.begin(), ascending_values.end(),
                                                [&](double x) { return x > tol * top; }));
}

ComplexMatrix block_assemble(const BlockGrid& blocks) {
  const std::size_t grid = blocks.size();
  if (grid == 0) return {};
  const std::size_t n = blocks.front().empty() ? 0 : blocks.front().front().rows();
  for (const auto& row : blocks) {
    if (row.size() != grid) throw Error(ErrorKind::RaggedBlocks, "grid is not square");
    for (const auto& b : row)
      if (b.rows() != n || b.cols() != n)
        throw Error(ErrorKind::RaggedBlocks, "blocks must all be n x n");
  }
  ComplexMatrix out;
  kernels::assemble_blocks(
      grid, n, [&](std::size_t i, std::size_t j) -> const ComplexMatrix& { return blocks[i][j]; },
      out);
  return out;
}

BlockGrid block_extract(const ComplexMatrix& m, std::size_t block_size) {
  if (block_size == 0 || !m.is_square() || m.rows() % block_size != 0)
    throw Error(ErrorKind::RaggedBlocks, "matrix does not split into square blocks");
  const std::size_t grid = m.rows() / block_size;
  BlockGrid out(grid, std::vector<ComplexMatrix>(grid));
  for (std::size_t i = 0; i < grid; ++i)
    for (std::size_t j = 0; j < grid; ++j)
      out[i][j] = m.block(i * block_size, j * block_size, block_size, block_size);
  return out;
}

}  // namespace dilkit
