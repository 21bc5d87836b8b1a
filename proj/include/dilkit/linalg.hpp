#pragma once

#include <cstddef>
#include <vector>

#include "dilkit/matrix.hpp"

namespace dilkit {

/// Global default tolerance. Predicates scale it by max(1, operand norm).
inline constexpr double kDefaultTol = 1e-9;

struct HermitianEig {
  std::vector<double> values;  // ascending
  ComplexMatrix vectors;       // unitary, columns are eigenvectors
};

/// Cyclic complex Jacobi. Throws NonSquare, or NonHermitian when
/// ||M - M*||_F > tol * max(1, ||M||_F).
HermitianEig hermitian_eig(const ComplexMatrix& m, double tol = kDefaultTol);

struct PsdVerdict {
  bool psd = true;
  double min_eigenvalue = 0.0;
  ComplexMatrix witness;  // unit column vector with v* M v = min_eigenvalue
};

PsdVerdict is_psd(const ComplexMatrix& m, double tol = kDefaultTol);
PsdVerdict is_psd(const HermitianEig& eig, double tol = kDefaultTol);

/// Hermitian PSD square root. Throws NotPSD with the minimum eigenvalue as
/// certificate.
ComplexMatrix psd_sqrt(const ComplexMatrix& m, double tol = kDefaultTol);

/// Largest singular value.
double op_norm(const ComplexMatrix& m);

/// Number of eigenvalues above tol * max eigenvalue.
std::size_t numerical_rank(const std::vector<double>& ascending_values, double tol = kDefaultTol);

using BlockGrid = std::vector<std::vector<ComplexMatrix>>;

/// N x N grid of n x n blocks into one Nn x Nn matrix. Throws RaggedBlocks.
ComplexMatrix block_assemble(const BlockGrid& blocks);
BlockGrid block_extract(const ComplexMatrix& m, std::size_t block_size);

}  // namespace dilkit
