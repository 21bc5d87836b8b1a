#pragma once

// Data-parallel inner loops. Every kernel has a serial reference in
// `kernels::serial` and an OpenMP version in `kernels::omp`. Both compute each
// output entry with the same summation order, so results are bitwise equal
// regardless of the thread count; tests/test_kernels.cpp holds them to that.

#include <cstddef>
#include <functional>
#include <span>

#include "dilkit/matrix.hpp"

namespace dilkit::kernels {

/// Row-major C(m x n) = op(A) * B where op(A) is A (m x k) or, when
/// `adjoint_a`, A* for A stored as (k x m).
struct GemmShape {
  std::size_t m = 0;
  std::size_t k = 0;
  std::size_t n = 0;
  bool adjoint_a = false;
};

/// Fills the Nn x Nn block matrix whose (i, j) block is block_of(i, j).
using BlockSource = std::function<const ComplexMatrix&(std::size_t, std::size_t)>;

namespace serial {
void gemm(GemmShape shape, std::span<const Complex> a, std::span<const Complex> b,
          std::span<Complex> c);
void assemble_blocks(std::size_t grid, std::size_t n, const BlockSource& block_of,
                     ComplexMatrix& out);
}  // namespace serial

namespace omp {
void gemm(GemmShape shape, std::span<const Complex> a, std::span<const Complex> b,
          std::span<Complex> c);
void assemble_blocks(std::size_t grid, std::size_t n, const BlockSource& block_of,
                     ComplexMatrix& out);
}  // namespace omp

/// Picks the OpenMP kernel once the flop count makes threading worthwhile.
void gemm(GemmShape shape, std::span<const Complex> a, std::span<const Complex> b,
          std::span<Complex> c);
void assemble_blocks(std::size_t grid, std::size_t n, const BlockSource& block_of,
                     ComplexMatrix& out);

/// Runs body(i) for i in [0, count), in parallel when `parallel` is set.
/// Callers write only to slot i so the outcome is order-independent.
void for_each_index(std::size_t count, bool parallel,
                    const std::function<void(std::size_t)>& body);

}  // namespace dilkit::kernels
