#include "dilkit/kernels.hpp"

#include <exception>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace dilkit::kernels {

namespace {

constexpr std::size_t kParallelFlops = 1u << 15;

inline Complex load_a(const GemmShape& s, std::span<const Complex> a, std::size_t i,
                      std::size_t p) {
  return s.adjoint_a ? std::conj(a[p * s.m + i]) : a[i * s.k + p];
}

inline void gemm_row(const GemmShape& s, std::span<const Complex> a,
                     std::span<const Complex> b, std::span<Complex> c, std::size_t i) {
  Complex* out = c.data() + i * s.n;
  for (std::size_t j = 0; j < s.n; ++j) out[j] = Complex{};
  for (std::size_t p = 0; p < s.k; ++p) {
    const Complex aip = load_a(s, a, i, p);
    if (aip == Complex{}) continue;
    const Complex* brow = b.data() + p * s.n;
    for (std::size_t j = 0; j < s.n; ++j) out[j] += aip * brow[j];
  }
}

inline void copy_block_row(std::size_t grid, std::size_t n, const BlockSource& block_of,
                           ComplexMatrix& out, std::size_t bi) {
  for (std::size_t bj = 0; bj < grid; ++bj) {
    const ComplexMatrix& blk = block_of(bi, bj);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) out(bi * n + r, bj * n + c) = blk(r, c);
  }
}

}  // namespace

namespace serial {

void gemm(GemmShape shape, std::span<const Complex> a, std::span<const Complex> b,
          std::span<Complex> c) {
  for (std::size_t i = 0; i < shape.m; ++i) gemm_row(shape, a, b, c, i);
}

void assemble_blocks(std::size_t grid, std::size_t n, const BlockSource& block_of,
                     ComplexMatrix& out) {
  out = ComplexMatrix(grid * n, grid * n);
  for (std::size_t bi = 0; bi < grid; ++bi) copy_block_row(grid, n, block_of, out, bi);
}

}  // namespace serial

namespace omp {

void gemm(GemmShape shape, std::span<const Complex> a, std::span<const Complex> b,
          std::span<Complex> c) {
  const auto m = static_cast<std::ptrdiff_t>(shape.m);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < m; ++i) gemm_row(shape, a, b, c, static_cast<std::size_t>(i));
}

void assemble_blocks(std::size_t grid, std::size_t n, const BlockSource& block_of,
                     ComplexMatrix& out) {
  out = ComplexMatrix(grid * n, grid * n);
  const auto g = static_cast<std::ptrdiff_t>(grid);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t bi = 0; bi < g; ++bi)
    copy_block_row(grid, n, block_of, out, static_cast<std::size_t>(bi));
}

}  // namespace omp

void gemm(GemmShape shape, std::span<const Complex> a, std::span<const Complex> b,
          std::span<Complex> c) {
  if (shape.m * shape.n * shape.k >= kParallelFlops)
    omp::gemm(shape, a, b, c);
  else
    serial::gemm(shape, a, b, c);
}

void assemble_blocks(std::size_t grid, std::size_t n, const BlockSource& block_of,
                     ComplexMatrix& out) {
  if (grid * grid * n * n >= kParallelFlops)
    omp::assemble_blocks(grid, n, block_of, out);
  else
    serial::assemble_blocks(grid, n, block_of, out);
}

void for_each_index(std::size_t count, bool parallel,
                    const std::function<void(std::size_t)>& body) {
  if (!parallel || count < 2) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  // Exceptions cannot leave an OpenMP region; park them per slot and rethrow
  // the lowest-index one so failures are reported deterministically.
  std::vector<std::exception_ptr> failures(count);
  const auto n = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      failures[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (auto& f : failures)
    if (f) std::rethrow_exception(f);
}

}  // namespace dilkit::kernels
