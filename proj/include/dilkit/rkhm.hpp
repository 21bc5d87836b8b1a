#pragma once

// Reproducing kernel Hilbert modules over M_n(C) for kernels on a finite base.
//
// The module E_K is modelled through the Gram block matrix G = [K(s,t)]. A
// coefficient column c (one n x n block per base point) stands for the
// element sum_s K_s c_s. Writing G = U diag(lambda) U* and keeping the
// eigenpairs above tol * lambda_max, the reducer R = diag(sqrt(lambda)) U*
// sends c to reduced coordinates x = R c, an r x n matrix, with
// <c, d>_K = c* G d = (Rc)*(Rd). Columns with G c = 0 have x = 0, so the
// quotient by null elements is automatic and E_K is the module of r x n
// matrices with <x, y> = x* y and right action x a.
//
// Evaluation convention: F(s) := <F, K_s>_K, so the element K_t b evaluates
// to b* K(t, s).

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dilkit/linalg.hpp"
#include "dilkit/matrix.hpp"
#include "dilkit/semigroup.hpp"

namespace dilkit {

struct AKernel {
  std::vector<std::string> base;
  std::size_t n = 0;
  std::vector<ComplexMatrix> blocks;  // row-major over base x base

  /// Throws RaggedBlocks unless blocks has |base|^2 entries of size n x n.
  static AKernel from_blocks(std::vector<std::string> base, std::size_t n,
                             std::vector<ComplexMatrix> blocks);

  std::size_t size() const noexcept { return base.size(); }
  const ComplexMatrix& operator()(std::size_t s, std::size_t t) const {
    return blocks[s * size() + t];
  }
  std::optional<std::size_t> index_of(const std::string& label) const;
};

struct AFunction {
  std::vector<std::string> base;
  std::size_t n = 0;
  std::vector<ComplexMatrix> values;

  std::size_t size() const noexcept { return base.size(); }
  const ComplexMatrix& operator()(std::size_t s) const { return values[s]; }
};

/// Coefficient column, stored stacked as an (N n) x n matrix.
struct ModuleElement {
  ComplexMatrix column;

  static ModuleElement zero(std::size_t points, std::size_t n);
  /// K_t b: block t equals b, others zero.
  static ModuleElement section(std::size_t points, std::size_t t, const ComplexMatrix& b);
  static ModuleElement from_blocks(std::span<const ComplexMatrix> blocks);

  ComplexMatrix coefficient(std::size_t s, std::size_t n) const {
    return column.block(s * n, 0, n, n);
  }
};

class ModuleSpace {
 public:
  ModuleSpace() = default;  // empty module; use build()

  /// Throws NonHermitianKernel or NotPositiveDefinite (certificate = min eig).
  static ModuleSpace build(AKernel kernel, double tol = kDefaultTol);

  const AKernel& kernel() const noexcept { return kernel_; }
  const ComplexMatrix& gram() const noexcept { return gram_; }
  const HermitianEig& eig() const noexcept { return eig_; }
  std::size_t rank() const noexcept { return rank_; }
  std::size_t points() const noexcept { return kernel_.size(); }
  std::size_t n() const noexcept { return kernel_.n; }
  double tol() const noexcept { return tol_; }

  /// r x Nn reducer R and its right inverse R+ (Nn x r).
  const ComplexMatrix& reducer() const noexcept { return reducer_; }
  const ComplexMatrix& pseudo_inverse() const noexcept { return pinv_; }

  /// Reduced coordinates R c of an element (r x n).
  ComplexMatrix coordinates(const ModuleElement& c) const;
  /// Reduced coordinates of K_s (the s-th block column of R).
  ComplexMatrix section_coordinates(std::size_t s) const;

 private:
  AKernel kernel_;
  ComplexMatrix gram_;
  HermitianEig eig_;
  std::size_t rank_ = 0;
  ComplexMatrix reducer_;
  ComplexMatrix pinv_;
  double tol_ = kDefaultTol;
};

/// K(s, t) = omega(s* t) over the elements of S.
AKernel kernel_from_omega(const FiniteStarSemigroup& s, const AFunction& omega);

/// omega as an A-function over the semigroup's labels.
AFunction make_afunction(const FiniteStarSemigroup& s, std::vector<ComplexMatrix> values);

/// Max over pairs of ||K(s,t) - K(t,s)*|| (operator norm).
double check_hermitian_symmetry(const AKernel& kernel);

struct PdVerdict {
  bool positive_definite = true;
  double min_eigenvalue = 0.0;
  ModuleElement witness;  // block column a with a* G a = min eigenvalue (as a vector form)
};

/// Decides positive definiteness on the whole (finite) base through the
/// block Gram matrix. Throws NonHermitianKernel.
PdVerdict check_positive_definite(const AKernel& kernel, double tol = kDefaultTol);

ModuleSpace build_module(AKernel kernel, double tol = kDefaultTol);

/// <c, d>_K = c* G d. Throws BaseMismatch.
ComplexMatrix inner_product(const ModuleSpace& m, const ModuleElement& c,
                            const ModuleElement& d);

/// F(s) = <F, K_s>_K for F = sum_t K_t c_t. Throws UnknownPoint.
ComplexMatrix evaluate(const ModuleSpace& m, const ModuleElement& c, std::size_t s);
AFunction evaluate_all(const ModuleSpace& m, const ModuleElement& c);

struct MembershipResult {
  bool in_module = false;
  ModuleElement representative;  // least-squares, minimal norm
  double residual = 0.0;
  double norm = 0.0;  // ||F||_K when in the module
};

MembershipResult membership(const ModuleSpace& m, const AFunction& f, double tol = kDefaultTol);

struct DominationResult {
  bool finite = false;
  double lambda = 0.0;  // smallest lambda with [F(s_k)* F(s_l)] <= lambda [K(s_k, s_l)]
  double range_residual = 0.0;
};

/// Bisection against a PSD oracle, run in reduced coordinates.
DominationResult domination_test(const ModuleSpace& m, const AFunction& f,
                                 double tol = kDefaultTol);

/// The unit-constant form: [F(s_k)* F(s_l)] <= [K(s_k, s_l)] as block matrices.
bool literal_domination(const ModuleSpace& m, const AFunction& f, double tol = kDefaultTol);

/// Max over base pairs and sample pairs of
/// ||<K_s a, K_t b>_K - a* K(s,t) b||_F, computed in reduced coordinates.
double kolmogorov_check(const ModuleSpace& m, std::span<const ComplexMatrix> samples);

/// The kernel (i, j) -> <xi_i, xi_j> of a family of module elements.
AKernel module_as_kernel(const ModuleSpace& m, std::span<const ModuleElement> elements);

/// Matrix units E_ij of M_n followed by `extra` seeded unit-Frobenius-norm
/// random matrices.
std::vector<ComplexMatrix> sample_matrices(std::size_t n, std::size_t extra, unsigned seed);

}  // namespace dilkit
