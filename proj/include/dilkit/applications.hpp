#pragma once

// The engine specialized to classical dilation problems, each paired with a
// textbook construction that serves as a cross-check.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "dilkit/dilation.hpp"

namespace dilkit {

// ---- completely positive maps -------------------------------------------

/// Linear map M_m -> M_n given on matrix units: action[i*m + j] = omega(e_ij).
struct CPMap {
  std::size_t m = 0;
  std::size_t n = 0;
  std::vector<ComplexMatrix> action;

  /// Throws ShapeError on a wrong count or block size.
  static CPMap from_action(std::size_t m, std::size_t n, std::vector<ComplexMatrix> action);
  /// x -> sum_k A_k* x A_k for m x n operators A_k.
  static CPMap from_kraus(std::span<const ComplexMatrix> kraus);

  const ComplexMatrix& operator()(std::size_t i, std::size_t j) const { return action[i * m + j]; }
  /// mn x mn, block (i, j) = omega(e_ij).
  ComplexMatrix choi() const;
  ComplexMatrix apply(const ComplexMatrix& x) const;
};

CPMap identity_channel(std::size_t m);
CPMap transpose_map(std::size_t m);
/// x -> p x + (1 - p) tr(x) I / m.
CPMap depolarizing_channel(std::size_t m, double p);

/// omega on the matrix-unit semigroup: omega(0) = 0, omega(e_ij) = action.
AFunction matrix_unit_omega(const CPMap& map, const FiniteStarSemigroup& s);

struct CPCheck {
  bool completely_positive = false;
  bool hermitian = true;  // Choi Hermitian within tol
  double min_choi_eigenvalue = 0.0;
  ComplexMatrix witness;  // eigenvector of the minimum eigenvalue
  bool kernel_pd = false;  // same question asked of the matrix-unit kernel
  double kernel_min_eigenvalue = 0.0;
  bool consistent() const { return completely_positive == kernel_pd; }
};

CPCheck cp_check(const CPMap& map, double tol = kDefaultTol);

struct StinespringResult {
  DilationTriple framework;
  std::vector<ComplexMatrix> kraus;  // m x n
  std::size_t input_dim = 0;  // m
  std::size_t choi_rank = 0;
  std::size_t module_rank = 0;  // = m * choi_rank: one copy of C^m per Kraus operator
  double framework_error = 0.0;     // max ||omega(x) - sum x_ij V* Phi(e_ij) V||
  double kraus_error = 0.0;         // max ||omega(x) - sum A_k* x A_k||
  double route_disagreement = 0.0;  // between the two reconstructions
  bool rank_consistent() const;
};

/// Throws NotCP.
StinespringResult stinespring(const CPMap& map, double tol = kDefaultTol, unsigned seed = 0,
                              std::size_t trials = 8);

// ---- POVMs ----------------------------------------------------------------

/// Effects F({x}) on the atoms of an m-point outcome set.
struct POVM {
  std::size_t d = 0;
  std::vector<ComplexMatrix> effects;
};

/// F_x = (2/3)|psi_x><psi_x| with psi_x = (cos 2 pi x/3, sin 2 pi x/3).
POVM trine_povm();

/// omega(Delta) = sum_{x in Delta} F({x}) over intersection_semigroup(m).
AFunction povm_omega(const POVM& povm, const FiniteStarSemigroup& s);

struct NaimarkResult {
  DilationTriple framework;
  std::size_t framework_dimension = 0;
  std::size_t oracle_dimension = 0;  // sum_x rank F({x})
  double projection_error = 0.0;     // max ||Phi^2 - Phi|| + ||Phi - Phi*||
  double multiplicativity_error = 0.0;
  double additivity_error = 0.0;  // Phi(D u D') = Phi(D) + Phi(D') for disjoint D, D'
  double isometry_error = 0.0;    // ||V*V - I||
  double reconstruction_error = 0.0;
  double oracle_error = 0.0;  // same identity through the block oracle
};

/// Throws NotPOVM.
NaimarkResult naimark(const POVM& povm, double tol = kDefaultTol);

// ---- contractions ---------------------------------------------------------

struct ContractionResult {
  ComplexMatrix u;  // d(2N+1) x d(2N+1), H is the first block
  double unitarity_error = 0.0;
  double compression_error = 0.0;  // max over |k| <= N of ||P U^k P - T^(k)||
  PdVerdict window;                // Toeplitz kernel on {-N..N}
};

/// Throws NotContraction.
ContractionResult szn_contraction(const ComplexMatrix& t, std::size_t window,
                                  double tol = kDefaultTol);

/// K(i, j) = T^(j-i) on {-N..N}, negative powers meaning T*^|k|.
AKernel toeplitz_window_kernel(const ComplexMatrix& t, std::size_t window);

// ---- moments --------------------------------------------------------------

/// Moments gamma_k for multi-indices k in {0..cap}^d, row-major with the
/// last axis fastest; each value n x n.
struct MomentData {
  std::size_t d = 1;
  std::size_t n = 1;
  std::size_t cap = 0;
  std::vector<ComplexMatrix> values;

  const ComplexMatrix& at(std::span<const std::size_t> k) const;
};

/// Scalar moments of sum_j w_j delta_{x_j} on the line up to degree cap.
MomentData moments_of_atoms(std::span<const double> atoms, std::span<const double> weights,
                            std::size_t cap);

struct MomentResult {
  PsdVerdict hankel;
  std::vector<double> radii;  // one per axis
};

/// Throws OddData, WindowOverflow (window defaults to cap / 2).
MomentResult hamburger(const MomentData& data, double tol = kDefaultTol,
                       std::optional<std::size_t> window = std::nullopt);
MomentResult multi_hamburger(const MomentData& data, double tol = kDefaultTol,
                             std::optional<std::size_t> window = std::nullopt);

// ---- subnormality ---------------------------------------------------------

struct SubnormalityResult {
  bool passes_all = true;
  std::optional<std::size_t> failing_window;
  double min_eigenvalue = 0.0;  // at the failing window, else the smallest seen
  std::vector<double> window_min_eigenvalues;
};

/// Kernel on {(p, q) : p + q <= w}: K((p,q),(p',q')) = T*^(q+p') T^(p+q').
AKernel subnormality_window_kernel(const ComplexMatrix& t, std::size_t w);

SubnormalityResult subnormality_kernel(const ComplexMatrix& t, std::size_t window,
                                       double tol = kDefaultTol);

}  // namespace dilkit
