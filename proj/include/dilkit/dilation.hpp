#pragma once

// Translation *-representations on E_omega and the dilation triple
// (E_omega, Phi, V) with omega(s) = V* Phi(s) V.

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "dilkit/rkhm.hpp"
#include "dilkit/semigroup.hpp"

namespace dilkit {

/// Phi(s) on reduced coordinates: the map K_t a -> K_{st} a.
struct TranslationOperator {
  Element s = 0;
  ComplexMatrix matrix;          // r x r
  ComplexMatrix adjoint_matrix;  // matrix*
  bool well_defined = true;
  /// ||R P_s (I - R+R)||^2 / ||R P_s||^2, the leak of null elements.
  double null_leak = 0.0;
  double norm = 0.0;
  ModuleElement witness;  // null column c with G P_s c != 0 when ill-defined
};

/// Works for any kernel on the element set of S (invariant or not); S acts
/// on the base by left multiplication.
TranslationOperator translation_operator(const ModuleSpace& m, const FiniteStarSemigroup& s,
                                         Element element);

/// Phi(s) for every s, evaluated concurrently; order of the result is by s.
std::vector<TranslationOperator> translation_table(const ModuleSpace& m,
                                                   const FiniteStarSemigroup& s,
                                                   bool parallel = true);

struct ConditionDSequence {
  std::vector<double> roots;            // (m_k / m_base)^(2^-k), k = 0..n_max
  std::vector<double> limit_estimates;  // (m_k / m_{k-1})^(2^-(k-1)), k = 1..n_max
  double limit = 0.0;
  double prediction = 0.0;  // sqrt(c_a(s* s))
  bool stabilized = false;
};

struct BoundednessReport {
  std::vector<double> c_a;  // ||Phi(s)||^2
  std::vector<double> c_b;  // sampled diagonal estimator, a lower bound for c_a
  std::vector<std::array<Element, 2>> submultiplicativity_violations;
  std::vector<ConditionDSequence> condition_d;
  /// d(t, a) for t in S (rows) and sample a (columns).
  std::vector<std::vector<double>> d_bound;
  std::size_t samples = 0;
};

struct BoundednessOptions {
  std::size_t n_max = 6;
  std::size_t sample_budget = 4;  // random samples on top of the matrix units
  unsigned seed = 0;
  double tol = kDefaultTol;
  double submult_rel_tol = 1e-6;
  double submult_abs_tol = 1e-10;
};

/// Throws IllDefinedTranslation if any Phi(s) is ill defined.
BoundednessReport boundedness_report(const ModuleSpace& m, const FiniteStarSemigroup& s,
                                     const AFunction& omega, const BoundednessOptions& options = {});

struct RepresentationReport {
  double multiplicativity = 0.0;  // max ||Phi(st) - Phi(s)Phi(t)||
  double star = 0.0;              // max ||Phi(s*) - Phi(s)*||
  double correlation = 0.0;       // max ||<Phi(s)K_s', Phi(t)K_t'> - K(ss', tt')||
  std::optional<double> unit = std::nullopt;           // ||Phi(1) - I||
  std::optional<double> omega_translate = std::nullopt;  // max ||Phi(s) omega - omega_s||
};

RepresentationReport representation_checks(const ModuleSpace& m, const FiniteStarSemigroup& s,
                                           std::span<const TranslationOperator> phi,
                                           const std::optional<ModuleElement>& omega_rep = std::nullopt);

/// max_s ||omega(s*) - omega(s)*||.
double omega_symmetry_deviation(const FiniteStarSemigroup& s, const AFunction& omega);

struct ExtensionResult {
  bool admissible = false;
  double c_max = 0.0;  // +inf when omega vanishes
  double range_residual = 0.0;
};

/// Largest c with G - c W*W >= 0 for W = [omega(s_1) ... omega(s_N)].
/// Throws NotHermitianOmega, NotPositiveDefinite.
ExtensionResult extension_property(const FiniteStarSemigroup& s, const AFunction& omega,
                                   double tol = kDefaultTol);

enum class ExtendMode {
  unitize,  // unital S is returned unchanged
  adjoin,   // always append a fresh unit
};

struct ExtendedOmega {
  FiniteStarSemigroup semigroup;
  AFunction omega;
  Element unit = 0;
  PdVerdict pd;
};

/// omega+ = omega on S and omega+(1) = c^-1 e. Throws BadConstant with the
/// minimum eigenvalue when the extended kernel is not positive definite.
ExtendedOmega extend_omega(const FiniteStarSemigroup& s, const AFunction& omega, double c,
                           ExtendMode mode = ExtendMode::unitize, double tol = kDefaultTol);

struct StarConditionResult {
  bool holds = false;
  bool symmetric = false;
  double symmetry_deviation = 0.0;
  MembershipResult membership;
};

StarConditionResult star_condition(const ModuleSpace& m, const FiniteStarSemigroup& s,
                                   const AFunction& omega, double tol = kDefaultTol);

enum class DilationRoute { automatic, star, extension };

struct DilationOptions {
  double tol = kDefaultTol;
  DilationRoute route = DilationRoute::automatic;
  std::size_t sample_budget = 4;
  unsigned seed = 0;
};

struct DilationTriple {
  ModuleSpace module;
  std::vector<TranslationOperator> phi;
  ComplexMatrix v;          // r x n, V a = omega a in reduced coordinates
  ComplexMatrix v_adjoint;  // n x r
  DilationRoute route = DilationRoute::star;
  bool minimal = false;
  double reconstruction_error = 0.0;  // max_s ||omega(s) - V* Phi(s) V||_F
  double sampled_error = 0.0;         // max ||a* omega(s) b - <Va, Phi(s) V b>||_F
  std::optional<double> extension_constant = std::nullopt;
  std::optional<double> unitized_error = std::nullopt;  // same identity inside E_{omega+}
};

/// Throws NotPD, Unbounded or NoStarCondition.
DilationTriple build_dilation(const FiniteStarSemigroup& s, const AFunction& omega,
                              const DilationOptions& options = {});

struct UnitizationLift {
  ComplexMatrix w;  // r+ x r, reduced coordinates of W : E_omega -> E_omega+
  double isometry_error = 0.0;      // ||W*W - I||
  double intertwining_error = 0.0;  // max_s ||W Phi(s) - Phi+(s) W||, i.e. on E0
};

UnitizationLift unitization_lift(const FiniteStarSemigroup& s, const AFunction& omega, double c,
                                 double tol = kDefaultTol);

struct ApproxUnitArrays {
  std::vector<Element> points;             // s_i
  std::vector<ComplexMatrix> coefficients;  // a_i
  double left_residual = 0.0;   // max_s ||sum a_i* omega(s_i s) - omega(s)||
  double right_residual = 0.0;  // max_s ||sum omega(s s_i*) a_i - omega(s)||
  ComplexMatrix cauchy_value;   // sum a_i* omega(s_i s_j*) a_j, constant in n
};

/// Throws NoStarCondition.
ApproxUnitArrays approx_unit_arrays(const FiniteStarSemigroup& s, const AFunction& omega,
                                    double tol = kDefaultTol);

}  // namespace dilkit
