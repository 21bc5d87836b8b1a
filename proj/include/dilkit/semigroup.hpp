#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace dilkit {

using Element = std::size_t;

/// Axiom violations found while checking raw tables.
struct AxiomReport {
  std::vector<std::array<Element, 3>> non_associative;   // (a, b, c)
  std::vector<Element> non_involutive;                   // a with inv(inv(a)) != a
  std::vector<std::array<Element, 2>> non_anti_homomorphic;  // (a, b)
  std::optional<Element> unit;

  bool ok() const {
    return non_associative.empty() && non_involutive.empty() && non_anti_homomorphic.empty();
  }
};

/// Tables as read from input; no axioms assumed. `mult` is row-major.
struct SemigroupTables {
  std::vector<std::string> labels;
  std::vector<Element> mult;
  std::vector<Element> inv;
};

/// Exhaustive axiom check. Throws BadTable if the tables are not index-closed.
AxiomReport check_axioms(const SemigroupTables& tables);

/// Finite *-semigroup held as dense multiplication and involution tables.
class FiniteStarSemigroup {
 public:
  /// Validates and throws NotAssociative / NotInvolutive / NotAntiHomomorphism
  /// with the first witness, or BadTable.
  static FiniteStarSemigroup validate(SemigroupTables tables);

  std::size_t size() const noexcept { return tables_.labels.size(); }
  Element mul(Element a, Element b) const { return tables_.mult[a * size() + b]; }
  Element star(Element a) const { return tables_.inv[a]; }
  std::optional<Element> unit() const noexcept { return unit_; }
  bool is_unital() const noexcept { return unit_.has_value(); }

  const std::string& label(Element a) const { return tables_.labels[a]; }
  const std::vector<std::string>& labels() const noexcept { return tables_.labels; }
  const SemigroupTables& tables() const noexcept { return tables_; }
  std::optional<Element> find(const std::string& label) const;

  /// s^k by repeated multiplication, k >= 1.
  Element power(Element s, std::size_t k) const;

  friend bool operator==(const FiniteStarSemigroup& a, const FiniteStarSemigroup& b) {
    return a.tables_.labels == b.tables_.labels && a.tables_.mult == b.tables_.mult &&
           a.tables_.inv == b.tables_.inv;
  }

 private:
  FiniteStarSemigroup(SemigroupTables tables, std::optional<Element> unit)
      : tables_(std::move(tables)), unit_(unit) {}

  SemigroupTables tables_;
  std::optional<Element> unit_;
};

namespace builtin {

/// Z_k with labels e, g, g^2, ... and s* = s^-1.
FiniteStarSemigroup cyclic_group(std::size_t k);

/// Subsets of {1..m} under intersection, identity involution, unit = full set.
/// Element index is the bitmask (bit i set <=> point i+1 present).
FiniteStarSemigroup intersection_semigroup(std::size_t m);

/// {0} u {e_ij}: index 0 is the zero, e_ij sits at 1 + i*m + j.
/// e_ij* = e_ji, e_ij e_kl = delta_jk e_il.
FiniteStarSemigroup matrix_unit_semigroup(std::size_t m);

/// {z, a} with every product equal to z and identity involution.
FiniteStarSemigroup null_semigroup();

inline Element matrix_unit(std::size_t m, std::size_t i, std::size_t j) { return 1 + i * m + j; }

}  // namespace builtin

FiniteStarSemigroup builtin_by_name(const std::string& family, std::size_t param);

/// S+ : S itself when unital, otherwise S with a fresh unit labelled "1"
/// appended as the last element.
FiniteStarSemigroup unitize(const FiniteStarSemigroup& s);

/// Appends a fresh unit even when S already has one.
FiniteStarSemigroup adjoin_unit(const FiniteStarSemigroup& s);

bool is_inverse_semigroup(const FiniteStarSemigroup& s);

}  // namespace dilkit
