#pragma once

// Problem files: JSON documents with a schema_version, a kind, options and a
// kind-specific payload. Complex numbers are [re, im] (plain reals are
// accepted on input); matrices are arrays of rows.

#include <cstddef>
#include <map>
#include <optional>
#include <string>

#include <json.hpp>

#include "dilkit/applications.hpp"
#include "dilkit/semigroup.hpp"

namespace dilkit {

inline constexpr int kSchemaVersion = 1;

enum class ProblemKind { semigroup, kernel, invariant, cp_map, povm, contraction, moments, subnormality };

std::string kind_name(ProblemKind kind);
std::optional<ProblemKind> kind_from_name(const std::string& name);

struct ProblemOptions {
  double tol = kDefaultTol;
  unsigned seed = 0;
  std::size_t n_max = 6;
  std::size_t sample_budget = 4;
  std::string route = "automatic";  // automatic | star | extension
  std::optional<double> extension_constant;

  bool operator==(const ProblemOptions&) const = default;
};

/// Either explicit tables or a builtin family.
struct SemigroupSpec {
  std::optional<std::string> family;
  std::size_t param = 0;
  SemigroupTables tables;

  /// Raw tables (builtin families expanded); no axioms checked.
  SemigroupTables resolve_tables() const;
  /// Validated semigroup; throws the axiom errors.
  FiniteStarSemigroup resolve() const;
};

/// T together with its window N (contraction and subnormality problems).
struct OperatorData {
  ComplexMatrix t;
  std::size_t window = 1;
};

struct Problem {
  ProblemKind kind = ProblemKind::kernel;
  ProblemOptions options;
  std::optional<SemigroupSpec> semigroup;
  std::map<std::string, ComplexMatrix> omega;  // by label
  std::optional<AKernel> kernel;
  std::optional<CPMap> cp_map;
  std::optional<POVM> povm;
  std::optional<OperatorData> op;
  std::optional<MomentData> moments;
  std::optional<std::size_t> moment_window;

  /// omega as an AFunction over S; throws SchemaError for missing labels.
  AFunction omega_on(const FiniteStarSemigroup& s) const;
};

bool operator==(const Problem& a, const Problem& b);

/// Throws ParseError (with line and column), SchemaError (with field path)
/// or ShapeError (naming the field).
Problem parse_problem_text(const std::string& text);
/// Also throws IOError.
Problem parse_problem(const std::string& path);

nlohmann::json problem_to_json(const Problem& p);
std::string serialize_problem(const Problem& p);

nlohmann::json matrix_to_json(const ComplexMatrix& m);
nlohmann::json complex_to_json(Complex z);

}  // namespace dilkit
