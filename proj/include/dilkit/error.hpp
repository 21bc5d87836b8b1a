#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace dilkit {

enum class ErrorKind {
  NonSquare,
  NonHermitian,
  NotPSD,
  RaggedBlocks,
  ShapeMismatch,
  BadTable,
  NotAssociative,
  NotInvolutive,
  NotAntiHomomorphism,
  BadParams,
  NonHermitianKernel,
  NotPositiveDefinite,
  BaseMismatch,
  UnknownPoint,
  IllDefined,
  IllDefinedTranslation,
  NotHermitianOmega,
  BadConstant,
  NotPD,
  Unbounded,
  NoStarCondition,
  NotCP,
  NotPOVM,
  NotContraction,
  OddData,
  WindowOverflow,
  ParseError,
  SchemaError,
  ShapeError,
  IOError,
};

std::string_view error_name(ErrorKind kind);

/// Library error. `certificate` carries a numeric witness (typically a
/// minimum eigenvalue) when the failure has one.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what,
        std::optional<double> certificate = std::nullopt)
      : std::runtime_error(std::string(error_name(kind)) + ": " + what),
        kind_(kind),
        certificate_(certificate) {}

  ErrorKind kind() const noexcept { return kind_; }
  std::optional<double> certificate() const noexcept { return certificate_; }

 private:
  ErrorKind kind_;
  std::optional<double> certificate_;
};

}  // namespace dilkit
