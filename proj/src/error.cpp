#include "dilkit/error.hpp"

namespace dilkit {

std::string_view error_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonSquare: return "NonSquare";
    case ErrorKind::NonHermitian: return "NonHermitian";
    case ErrorKind::NotPSD: return "NotPSD";
    case ErrorKind::RaggedBlocks: return "RaggedBlocks";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::BadTable: return "BadTable";
    case ErrorKind::NotAssociative: return "NotAssociative";
    case ErrorKind::NotInvolutive: return "NotInvolutive";
    case ErrorKind::NotAntiHomomorphism: return "NotAntiHomomorphism";
    case ErrorKind::BadParams: return "BadParams";
    case ErrorKind::NonHermitianKernel: return "NonHermitianKernel";
    case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorKind::BaseMismatch: return "BaseMismatch";
    case ErrorKind::UnknownPoint: return "UnknownPoint";
    case ErrorKind::IllDefined: return "IllDefined";
    case ErrorKind::IllDefinedTranslation: return "IllDefinedTranslation";
    case ErrorKind::NotHermitianOmega: return "NotHermitianOmega";
    case ErrorKind::BadConstant: return "BadConstant";
    case ErrorKind::NotPD: return "NotPD";
    case ErrorKind::Unbounded: return "Unbounded";
    case ErrorKind::NoStarCondition: return "NoStarCondition";
    case ErrorKind::NotCP: return "NotCP";
    case ErrorKind::NotPOVM: return "NotPOVM";
    case ErrorKind::NotContraction: return "NotContraction";
    case ErrorKind::OddData: return "OddData";
    case ErrorKind::WindowOverflow: return "WindowOverflow";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::SchemaError: return "SchemaError";
    case ErrorKind::ShapeError: return "ShapeError";
    case ErrorKind::IOError: return "IOError";
  }
  return "Unknown";
}

}  // namespace dilkit
