#include "entroscale/error.hpp"

namespace entroscale {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::InvalidModel: return "InvalidModel";
    case ErrorCode::InvalidFermi: return "InvalidFermi";
    case ErrorCode::WrongCase: return "WrongCase";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::WrongFermi: return "WrongFermi";
    case ErrorCode::ZeroPolynomial: return "ZeroPolynomial";
    case ErrorCode::OnZeroSet: return "OnZeroSet";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::QuadratureFailure: return "QuadratureFailure";
    case ErrorCode::MissingLags: return "MissingLags";
    case ErrorCode::PairingFailure: return "PairingFailure";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::NotAntisymmetric: return "NotAntisymmetric";
    case ErrorCode::AxiomViolation: return "AxiomViolation";
    case ErrorCode::OracleMismatch: return "OracleMismatch";
  }
  return "Unknown";
}

}  // namespace entroscale
