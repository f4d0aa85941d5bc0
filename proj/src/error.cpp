#include "channelq/error.hpp"

namespace channelq {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::NonStochasticRow: return "NonStochasticRow";
    case Errc::BadInputDist: return "BadInputDist";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::NegativeEntry: return "NegativeEntry";
    case Errc::DomainError: return "DomainError";
    case Errc::IndexError: return "IndexError";
    case Errc::BoundaryLetter: return "BoundaryLetter";
    case Errc::DegenerateNeighbors: return "DegenerateNeighbors";
    case Errc::NotBinaryInput: return "NotBinaryInput";
    case Errc::NotCycloSymmetric: return "NotCycloSymmetric";
    case Errc::NonUniformInput: return "NonUniformInput";
    case Errc::NotSymmetric: return "NotSymmetric";
    case Errc::BadTargetSize: return "BadTargetSize";
    case Errc::MissingExtremes: return "MissingExtremes";
    case Errc::TooLarge: return "TooLarge";
    case Errc::InfeasibleFloor: return "InfeasibleFloor";
    case Errc::IoError: return "IoError";
    case Errc::ParseError: return "ParseError";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace channelq
