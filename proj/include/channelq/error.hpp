#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace channelq {

enum class Errc {
  NonStochasticRow,
  BadInputDist,
  DimensionMismatch,
  NegativeEntry,
  DomainError,
  IndexError,
  BoundaryLetter,
  DegenerateNeighbors,
  NotBinaryInput,
  NotCycloSymmetric,
  NonUniformInput,
  NotSymmetric,
  BadTargetSize,
  MissingExtremes,
  TooLarge,
  InfeasibleFloor,
  IoError,
  ParseError,
};

std::string_view to_string(Errc code);

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what);

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace channelq
