#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace driftls {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionMismatch : Error {
  using Error::Error;
};

struct BadHyperparameter : Error {
  using Error::Error;
};

// gamma*A + u*u^T is numerically singular; callers fall back to the
// pseudo-inverse path.
struct DenominatorTooSmall : Error {
  using Error::Error;
};

// u^T c fell below -tol * c^T c: the (H, H+) pair no longer behaves like a
// matrix and its pseudo-inverse.
struct NegativeProjection : Error {
  using Error::Error;
};

struct ZeroTruth : Error {
  using Error::Error;
};

struct EmptyHistory : Error {
  using Error::Error;
};

struct SeriesTooShort : Error {
  using Error::Error;
};

struct SingularSystem : Error {
  using Error::Error;
};

struct FileNotFound : Error {
  using Error::Error;
};

struct ParseError : Error {
  ParseError(std::size_t row_1based, const std::string& what)
      : Error("row " + std::to_string(row_1based) + ": " + what), row(row_1based) {}
  std::size_t row;
};

struct EmptyColumn : Error {
  using Error::Error;
};

struct UnstableSegment : Error {
  UnstableSegment(std::size_t segment_index, const std::string& what)
      : Error("segment " + std::to_string(segment_index) + ": " + what), segment(segment_index) {}
  std::size_t segment;
};

}  // namespace driftls
