#pragma once

#include <stdexcept>
#include <string>

namespace spamtk {

// Base for all toolkit errors. The CLI maps these to exit code 2 (data
// error); anything else that escapes is an internal error (exit 3).
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct MalformedMessage : Error {
  using Error::Error;
};

struct EmptyMask : Error {
  using Error::Error;
};

struct EmptyClass : Error {
  using Error::Error;
};

struct SingleClass : Error {
  using Error::Error;
};

struct EmptyDataset : Error {
  using Error::Error;
};

struct DimensionMismatch : Error {
  using Error::Error;
};

struct EmptyMatrix : Error {
  using Error::Error;
};

struct TooFewSamples : Error {
  using Error::Error;
};

struct EmptySubset : Error {
  using Error::Error;
};

struct IoFailure : Error {
  using Error::Error;
};

struct UnlabeledInput : Error {
  using Error::Error;
};

struct ModelDimensionMismatch : Error {
  using Error::Error;
};

struct BadFileFormat : Error {
  using Error::Error;
};

}  // namespace spamtk
