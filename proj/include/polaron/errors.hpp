#pragma once

#include <stdexcept>
#include <string>

namespace polaron {

// Base class for all toolkit errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ZeroNormError : Error {
  using Error::Error;
};
struct GridTooCoarseError : Error {
  using Error::Error;
};
struct GridMismatchError : Error {
  using Error::Error;
};
struct InvalidScaleError : Error {
  using Error::Error;
};
struct IndexOutOfRangeError : Error {
  using Error::Error;
};
struct EmptyGroupError : Error {
  using Error::Error;
};
struct NonpositiveSideError : Error {
  using Error::Error;
};
struct NuNotAboveTwoError : Error {
  using Error::Error;
};
struct AlphaTooSmallError : Error {
  using Error::Error;
};
struct HypothesisViolatedError : Error {
  using Error::Error;
};
struct OrderingViolatedError : Error {
  using Error::Error;
};
struct InvalidKError : Error {
  using Error::Error;
};
struct ProviderFailureError : Error {
  using Error::Error;
};
struct RejectionBudgetExceededError : Error {
  using Error::Error;
};
struct QuadratureUnstableError : Error {
  using Error::Error;
};
struct IoError : Error {
  using Error::Error;
};
struct ConfigError : Error {
  using Error::Error;
};

}  // namespace polaron
