#pragma once

#include <stdexcept>
#include <string>

namespace cdsc {

struct InvalidParameter : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct StateSpaceTooLarge : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct MissingSepSet : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct OrientationConflict : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TooFewSamples : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised when a fixed dataset cannot supply the number of rows a test drew.
struct InsufficientData : std::runtime_error {
  long long required;
  long long available;
  InsufficientData(long long req, long long avail)
      : std::runtime_error("dataset has " + std::to_string(avail) +
                           " rows but the test drew K=" + std::to_string(req)),
        required(req),
        available(avail) {}
};

struct EmptyFamily : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace cdsc
