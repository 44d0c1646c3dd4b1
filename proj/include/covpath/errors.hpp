#pragma once

#include <stdexcept>

namespace covpath {

/// An observation point coincides with a path center, so the closest path
/// point is undefined.
struct DegeneratePoint : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A shape matrix is not symmetric positive definite.
struct NonPdShape : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A Schur-complement denominator vanished while the off-diagonal term is
/// nonzero, so the shape barriers are undefined.
struct DegenerateShape : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// The requested region cannot hold a single survey stripe.
struct RegionTooSmall : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A scenario configuration failed validation.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace covpath
