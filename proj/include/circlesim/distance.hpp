#pragma once

#include "circlesim/rational.hpp"

namespace circlesim {

/// A truncated series distance together with an upper bound on the
/// omitted tail.
struct TruncatedDistance {
  Rational value;
  Rational tail_bound;
};

}  // namespace circlesim
