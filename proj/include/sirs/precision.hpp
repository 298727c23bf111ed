#pragma once

#include <boost/multiprecision/float128.hpp>

namespace sirs {

// Quad precision (113-bit mantissa) for series arithmetic.
using HighReal = boost::multiprecision::float128;

}  // namespace sirs
