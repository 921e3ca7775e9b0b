#pragma once

// Textual polynomial format: sums of terms in z, e.g. `1/2 + (3-2i)*z - z^3`
// or `z*(z-1)*(z-a)` with numeric a. Complex literals are written `a+bi`,
// rationals `p/q`; decimals are converted exactly in the exact backend.

#include "heunforge/poly.hpp"

#include <stdexcept>
#include <string>
#include <string_view>

namespace heunforge {

class ParseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

template <Scalar T>
Poly<T> parse_poly(std::string_view text);

/// A constant expression (no z).
template <Scalar T>
T parse_scalar(std::string_view text);

template <Scalar T>
std::string format_poly(const Poly<T>& p);

template <Scalar T>
std::string format_scalar(const T& v);

}  // namespace heunforge
