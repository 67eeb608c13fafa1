#pragma once

#include <optional>
#include <string>

namespace ipm1d {

/// Shortest round-trip-safe text for a double: printf "%.17g".
std::string fmt17(double v);
/// Empty for an absent value.
std::string fmt17(const std::optional<double>& v);

} // namespace ipm1d
