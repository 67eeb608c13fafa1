#include "ipm1d/format.hpp"

#include <cstdio>

namespace ipm1d {

std::string fmt17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt17(const std::optional<double>& v) { return v ? fmt17(*v) : std::string(); }

} // namespace ipm1d
