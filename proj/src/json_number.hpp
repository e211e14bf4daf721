#ifndef NPP_SRC_JSON_NUMBER_HPP
#define NPP_SRC_JSON_NUMBER_HPP

#include <cmath>

#include "json.hpp"

namespace npp::detail {

// Values within round-off of an integer are written as integers.
inline nlohmann::json json_number(double v) {
    if (!std::isfinite(v) || std::fabs(v) >= 1e15) return v;
    const double r = std::round(v);
    if (std::fabs(v - r) <= 1e-9 * std::max(1.0, std::fabs(v))) return static_cast<long long>(r);
    return v;
}

}  // namespace npp::detail

#endif
