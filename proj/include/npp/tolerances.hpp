#ifndef NPP_TOLERANCES_HPP
#define NPP_TOLERANCES_HPP

namespace npp {

// Numerical tolerances shared by every module.
struct Tolerances {
    double feasibility = 1e-7;
    double duality_gap = 1e-6;
    double zero = 1e-9;
};

inline constexpr Tolerances kTol{};

}  // namespace npp

#endif
