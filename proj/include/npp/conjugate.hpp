#ifndef NPP_CONJUGATE_HPP
#define NPP_CONJUGATE_HPP

#include <span>
#include <vector>

#include "npp/follower.hpp"
#include "npp/instance.hpp"

namespace npp {

// Cheapest aggregate flow whose use of each tolled arc stays within a capacity vector.
struct CapacitatedFlow {
    double value = 0.0;
    std::vector<std::vector<double>> flows;  // per selected commodity, per arc
};

// All commodities, each shipping its demand.
CapacitatedFlow conjugate_g(const Instance& inst, std::span<const double> capacity);

// Restricted to `commodities`; with `unit_volume` every selected commodity ships one unit.
CapacitatedFlow conjugate_g(const Instance& inst, std::span<const double> capacity, std::span<const int> commodities,
                            bool unit_volume);

struct ConjugateSolution {
    std::vector<double> capacity;
    double g_value = 0.0;
    TollVector tolls;      // revenue-maximising member of the optimal toll set
    double revenue = 0.0;  // capacity . tolls over finite tolls
    std::vector<std::vector<double>> decomposition;
};

ConjugateSolution action_prices(const Instance& inst, std::span<const double> capacity);

struct EnumerationEntry {
    std::vector<int> capacity;
    TollVector tolls;
    double g_value = 0.0;
    double revenue = 0.0;
};

struct EnumerationResult {
    double revenue = 0.0;
    std::vector<int> capacity;
    TollVector tolls;
    std::vector<EnumerationEntry> table;  // every candidate, first coordinate slowest
};

inline constexpr long kDefaultEnumerationBudget = 1'000'000;

// Exhaustive search over integer capacities in {0..|K|}^n; unit demands only.
EnumerationResult solve_by_enumeration(const Instance& inst, long budget = kDefaultEnumerationBudget);

struct SingleTollResult {
    double revenue = 0.0;
    double toll = 0.0;
    std::vector<double> thresholds;  // per commodity: detour cost minus base cost
};

// Closed-form optimum for instances with exactly one tolled arc.
SingleTollResult solve_single_toll(const Instance& inst);

}  // namespace npp

#endif
