#ifndef NPP_BIFEAS_HPP
#define NPP_BIFEAS_HPP

#include <span>
#include <string>
#include <vector>

#include "npp/instance.hpp"

namespace npp {

struct PathRecord {
    int commodity = 0;
    std::vector<int> arcs;
    double base_cost = 0.0;
    std::vector<int> usage;  // 0/1 per tolled arc
};

using PathSets = std::vector<std::vector<PathRecord>>;  // indexed by commodity

inline constexpr long kDefaultPathBudget = 1L << 20;

// Paths of one commodity that some toll vector makes a cheapest reaction on a
// full-dimensional set of tolls, one per tolled-arc usage pattern, in pattern order.
std::vector<PathRecord> enumerate_bf_paths(const Instance& inst, int commodity, long budget = kDefaultPathBudget);
PathSets enumerate_bf_paths(const Instance& inst, long budget = kDefaultPathBudget);

// Cheapest unit flow of one commodity within tolled-arc capacities `usage`.
double commodity_capacity_cost(const Instance& inst, int commodity, std::span<const int> usage);

// A composition holds at most one record per commodity; only those commodities take part.
bool is_bf_composition(const Instance& inst, std::span<const PathRecord> composition);

enum class Strength { strong, weak, infeasible_composition };
std::string to_string(Strength s);

struct SbfVerdict {
    Strength classification = Strength::strong;
    double objective = 0.0;
    bool cost_tight = true;
    bool capacity_tight = true;
    std::vector<std::vector<double>> certificate;  // alternative flows, one per record
};

SbfVerdict sbf_test(const Instance& inst, std::span<const PathRecord> composition);

struct Classification {
    Strength classification = Strength::weak;
    std::string reason;
    double g_value = 0.0;
    std::vector<std::vector<PathRecord>> witnesses;  // binary decompositions attaining g
};

// Integer aggregate usage in {0..|K|}^n; unit demands only.
Classification classify_w(const Instance& inst, std::span<const int> usage, const PathSets& paths);
Classification classify_w(const Instance& inst, std::span<const int> usage);

// Largest slack by which every inequality describing the common toll set of a
// composition can be strictly satisfied. Positive exactly when that set is full-dimensional.
double toll_set_margin(const Instance& inst, std::span<const PathRecord> composition, const PathSets& paths);

}  // namespace npp

#endif
