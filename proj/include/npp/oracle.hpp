#ifndef NPP_ORACLE_HPP
#define NPP_ORACLE_HPP

#include <functional>
#include <span>
#include <vector>

#include "npp/follower.hpp"
#include "npp/instance.hpp"

namespace npp {

inline constexpr long kDefaultOracleBudget = 1'000'000;

struct OracleResult {
    double revenue = 0.0;
    std::vector<std::vector<int>> paths;  // arc ids per commodity
    TollVector tolls;
    long compositions = 0;
};

// Cheapest simple path of one commodity for every tolled-arc usage pattern it can
// realise, found by exhaustive depth-first listing. Ordered by usage pattern.
std::vector<std::vector<int>> candidate_paths(const Instance& inst, int commodity, long budget = kDefaultOracleBudget);

// Sees every composition with its pricing outcome.
using CompositionVisitor = std::function<void(std::span<const std::vector<int>>, const PriceResult&)>;

// Prices every composition of candidate paths and keeps the best revenue; the first
// composition in lexicographic order wins ties.
OracleResult brute_force_solve(const Instance& inst, long budget = kDefaultOracleBudget,
                               const CompositionVisitor& visit = {});

}  // namespace npp

#endif
