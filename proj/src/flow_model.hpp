#ifndef NPP_SRC_FLOW_MODEL_HPP
#define NPP_SRC_FLOW_MODEL_HPP

#include <span>
#include <vector>

#include "npp/instance.hpp"
#include "npp/lp.hpp"

namespace npp::detail {

// Adds one flow column per usable arc plus conservation rows (destination row dropped)
// sending `volume` from the commodity's origin to its destination. Arcs whose cost is
// infinite are left out. Returns the column of each arc, -1 when absent.
std::vector<int> add_commodity_flow(lp::Problem& p, const Instance& inst, int commodity, double volume,
                                    std::span<const double> arc_cost);

// Cheapest origin-destination path inside the support of `flow`; ties go to the
// lexicographically smallest arc-id sequence. Empty when the support has no such path.
std::vector<int> extract_path(const Instance& inst, int commodity, std::span<const double> flow,
                              std::span<const double> arc_cost);

// Fixed arc costs with tolls added; unbounded tolls give infinite cost.
std::vector<double> tolled_costs(const Instance& inst, std::span<const double> tolls);

}  // namespace npp::detail

#endif
