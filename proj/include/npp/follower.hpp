#ifndef NPP_FOLLOWER_HPP
#define NPP_FOLLOWER_HPP

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "npp/instance.hpp"

namespace npp {

// One toll per tolled arc; +infinity marks an unbounded toll (the arc is deleted).
class TollVector {
  public:
    TollVector() = default;
    explicit TollVector(std::vector<double> values);
    static TollVector zeros(int n) { return TollVector(std::vector<double>(static_cast<std::size_t>(n), 0.0)); }
    static TollVector unbounded(int n);

    int size() const noexcept { return static_cast<int>(values_.size()); }
    double operator[](int i) const { return values_.at(static_cast<std::size_t>(i)); }
    bool is_unbounded(int i) const;
    std::span<const double> values() const noexcept { return values_; }

  private:
    std::vector<double> values_;
};

struct Reaction {
    int commodity = 0;
    std::vector<int> path;          // arc ids from origin to destination
    std::vector<double> flow;       // per arc, as returned by the flow model
    std::vector<int> usage;         // per tolled arc, 0/1 use by `path`
    double base_cost = 0.0;         // fixed cost of `flow`
    double total_cost = 0.0;        // fixed cost plus tolls of `flow`
    double revenue = 0.0;           // tolls collected per unit of demand
    bool simple_path = true;        // flow is exactly the indicator of `path`
};

// Cheapest route for one commodity, ties resolved towards the largest toll payment.
Reaction shortest_path(const Instance& inst, int commodity, const TollVector& tolls);

// Shortest-path distance of one commodity under tolls (label-setting search).
double commodity_cost(const Instance& inst, int commodity, const TollVector& tolls);

// Demand-weighted sum of commodity costs.
double follower_cost(const Instance& inst, const TollVector& tolls);

// Cheapest unit flow of one commodity whose tolled-arc flows equal `usage`.
std::optional<Reaction> fill_tollfree(const Instance& inst, int commodity, std::span<const int> usage);

struct PriceResult {
    bool feasible = false;
    TollVector tolls;
    double revenue = 0.0;
};

// Best tolls under which every commodity's given flow is a cheapest reaction.
PriceResult price_for_paths(const Instance& inst, std::span<const std::vector<double>> flows);

std::vector<double> path_flow(const Instance& inst, std::span<const int> path);
double path_base_cost(const Instance& inst, std::span<const int> path);
std::vector<int> path_usage(const Instance& inst, std::span<const int> path);

struct PlotSample {
    std::vector<double> tolls;
    std::vector<std::vector<int>> usage;  // per commodity
    std::vector<int> aggregate;
};

std::vector<PlotSample> reaction_plot_sample(const Instance& inst,
                                             std::span<const std::pair<double, double>> box, int resolution);
std::string plot_csv(const Instance& inst, std::span<const PlotSample> samples);

}  // namespace npp

#endif
