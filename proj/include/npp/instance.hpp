#ifndef NPP_INSTANCE_HPP
#define NPP_INSTANCE_HPP

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace npp {

struct Arc {
    int tail = 0;
    int head = 0;
    double cost = 0.0;
    bool tolled = false;
};

struct Commodity {
    int origin = 0;
    int destination = 0;
    double demand = 1.0;
};

// Validated, immutable network pricing instance. Arc ids are positions in arcs();
// tolled arcs are additionally numbered 0..tolled_count()-1 in arc order.
class Instance {
  public:
    Instance(int node_count, std::vector<Arc> arcs, std::vector<Commodity> commodities,
             std::vector<std::string> node_names = {});

    int node_count() const noexcept { return node_count_; }
    int arc_count() const noexcept { return static_cast<int>(arcs_.size()); }
    int commodity_count() const noexcept { return static_cast<int>(commodities_.size()); }
    int tolled_count() const noexcept { return static_cast<int>(tolled_.size()); }

    const Arc& arc(int id) const { return arcs_.at(static_cast<std::size_t>(id)); }
    std::span<const Arc> arcs() const noexcept { return arcs_; }
    const Commodity& commodity(int id) const { return commodities_.at(static_cast<std::size_t>(id)); }
    std::span<const Commodity> commodities() const noexcept { return commodities_; }

    std::span<const int> tolled_arcs() const noexcept { return tolled_; }
    int tolled_arc(int tolled_index) const { return tolled_.at(static_cast<std::size_t>(tolled_index)); }
    // Position of an arc among the tolled arcs, or -1 for a toll-free arc.
    int tolled_index(int arc_id) const { return tolled_index_.at(static_cast<std::size_t>(arc_id)); }

    std::span<const int> out_arcs(int node) const;
    std::span<const std::string> node_names() const noexcept { return names_; }
    std::string node_label(int node) const;

    // Finite stand-in for an unbounded toll: one more than the total toll-free cost.
    double toll_cap() const noexcept { return toll_cap_; }
    bool unit_demand() const noexcept;

  private:
    int node_count_;
    std::vector<Arc> arcs_;
    std::vector<Commodity> commodities_;
    std::vector<std::string> names_;
    std::vector<int> tolled_;
    std::vector<int> tolled_index_;
    std::vector<int> out_offsets_;
    std::vector<int> out_list_;
    double toll_cap_ = 1.0;
};

Instance parse_instance(std::string_view json_text);
Instance load_instance(const std::filesystem::path& path);
std::string instance_to_json(const Instance& instance);
void save_instance(const Instance& instance, const std::filesystem::path& path);

struct GridConfig {
    double tolled_fraction = 0.2;
    int cost_min = 2;
    int cost_max = 20;
    int toll_cost_min = 0;
    int toll_cost_max = 5;
};

GridConfig parse_grid_config(std::string_view json_text);

// side x side grid with arcs in both directions between neighbours; deterministic in
// (side, commodities, seed, config). Origin-destination pairs are redrawn until each
// has a toll-free route.
Instance generate_grid(int side, int commodities, std::uint64_t seed, const GridConfig& config = {});

}  // namespace npp

#endif
