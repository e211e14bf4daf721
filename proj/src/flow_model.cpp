#include "flow_model.hpp"

#include <cmath>
#include <functional>

namespace npp::detail {

std::vector<int> add_commodity_flow(lp::Problem& p, const Instance& inst, int commodity, double volume,
                                    std::span<const double> arc_cost) {
    const Commodity& k = inst.commodity(commodity);
    std::vector<int> col(static_cast<std::size_t>(inst.arc_count()), -1);
    for (int a = 0; a < inst.arc_count(); ++a)
        if (std::isfinite(arc_cost[static_cast<std::size_t>(a)]))
            col[static_cast<std::size_t>(a)] = p.add_column(arc_cost[static_cast<std::size_t>(a)]);
    std::vector<std::vector<lp::Term>> rows(static_cast<std::size_t>(inst.node_count()));
    for (int a = 0; a < inst.arc_count(); ++a) {
        const int c = col[static_cast<std::size_t>(a)];
        if (c < 0) continue;
        rows[static_cast<std::size_t>(inst.arc(a).tail)].push_back({c, 1.0});
        rows[static_cast<std::size_t>(inst.arc(a).head)].push_back({c, -1.0});
    }
    for (int v = 0; v < inst.node_count(); ++v) {
        if (v == k.destination) continue;
        p.add_row(rows[static_cast<std::size_t>(v)], lp::RowType::equal, v == k.origin ? volume : 0.0);
    }
    return col;
}

std::vector<int> extract_path(const Instance& inst, int commodity, std::span<const double> flow,
                              std::span<const double> arc_cost) {
    const Commodity& k = inst.commodity(commodity);
    std::vector<char> on(static_cast<std::size_t>(inst.node_count()), 0);
    std::vector<int> current, best;
    double best_cost = std::numeric_limits<double>::infinity();
    long budget = 200000;
    std::function<void(int, double)> dfs = [&](int v, double cost) {
        if (--budget < 0) return;
        if (v == k.destination) {
            if (cost < best_cost - 1e-9) {
                best_cost = cost;
                best = current;
            }
            return;
        }
        on[static_cast<std::size_t>(v)] = 1;
        for (int a : inst.out_arcs(v)) {
            if (flow[static_cast<std::size_t>(a)] <= 1e-6) continue;
            const int h = inst.arc(a).head;
            if (on[static_cast<std::size_t>(h)]) continue;
            current.push_back(a);
            dfs(h, cost + arc_cost[static_cast<std::size_t>(a)]);
            current.pop_back();
        }
        on[static_cast<std::size_t>(v)] = 0;
    };
    dfs(k.origin, 0.0);
    return best;
}

std::vector<double> tolled_costs(const Instance& inst, std::span<const double> tolls) {
    std::vector<double> c(static_cast<std::size_t>(inst.arc_count()));
    for (int a = 0; a < inst.arc_count(); ++a) {
        c[static_cast<std::size_t>(a)] = inst.arc(a).cost;
        const int i = inst.tolled_index(a);
        if (i >= 0) c[static_cast<std::size_t>(a)] += tolls[static_cast<std::size_t>(i)];
    }
    return c;
}

}  // namespace npp::detail
