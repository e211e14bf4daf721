#ifndef NPP_TEST_BRUTE_HPP
#define NPP_TEST_BRUTE_HPP

#include <functional>
#include <vector>

#include "npp/instance.hpp"

namespace npp::testing {

// Every simple origin-destination path of a commodity, as arc-id lists.
inline std::vector<std::vector<int>> all_simple_paths(const Instance& inst, int k) {
    const Commodity& c = inst.commodity(k);
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    std::vector<char> on(static_cast<std::size_t>(inst.node_count()), 0);
    std::function<void(int)> go = [&](int v) {
        if (v == c.destination) {
            out.push_back(cur);
            return;
        }
        on[static_cast<std::size_t>(v)] = 1;
        for (int a = 0; a < inst.arc_count(); ++a) {
            if (inst.arc(a).tail != v || on[static_cast<std::size_t>(inst.arc(a).head)]) continue;
            cur.push_back(a);
            go(inst.arc(a).head);
            cur.pop_back();
        }
        on[static_cast<std::size_t>(v)] = 0;
    };
    go(c.origin);
    return out;
}

struct PathPrice {
    double cost;
    double revenue;
};

// Cheapest cost under tolls (infinite toll removes the arc), then the largest toll take.
inline PathPrice brute_reaction(const Instance& inst, int k, const std::vector<double>& tolls) {
    PathPrice best{1e300, 0.0};
    for (const auto& p : all_simple_paths(inst, k)) {
        double cost = 0, rev = 0;
        bool ok = true;
        for (int a : p) {
            cost += inst.arc(a).cost;
            int i = inst.tolled_index(a);
            if (i >= 0) {
                double t = tolls[static_cast<std::size_t>(i)];
                if (t > 1e200) ok = false;
                cost += t;
                rev += t;
            }
        }
        if (!ok) continue;
        if (cost < best.cost - 1e-9 || (cost < best.cost + 1e-9 && rev > best.revenue)) best = {cost, rev};
    }
    return best;
}

}  // namespace npp::testing

#endif
