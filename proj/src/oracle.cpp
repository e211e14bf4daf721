#include "npp/oracle.hpp"

#include <map>

#include "npp/error.hpp"
#include "npp/tolerances.hpp"

namespace npp {

std::vector<std::vector<int>> candidate_paths(const Instance& inst, int commodity, long budget) {
    const Commodity& com = inst.commodity(commodity);
    std::map<std::vector<int>, std::pair<double, std::vector<int>>> best;
    std::vector<char> on_path(static_cast<std::size_t>(inst.node_count()), 0);
    std::vector<int> arcs;
    long listed = 0;

    auto record = [&] {
        if (++listed > budget) throw BudgetExceeded("simple path listing exceeds budget");
        std::vector<int> usage(static_cast<std::size_t>(inst.tolled_count()), 0);
        double cost = 0.0;
        for (int a : arcs) {
            cost += inst.arc(a).cost;
            if (const int i = inst.tolled_index(a); i >= 0) usage[static_cast<std::size_t>(i)] = 1;
        }
        auto it = best.find(usage);
        if (it == best.end() || cost < it->second.first) best[usage] = {cost, arcs};
    };
    auto dfs = [&](auto&& self, int v) -> void {
        if (v == com.destination) {
            record();
            return;
        }
        on_path[static_cast<std::size_t>(v)] = 1;
        for (int a : inst.out_arcs(v)) {
            const int h = inst.arc(a).head;
            if (on_path[static_cast<std::size_t>(h)]) continue;
            arcs.push_back(a);
            self(self, h);
            arcs.pop_back();
        }
        on_path[static_cast<std::size_t>(v)] = 0;
    };
    dfs(dfs, com.origin);

    std::vector<std::vector<int>> out;
    for (auto& [usage, entry] : best) out.push_back(std::move(entry.second));
    return out;
}

OracleResult brute_force_solve(const Instance& inst, long budget, const CompositionVisitor& visit) {
    const int nk = inst.commodity_count();
    std::vector<std::vector<std::vector<int>>> cands;
    double combos = 1.0;
    for (int k = 0; k < nk; ++k) {
        cands.push_back(candidate_paths(inst, k, budget));
        combos *= static_cast<double>(cands.back().size());
    }
    if (combos > static_cast<double>(budget)) throw BudgetExceeded("composition count exceeds budget");

    OracleResult out;
    bool found = false;
    std::vector<std::size_t> idx(static_cast<std::size_t>(nk), 0);
    std::vector<std::vector<int>> chosen(static_cast<std::size_t>(nk));
    std::vector<std::vector<double>> flows(static_cast<std::size_t>(nk));
    for (;;) {
        for (int k = 0; k < nk; ++k) {
            chosen[static_cast<std::size_t>(k)] = cands[static_cast<std::size_t>(k)][idx[static_cast<std::size_t>(k)]];
            flows[static_cast<std::size_t>(k)] = path_flow(inst, chosen[static_cast<std::size_t>(k)]);
        }
        const PriceResult price = price_for_paths(inst, flows);
        ++out.compositions;
        if (visit) visit(chosen, price);
        if (price.feasible && (!found || price.revenue > out.revenue + kTol.duality_gap)) {
            found = true;
            out.revenue = price.revenue;
            out.paths = chosen;
            out.tolls = price.tolls;
        }
        int k = nk - 1;
        while (k >= 0 && ++idx[static_cast<std::size_t>(k)] == cands[static_cast<std::size_t>(k)].size()) {
            idx[static_cast<std::size_t>(k)] = 0;
            --k;
        }
        if (k < 0) break;
    }
    if (!found) throw Error("no composition admits feasible tolls");
    return out;
}

}  // namespace npp
