#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <random>

#include "npp/error.hpp"
#include "npp/instance.hpp"

namespace npp {

namespace {

// Rejection sampling on raw engine output keeps draws identical across standard libraries.
std::uint64_t draw_below(std::mt19937_64& rng, std::uint64_t n) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x = rng();
    while (x >= limit) x = rng();
    return x % n;
}

int draw_between(std::mt19937_64& rng, int lo, int hi) {
    return lo + static_cast<int>(draw_below(rng, static_cast<std::uint64_t>(hi - lo + 1)));
}

std::vector<char> free_reach(int nodes, const std::vector<Arc>& arcs, int from) {
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(nodes));
    for (const Arc& a : arcs)
        if (!a.tolled) adj[static_cast<std::size_t>(a.tail)].push_back(a.head);
    std::vector<char> seen(static_cast<std::size_t>(nodes), 0);
    std::queue<int> open;
    open.push(from);
    seen[static_cast<std::size_t>(from)] = 1;
    while (!open.empty()) {
        int u = open.front();
        open.pop();
        for (int v : adj[static_cast<std::size_t>(u)])
            if (!seen[static_cast<std::size_t>(v)]) {
                seen[static_cast<std::size_t>(v)] = 1;
                open.push(v);
            }
    }
    return seen;
}

}  // namespace

Instance generate_grid(int side, int commodities, std::uint64_t seed, const GridConfig& config) {
    if (side < 2) throw PreconditionError("grid side must be at least 2");
    if (commodities < 0) throw PreconditionError("commodity count must be non-negative");
    const int nodes = side * side;
    std::mt19937_64 rng(seed);

    std::vector<Arc> arcs;
    for (int r = 0; r < side; ++r)
        for (int c = 0; c < side; ++c) {
            const int u = r * side + c;
            if (c + 1 < side) {
                arcs.push_back({u, u + 1, 0.0, false});
                arcs.push_back({u + 1, u, 0.0, false});
            }
            if (r + 1 < side) {
                arcs.push_back({u, u + side, 0.0, false});
                arcs.push_back({u + side, u, 0.0, false});
            }
        }

    const auto tolled = static_cast<std::size_t>(std::lround(config.tolled_fraction * static_cast<double>(arcs.size())));
    std::vector<std::size_t> order(arcs.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (std::size_t i = 0; i < tolled && i + 1 < order.size(); ++i) {
        std::size_t j = i + static_cast<std::size_t>(draw_below(rng, order.size() - i));
        std::swap(order[i], order[j]);
        arcs[order[i]].tolled = true;
    }
    for (Arc& a : arcs)
        a.cost = a.tolled ? draw_between(rng, config.toll_cost_min, config.toll_cost_max)
                          : draw_between(rng, config.cost_min, config.cost_max);

    std::vector<std::vector<char>> reach(static_cast<std::size_t>(nodes));
    std::vector<Commodity> list;
    constexpr int kMaxDraws = 100000;
    for (int k = 0; k < commodities; ++k) {
        bool placed = false;
        for (int attempt = 0; attempt < kMaxDraws && !placed; ++attempt) {
            int o = static_cast<int>(draw_below(rng, static_cast<std::uint64_t>(nodes)));
            int d = static_cast<int>(draw_below(rng, static_cast<std::uint64_t>(nodes - 1)));
            if (d >= o) ++d;
            auto& seen = reach[static_cast<std::size_t>(o)];
            if (seen.empty()) seen = free_reach(nodes, arcs, o);
            if (seen[static_cast<std::size_t>(d)]) {
                list.push_back({o, d, 1.0});
                placed = true;
            }
        }
        if (!placed) throw ValidationError("no origin-destination pair has a toll-free path");
    }
    return Instance(nodes, std::move(arcs), std::move(list));
}

}  // namespace npp
