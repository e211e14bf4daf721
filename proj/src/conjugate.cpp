#include "npp/conjugate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "flow_model.hpp"
#include "npp/error.hpp"
#include "npp/lp.hpp"
#include "npp/tolerances.hpp"

namespace npp {

namespace {

void check_capacity(const Instance& inst, std::span<const double> w) {
    if (static_cast<int>(w.size()) != inst.tolled_count()) throw PreconditionError("capacity length differs from tolled arc count");
    for (double v : w)
        if (!(v >= 0.0) || !std::isfinite(v)) throw PreconditionError("capacities must be finite and non-negative");
}

}  // namespace

CapacitatedFlow conjugate_g(const Instance& inst, std::span<const double> capacity) {
    std::vector<int> all(static_cast<std::size_t>(inst.commodity_count()));
    std::iota(all.begin(), all.end(), 0);
    return conjugate_g(inst, capacity, all, false);
}

CapacitatedFlow conjugate_g(const Instance& inst, std::span<const double> capacity, std::span<const int> commodities,
                            bool unit_volume) {
    check_capacity(inst, capacity);
    std::vector<double> cost(static_cast<std::size_t>(inst.arc_count()));
    for (int a = 0; a < inst.arc_count(); ++a) cost[static_cast<std::size_t>(a)] = inst.arc(a).cost;
    lp::Problem p(lp::Sense::minimize);
    std::vector<std::vector<int>> cols;
    for (int k : commodities) {
        if (k < 0 || k >= inst.commodity_count()) throw PreconditionError("commodity index out of range");
        cols.push_back(detail::add_commodity_flow(p, inst, k, unit_volume ? 1.0 : inst.commodity(k).demand, cost));
    }
    for (int i = 0; i < inst.tolled_count(); ++i) {
        std::vector<lp::Term> row;
        for (const auto& c : cols) row.push_back({c[static_cast<std::size_t>(inst.tolled_arc(i))], 1.0});
        p.add_row(row, lp::RowType::less_equal, capacity[static_cast<std::size_t>(i)]);
    }
    lp::Simplex sx(p);
    if (sx.solve() != lp::Status::optimal) throw Error("capacitated flow model failed to solve");
    CapacitatedFlow out;
    out.value = sx.objective_value();
    for (const auto& c : cols) {
        std::vector<double> f(static_cast<std::size_t>(inst.arc_count()), 0.0);
        for (int a = 0; a < inst.arc_count(); ++a) {
            double v = sx.column_value(c[static_cast<std::size_t>(a)]);
            f[static_cast<std::size_t>(a)] = std::fabs(v) < 1e-11 ? 0.0 : v;
        }
        out.flows.push_back(std::move(f));
    }
    return out;
}

ConjugateSolution action_prices(const Instance& inst, std::span<const double> capacity) {
    check_capacity(inst, capacity);
    const int n = inst.tolled_count();
    lp::Problem p(lp::Sense::maximize);
    std::vector<int> tcol(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) tcol[static_cast<std::size_t>(i)] = p.add_column(-capacity[static_cast<std::size_t>(i)], 0.0, inst.toll_cap());
    for (int k = 0; k < inst.commodity_count(); ++k) {
        const Commodity& com = inst.commodity(k);
        std::vector<int> y(static_cast<std::size_t>(inst.node_count()));
        for (int v = 0; v < inst.node_count(); ++v) {
            const double obj = v == com.origin ? com.demand : 0.0;
            y[static_cast<std::size_t>(v)] =
                v == com.destination ? p.add_column(0.0, 0.0, 0.0) : p.add_column(obj, -lp::kInf, lp::kInf);
        }
        for (int a = 0; a < inst.arc_count(); ++a) {
            const Arc& arc = inst.arc(a);
            std::vector<lp::Term> row{{y[static_cast<std::size_t>(arc.tail)], 1.0}, {y[static_cast<std::size_t>(arc.head)], -1.0}};
            const int i = inst.tolled_index(a);
            if (i >= 0) row.push_back({tcol[static_cast<std::size_t>(i)], -1.0});
            p.add_row(row, lp::RowType::less_equal, arc.cost);
        }
    }
    lp::Simplex sx(p);
    if (sx.solve() != lp::Status::optimal) throw Error("conjugate follower model failed to solve");
    ConjugateSolution out;
    out.capacity.assign(capacity.begin(), capacity.end());
    out.g_value = sx.objective_value();

    std::vector<double> obj(static_cast<std::size_t>(p.column_count()), 0.0);
    for (int i = 0; i < n; ++i) obj[static_cast<std::size_t>(tcol[static_cast<std::size_t>(i)])] = capacity[static_cast<std::size_t>(i)];
    if (sx.optimize_over_optimal_face(obj, lp::Sense::maximize) != lp::Status::optimal)
        throw Error("conjugate revenue tie-break failed to solve");
    for (int i = 0; i < n; ++i) obj[static_cast<std::size_t>(tcol[static_cast<std::size_t>(i)])] = 1.0;
    if (sx.optimize_over_optimal_face(obj, lp::Sense::maximize) != lp::Status::optimal)
        throw Error("conjugate toll tie-break failed to solve");

    const double cap = inst.toll_cap();
    std::vector<double> t(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        double v = std::max(0.0, sx.column_value(tcol[static_cast<std::size_t>(i)]));
        if (v >= cap - kTol.zero * std::max(1.0, cap)) {
            if (capacity[static_cast<std::size_t>(i)] > kTol.zero) throw Error("toll reached its cap on a used arc");
            v = std::numeric_limits<double>::infinity();
        } else {
            out.revenue += capacity[static_cast<std::size_t>(i)] * v;
        }
        t[static_cast<std::size_t>(i)] = v;
    }
    out.tolls = TollVector(std::move(t));
    out.decomposition = conjugate_g(inst, capacity).flows;
    return out;
}

EnumerationResult solve_by_enumeration(const Instance& inst, long budget) {
    if (!inst.unit_demand()) throw PreconditionError("enumeration requires unit demands");
    const int n = inst.tolled_count();
    const int base = inst.commodity_count() + 1;
    double count = std::pow(static_cast<double>(base), n);
    if (count > static_cast<double>(budget)) throw BudgetExceeded("capacity grid exceeds the enumeration budget");

    EnumerationResult out;
    out.capacity.assign(static_cast<std::size_t>(n), 0);
    out.revenue = -1.0;
    std::vector<int> w(static_cast<std::size_t>(n), 0);
    const auto total = static_cast<long>(count);
    for (long s = 0; s < total; ++s) {
        std::vector<double> wd(w.begin(), w.end());
        ConjugateSolution sol = action_prices(inst, wd);
        if (sol.revenue > out.revenue + kTol.zero) {
            out.revenue = sol.revenue;
            out.capacity = w;
            out.tolls = sol.tolls;
        }
        out.table.push_back({w, sol.tolls, sol.g_value, sol.revenue});
        for (int i = n - 1; i >= 0; --i) {
            if (++w[static_cast<std::size_t>(i)] < base) break;
            w[static_cast<std::size_t>(i)] = 0;
        }
    }
    return out;
}

SingleTollResult solve_single_toll(const Instance& inst) {
    if (inst.tolled_count() != 1) throw PreconditionError("single-toll solver needs exactly one tolled arc");
    SingleTollResult out;
    const int nk = inst.commodity_count();
    for (int k = 0; k < nk; ++k)
        out.thresholds.push_back(commodity_cost(inst, k, TollVector::unbounded(1)) -
                                 commodity_cost(inst, k, TollVector::zeros(1)));
    std::vector<int> order(static_cast<std::size_t>(nk));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return out.thresholds[static_cast<std::size_t>(a)] > out.thresholds[static_cast<std::size_t>(b)];
    });
    double volume = 0.0;
    for (int k : order) {
        volume += inst.commodity(k).demand;
        const double price = out.thresholds[static_cast<std::size_t>(k)];
        const double revenue = volume * price;
        if (revenue > out.revenue + kTol.zero) {
            out.revenue = revenue;
            out.toll = price;
        }
    }
    return out;
}

}  // namespace npp
