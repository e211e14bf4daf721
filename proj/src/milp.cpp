#include "npp/milp.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>

#include "json.hpp"
#include "json_number.hpp"
#include "npp/error.hpp"
#include "npp/tolerances.hpp"

namespace npp {

namespace {

constexpr double kIntegrality = 1e-6;
constexpr double kPrune = 1e-6;

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}


struct Node {
    std::vector<std::int8_t> fixed;  // per binary: -1 free, else the fixed value
    double bound;
    long id;
};

}  // namespace

int MilpModel::binary_count() const {
    int n = 0;
    for (const auto& row : z) n += static_cast<int>(row.size());
    return n;
}

double toll_bound(const Instance& inst) {
    const TollVector open = TollVector::zeros(inst.tolled_count());
    const TollVector closed = TollVector::unbounded(inst.tolled_count());
    double m = 0.0;
    for (int k = 0; k < inst.commodity_count(); ++k)
        m = std::max(m, commodity_cost(inst, k, closed) - commodity_cost(inst, k, open));
    return m;
}

MilpModel build_pastd(const Instance& inst, const PathSets& paths, const CutPool& pool) {
    const int nk = inst.commodity_count();
    const int n = inst.tolled_count();
    if (static_cast<int>(paths.size()) != nk) throw ValidationError("one path set per commodity is required");
    for (int k = 0; k < nk; ++k)
        if (paths[static_cast<std::size_t>(k)].empty())
            throw ValidationError("commodity " + std::to_string(k) + " has no bilevel feasible path");

    MilpModel m;
    m.paths = paths;
    m.big_m = toll_bound(inst);
    lp::Problem& p = m.problem;
    const double M = m.big_m;

    for (int i = 0; i < n; ++i) m.toll.push_back(p.add_column(0.0, 0.0, M));
    m.z.resize(static_cast<std::size_t>(nk));
    m.potential.resize(static_cast<std::size_t>(nk));
    for (int k = 0; k < nk; ++k) {
        const Commodity& com = inst.commodity(k);
        for (std::size_t q = 0; q < paths[static_cast<std::size_t>(k)].size(); ++q)
            m.z[static_cast<std::size_t>(k)].push_back(p.add_column(0.0, 0.0, 1.0));
        for (int v = 0; v < inst.node_count(); ++v)
            m.potential[static_cast<std::size_t>(k)].push_back(
                v == com.destination ? p.add_column(0.0, 0.0, 0.0) : p.add_column(0.0, -lp::kInf, lp::kInf));
        for (std::size_t q = 0; q < paths[static_cast<std::size_t>(k)].size(); ++q) {
            const PathRecord& rec = paths[static_cast<std::size_t>(k)][q];
            for (int i = 0; i < n; ++i)
                if (rec.usage[static_cast<std::size_t>(i)])
                    m.products.push_back({k, static_cast<int>(q), i, p.add_column(com.demand, 0.0, M)});
        }
    }

    for (int k = 0; k < nk; ++k) {
        std::vector<lp::Term> row;
        for (int c : m.z[static_cast<std::size_t>(k)]) row.push_back({c, 1.0});
        p.add_row(row, lp::RowType::equal, 1.0);
        ++m.flow_rows;
    }
    for (int k = 0; k < nk; ++k) {
        const auto& y = m.potential[static_cast<std::size_t>(k)];
        for (int a = 0; a < inst.arc_count(); ++a) {
            const Arc& arc = inst.arc(a);
            std::vector<lp::Term> row{{y[static_cast<std::size_t>(arc.tail)], 1.0}, {y[static_cast<std::size_t>(arc.head)], -1.0}};
            if (const int i = inst.tolled_index(a); i >= 0) row.push_back({m.toll[static_cast<std::size_t>(i)], -1.0});
            p.add_row(row, lp::RowType::less_equal, arc.cost);
            ++m.dual_rows;
        }
    }
    for (int k = 0; k < nk; ++k) {
        const Commodity& com = inst.commodity(k);
        const auto& y = m.potential[static_cast<std::size_t>(k)];
        std::vector<lp::Term> row;
        for (std::size_t q = 0; q < paths[static_cast<std::size_t>(k)].size(); ++q)
            row.push_back({m.z[static_cast<std::size_t>(k)][q], paths[static_cast<std::size_t>(k)][q].base_cost});
        for (const auto& prod : m.products)
            if (prod.commodity == k) row.push_back({prod.column, 1.0});
        row.push_back({y[static_cast<std::size_t>(com.origin)], -1.0});
        p.add_row(row, lp::RowType::equal, 0.0);
        ++m.duality_rows;
    }
    for (const auto& prod : m.products) {
        const int zc = m.z[static_cast<std::size_t>(prod.commodity)][static_cast<std::size_t>(prod.path)];
        const int tc = m.toll[static_cast<std::size_t>(prod.tolled)];
        p.add_row({{prod.column, 1.0}, {zc, -M}}, lp::RowType::less_equal, 0.0);
        p.add_row({{prod.column, 1.0}, {tc, -1.0}}, lp::RowType::less_equal, 0.0);
        p.add_row({{tc, 1.0}, {prod.column, -1.0}, {zc, M}}, lp::RowType::less_equal, M);
        m.mccormick_rows += 3;
    }
    for (const Cut& cut : pool.cuts) {
        if (cut.first < 0 || cut.first >= nk || cut.second < 0 || cut.second >= nk || cut.first == cut.second)
            throw ValidationError("cut refers to an unknown commodity pair");
        std::vector<lp::Term> row;
        auto add = [&](int k, const std::vector<int>& ids) {
            for (int q : ids) {
                if (q < 0 || q >= static_cast<int>(m.z[static_cast<std::size_t>(k)].size()))
                    throw ValidationError("cut refers to an unknown path");
                row.push_back({m.z[static_cast<std::size_t>(k)][static_cast<std::size_t>(q)], 1.0});
            }
        };
        add(cut.first, cut.first_paths);
        add(cut.second, cut.second_paths);
        p.add_row(row, lp::RowType::less_equal, 1.0);
        ++m.cut_rows;
    }
    return m;
}

std::string_view to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::optimal: return "optimal";
        case SolveStatus::gap_limit: return "gap-limit";
        case SolveStatus::time_limit: return "time-limit";
    }
    return "unknown";
}

SolveReport branch_and_bound(const Instance& inst, const MilpModel& model, const Limits& limits,
                             const IntegralObserver& observer) {
    const auto start = Clock::now();
    std::vector<int> binaries;
    for (const auto& row : model.z) binaries.insert(binaries.end(), row.begin(), row.end());
    const std::size_t nb = binaries.size();

    lp::Simplex sx(model.problem);
    std::vector<std::int8_t> applied(nb, -1);
    bool solved_once = false;

    bool have_incumbent = false;
    double incumbent = 0.0;
    std::vector<double> best_primal;

    std::vector<Node> open;
    open.push_back({std::vector<std::int8_t>(nb, -1), lp::kInf, 0});
    long next_id = 1;
    SolveReport rep;
    rep.status = SolveStatus::optimal;

    auto open_bound = [&] {
        double b = -lp::kInf;
        for (const Node& nd : open) b = std::max(b, nd.bound);
        return b;
    };

    while (!open.empty()) {
        if (elapsed_ms(start) > limits.time_seconds * 1000.0) {
            rep.status = SolveStatus::time_limit;
            break;
        }
        if (have_incumbent && limits.gap > 0.0) {
            const double b = std::max(open_bound(), incumbent);
            if ((b - incumbent) / std::max(std::fabs(b), 1.0) <= limits.gap) {
                rep.status = SolveStatus::gap_limit;
                break;
            }
        }
        std::size_t pick = open.size() - 1;
        if (have_incumbent)
            for (std::size_t i = 0; i < open.size(); ++i)
                if (open[i].bound > open[pick].bound || (open[i].bound == open[pick].bound && open[i].id > open[pick].id))
                    pick = i;
        Node node = std::move(open[pick]);
        open.erase(open.begin() + static_cast<std::ptrdiff_t>(pick));
        if (have_incumbent && node.bound <= incumbent + kPrune) continue;

        for (std::size_t b = 0; b < nb; ++b)
            if (node.fixed[b] != applied[b]) {
                const double lo = node.fixed[b] == 1 ? 1.0 : 0.0;
                const double up = node.fixed[b] == 0 ? 0.0 : 1.0;
                sx.set_column_bounds(binaries[b], lo, up);
                applied[b] = node.fixed[b];
            }
        const lp::Status st = solved_once ? sx.reoptimize() : sx.solve();
        solved_once = true;
        ++rep.nodes;
        if (st == lp::Status::infeasible) continue;
        if (st != lp::Status::optimal) throw Error(std::string("node relaxation ended ") + std::string(lp::to_string(st)));
        const double value = sx.objective_value();
        if (have_incumbent && value <= incumbent + kPrune) continue;

        std::size_t branch = nb;
        double frac_best = kIntegrality;
        for (std::size_t b = 0; b < nb; ++b) {
            const double v = sx.column_value(binaries[b]);
            const double frac = std::min(v, 1.0 - v);
            if (frac > frac_best) {
                frac_best = frac;
                branch = b;
            }
        }
        if (branch == nb) {
            std::vector<double> x = sx.primal();
            if (observer) observer(model, x);
            have_incumbent = true;
            incumbent = value;
            best_primal = std::move(x);
            continue;
        }
        Node down{node.fixed, value, next_id++};
        down.fixed[branch] = 0;
        Node up{std::move(node.fixed), value, next_id++};
        up.fixed[branch] = 1;
        open.push_back(std::move(down));
        open.push_back(std::move(up));
    }

    const int nk = inst.commodity_count();
    std::vector<std::vector<double>> flows(static_cast<std::size_t>(nk));
    rep.selection.assign(static_cast<std::size_t>(nk), 0);
    for (int k = 0; k < nk; ++k) {
        const auto& zk = model.z[static_cast<std::size_t>(k)];
        int chosen = -1;
        if (have_incumbent) {
            for (std::size_t q = 0; q < zk.size(); ++q)
                if (best_primal[static_cast<std::size_t>(zk[q])] > 0.5) chosen = static_cast<int>(q);
        } else {
            const auto& set = model.paths[static_cast<std::size_t>(k)];
            for (std::size_t q = 0; q < set.size() && chosen < 0; ++q)
                if (std::all_of(set[q].usage.begin(), set[q].usage.end(), [](int u) { return u == 0; }))
                    chosen = static_cast<int>(q);
        }
        if (chosen < 0) throw Error("no path selected for commodity " + std::to_string(k));
        rep.selection[static_cast<std::size_t>(k)] = chosen;
        flows[static_cast<std::size_t>(k)] = path_flow(inst, model.paths[static_cast<std::size_t>(k)][static_cast<std::size_t>(chosen)].arcs);
    }
    const PriceResult price = price_for_paths(inst, flows);
    rep.t = price.tolls;
    rep.w.assign(static_cast<std::size_t>(inst.tolled_count()), 0.0);
    for (int k = 0; k < nk; ++k) {
        const PathRecord& rec = model.paths[static_cast<std::size_t>(k)][static_cast<std::size_t>(rep.selection[static_cast<std::size_t>(k)])];
        for (int i = 0; i < inst.tolled_count(); ++i)
            rep.w[static_cast<std::size_t>(i)] += inst.commodity(k).demand * rec.usage[static_cast<std::size_t>(i)];
    }
    rep.revenue = have_incumbent ? incumbent : price.revenue;
    rep.bound = rep.status == SolveStatus::optimal ? rep.revenue : std::max(open_bound(), rep.revenue);
    if (!std::isfinite(rep.bound)) rep.bound = lp::kInf;
    rep.gap = (rep.bound - rep.revenue) / std::max(std::fabs(rep.bound), 1.0);
    if (!std::isfinite(rep.gap)) rep.gap = lp::kInf;
    rep.cuts = model.cut_rows;
    rep.millis = elapsed_ms(start);
    return rep;
}

SolveReport solve_milp(const Instance& inst, int pair_limit, const Limits& limits, const IntegralObserver& observer) {
    const auto start = Clock::now();
    const PathSets paths = enumerate_bf_paths(inst);
    const CutPool pool = generate_cuts(inst, paths, pair_limit);
    const MilpModel model = build_pastd(inst, paths, pool);
    SolveReport rep = branch_and_bound(inst, model, limits, observer);
    rep.cut_millis = pool.millis;
    rep.millis = elapsed_ms(start);
    return rep;
}

std::string report_to_json(const SolveReport& r) {
    nlohmann::json doc;
    doc["revenue"] = detail::json_number(r.revenue);
    doc["bound"] = std::isfinite(r.bound) ? detail::json_number(r.bound) : nlohmann::json("unbounded");
    doc["gap"] = std::isfinite(r.gap) ? detail::json_number(r.gap) : nlohmann::json("unbounded");
    doc["nodes"] = r.nodes;
    doc["millis"] = r.millis;
    doc["status"] = std::string(to_string(r.status));
    doc["cuts"] = r.cuts;
    doc["cut_millis"] = r.cut_millis;
    nlohmann::json w = nlohmann::json::array(), t = nlohmann::json::array();
    for (double v : r.w) w.push_back(detail::json_number(v));
    for (int i = 0; i < r.t.size(); ++i) t.push_back(r.t.is_unbounded(i) ? nlohmann::json("unbounded") : detail::json_number(r.t[i]));
    doc["w"] = std::move(w);
    doc["t"] = std::move(t);
    return doc.dump();
}

}  // namespace npp
