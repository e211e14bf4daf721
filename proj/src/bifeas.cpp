#include "npp/bifeas.hpp"

#include <cmath>
#include <functional>

#include "flow_model.hpp"
#include "npp/conjugate.hpp"
#include "npp/error.hpp"
#include "npp/follower.hpp"
#include "npp/lp.hpp"
#include "npp/tolerances.hpp"

namespace npp {

namespace {

void check_composition(const Instance& inst, std::span<const PathRecord> composition) {
    std::vector<char> seen(static_cast<std::size_t>(inst.commodity_count()), 0);
    for (const PathRecord& r : composition) {
        if (r.commodity < 0 || r.commodity >= inst.commodity_count()) throw PreconditionError("record commodity out of range");
        if (seen[static_cast<std::size_t>(r.commodity)]++) throw PreconditionError("composition repeats a commodity");
        if (static_cast<int>(r.usage.size()) != inst.tolled_count()) throw PreconditionError("record usage length mismatch");
    }
}

std::vector<double> aggregate_usage(const Instance& inst, std::span<const PathRecord> composition) {
    std::vector<double> w(static_cast<std::size_t>(inst.tolled_count()), 0.0);
    for (const PathRecord& r : composition)
        for (int i = 0; i < inst.tolled_count(); ++i)
            w[static_cast<std::size_t>(i)] += inst.commodity(r.commodity).demand * r.usage[static_cast<std::size_t>(i)];
    return w;
}

double aggregate_base(const Instance& inst, std::span<const PathRecord> composition) {
    double b = 0.0;
    for (const PathRecord& r : composition) b += inst.commodity(r.commodity).demand * r.base_cost;
    return b;
}

bool close(double a, double b) { return std::fabs(a - b) <= kTol.duality_gap * std::max(1.0, std::fabs(b)); }

}  // namespace

std::string to_string(Strength s) {
    switch (s) {
        case Strength::strong: return "strong";
        case Strength::weak: return "weak";
        case Strength::infeasible_composition: return "infeasible-composition";
    }
    return "unknown";
}

double commodity_capacity_cost(const Instance& inst, int commodity, std::span<const int> usage) {
    std::vector<double> cap(usage.begin(), usage.end());
    const int only[] = {commodity};
    return conjugate_g(inst, cap, only, true).value;
}

std::vector<PathRecord> enumerate_bf_paths(const Instance& inst, int commodity, long budget) {
    if (commodity < 0 || commodity >= inst.commodity_count()) throw PreconditionError("commodity index out of range");
    const int n = inst.tolled_count();
    if (n >= 62 || (1L << n) > budget) throw BudgetExceeded("usage patterns exceed the path enumeration budget");

    std::vector<PathRecord> candidates;
    std::vector<int> usage(static_cast<std::size_t>(n), 0);
    for (long s = 0; s < (1L << n); ++s) {
        for (int i = 0; i < n; ++i) usage[static_cast<std::size_t>(i)] = static_cast<int>((s >> (n - 1 - i)) & 1L);
        std::optional<Reaction> fill = fill_tollfree(inst, commodity, usage);
        if (!fill || !fill->simple_path || fill->usage != usage) continue;
        const double base = path_base_cost(inst, fill->path);
        if (!close(base, commodity_capacity_cost(inst, commodity, usage))) continue;
        candidates.push_back({commodity, fill->path, base, usage});
    }

    // Keep only patterns whose toll region has an interior; the rest tie with a
    // cheaper-or-equal pattern everywhere they are optimal.
    PathSets sets(static_cast<std::size_t>(inst.commodity_count()));
    sets[static_cast<std::size_t>(commodity)] = candidates;
    std::vector<PathRecord> out;
    for (const PathRecord& r : candidates) {
        const PathRecord one[] = {r};
        if (toll_set_margin(inst, one, sets) > kTol.feasibility) out.push_back(r);
    }
    return out;
}

PathSets enumerate_bf_paths(const Instance& inst, long budget) {
    PathSets all;
    for (int k = 0; k < inst.commodity_count(); ++k) all.push_back(enumerate_bf_paths(inst, k, budget));
    return all;
}

bool is_bf_composition(const Instance& inst, std::span<const PathRecord> composition) {
    check_composition(inst, composition);
    std::vector<int> ks;
    for (const PathRecord& r : composition) ks.push_back(r.commodity);
    const std::vector<double> w = aggregate_usage(inst, composition);
    return close(aggregate_base(inst, composition), conjugate_g(inst, w, ks, false).value);
}

SbfVerdict sbf_test(const Instance& inst, std::span<const PathRecord> composition) {
    check_composition(inst, composition);
    const int n = inst.tolled_count();
    const std::vector<double> w = aggregate_usage(inst, composition);
    const double budget = aggregate_base(inst, composition);

    std::vector<double> cost(static_cast<std::size_t>(inst.arc_count()));
    for (int a = 0; a < inst.arc_count(); ++a) cost[static_cast<std::size_t>(a)] = inst.arc(a).cost;
    lp::Problem p(lp::Sense::maximize);
    std::vector<std::vector<int>> cols;
    std::vector<lp::Term> cost_row;
    for (const PathRecord& r : composition) {
        std::vector<int> col = detail::add_commodity_flow(p, inst, r.commodity, inst.commodity(r.commodity).demand, cost);
        for (int a = 0; a < inst.arc_count(); ++a) {
            const int c = col[static_cast<std::size_t>(a)];
            const int i = inst.tolled_index(a);
            p.set_cost(c, i >= 0 && r.usage[static_cast<std::size_t>(i)] == 0 ? 1.0 : 0.0);
            if (cost[static_cast<std::size_t>(a)] != 0.0) cost_row.push_back({c, cost[static_cast<std::size_t>(a)]});
        }
        cols.push_back(std::move(col));
    }
    std::vector<int> cap_rows;
    for (int i = 0; i < n; ++i) {
        std::vector<lp::Term> row;
        for (const auto& col : cols) row.push_back({col[static_cast<std::size_t>(inst.tolled_arc(i))], 1.0});
        cap_rows.push_back(p.add_row(row, lp::RowType::less_equal, w[static_cast<std::size_t>(i)]));
    }
    p.add_row(cost_row, lp::RowType::less_equal, budget);

    lp::Simplex sx(p);
    if (sx.solve() != lp::Status::optimal) throw Error("strong feasibility model failed to solve");
    SbfVerdict v;
    v.objective = sx.objective_value();
    double spent = 0.0;
    for (const auto& col : cols) {
        std::vector<double> f(static_cast<std::size_t>(inst.arc_count()), 0.0);
        for (int a = 0; a < inst.arc_count(); ++a) {
            double x = sx.column_value(col[static_cast<std::size_t>(a)]);
            if (std::fabs(x) < 1e-11) x = 0.0;
            f[static_cast<std::size_t>(a)] = x;
            spent += cost[static_cast<std::size_t>(a)] * x;
        }
        v.certificate.push_back(std::move(f));
    }
    const double ftol = kTol.feasibility * std::max(1.0, std::fabs(budget));
    v.cost_tight = spent >= budget - ftol;
    for (int i = 0; i < n; ++i) {
        double used = 0.0;
        for (const auto& f : v.certificate) used += f[static_cast<std::size_t>(inst.tolled_arc(i))];
        if (used < w[static_cast<std::size_t>(i)] - kTol.feasibility) v.capacity_tight = false;
    }
    // An optimal face may mix cost-tight and cost-slack points, so feasibility of the
    // composition is read from the capacitated cost itself.
    std::vector<int> ks;
    for (const PathRecord& r : composition) ks.push_back(r.commodity);
    const double g = conjugate_g(inst, w, ks, false).value;
    if (!close(budget, g)) {
        v.classification = Strength::infeasible_composition;
        v.cost_tight = false;
    } else if (v.objective > kTol.zero) {
        v.classification = Strength::weak;
    } else {
        v.classification = v.capacity_tight ? Strength::strong : Strength::weak;
    }
    return v;
}

Classification classify_w(const Instance& inst, std::span<const int> usage) {
    return classify_w(inst, usage, enumerate_bf_paths(inst));
}

Classification classify_w(const Instance& inst, std::span<const int> usage, const PathSets& paths) {
    const int n = inst.tolled_count();
    const int nk = inst.commodity_count();
    if (!inst.unit_demand()) throw PreconditionError("classification requires unit demands");
    if (static_cast<int>(usage.size()) != n) throw PreconditionError("usage length differs from tolled arc count");
    for (int v : usage)
        if (v < 0 || v > nk) throw PreconditionError("usage entries must lie in 0..|K|");
    if (static_cast<int>(paths.size()) != nk) throw PreconditionError("one path set per commodity is required");

    Classification out;
    std::vector<double> wd(usage.begin(), usage.end());
    out.g_value = conjugate_g(inst, wd).value;

    constexpr std::size_t kMaxWitnesses = 16;
    std::vector<int> remaining(usage.begin(), usage.end());
    std::vector<PathRecord> pick;
    std::function<void(int, double)> search = [&](int k, double base) {
        if (out.witnesses.size() >= kMaxWitnesses) return;
        if (k == nk) {
            for (int v : remaining)
                if (v != 0) return;
            if (close(base, out.g_value)) out.witnesses.push_back(pick);
            return;
        }
        for (const PathRecord& r : paths[static_cast<std::size_t>(k)]) {
            bool fits = true;
            for (int i = 0; i < n; ++i)
                if (r.usage[static_cast<std::size_t>(i)] > remaining[static_cast<std::size_t>(i)]) fits = false;
            if (!fits) continue;
            for (int i = 0; i < n; ++i) remaining[static_cast<std::size_t>(i)] -= r.usage[static_cast<std::size_t>(i)];
            pick.push_back(r);
            search(k + 1, base + r.base_cost);
            pick.pop_back();
            for (int i = 0; i < n; ++i) remaining[static_cast<std::size_t>(i)] += r.usage[static_cast<std::size_t>(i)];
        }
    };
    search(0, 0.0);

    if (out.witnesses.empty()) {
        out.classification = Strength::weak;
        out.reason = "no path composition attains the capacitated cost; only fractional decompositions exist";
    } else if (out.witnesses.size() > 1) {
        out.classification = Strength::weak;
        out.reason = "several path compositions attain the capacitated cost";
    } else {
        SbfVerdict v = sbf_test(inst, out.witnesses.front());
        out.classification = v.classification == Strength::strong ? Strength::strong : Strength::weak;
        out.reason = v.classification == Strength::strong ? "unique composition with every capacity binding"
                                                          : "unique path composition admits a cheaper-or-equal alternative";
    }
    return out;
}

double toll_set_margin(const Instance& inst, std::span<const PathRecord> composition, const PathSets& paths) {
    check_composition(inst, composition);
    const int n = inst.tolled_count();
    const double cap = inst.toll_cap();
    lp::Problem p(lp::Sense::maximize);
    std::vector<int> t(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) t[static_cast<std::size_t>(i)] = p.add_column(0.0, 0.0, cap);
    const int eps = p.add_column(1.0, -lp::kInf, 1.0);
    for (int i = 0; i < n; ++i) {
        p.add_row({{t[static_cast<std::size_t>(i)], 1.0}, {eps, -1.0}}, lp::RowType::greater_equal, 0.0);
        p.add_row({{t[static_cast<std::size_t>(i)], 1.0}, {eps, 1.0}}, lp::RowType::less_equal, cap);
    }
    for (const PathRecord& r : composition) {
        for (const PathRecord& alt : paths.at(static_cast<std::size_t>(r.commodity))) {
            if (alt.usage == r.usage) continue;
            std::vector<lp::Term> row{{eps, 1.0}};
            for (int i = 0; i < n; ++i) {
                const int diff = r.usage[static_cast<std::size_t>(i)] - alt.usage[static_cast<std::size_t>(i)];
                if (diff != 0) row.push_back({t[static_cast<std::size_t>(i)], static_cast<double>(diff)});
            }
            p.add_row(row, lp::RowType::less_equal, alt.base_cost - r.base_cost);
        }
    }
    lp::Simplex sx(p);
    if (sx.solve() != lp::Status::optimal) throw Error("toll set margin model failed to solve");
    return sx.objective_value();
}

}  // namespace npp
