#include "npp/follower.hpp"

#include <cmath>
#include <queue>
#include <sstream>

#include "flow_model.hpp"
#include "npp/error.hpp"
#include "npp/lp.hpp"
#include "npp/tolerances.hpp"

namespace npp {

namespace {

void check_tolls(const Instance& inst, const TollVector& tolls) {
    if (tolls.size() != inst.tolled_count()) throw PreconditionError("toll vector length differs from tolled arc count");
}

void check_commodity(const Instance& inst, int k) {
    if (k < 0 || k >= inst.commodity_count()) throw PreconditionError("commodity index out of range");
}

Reaction make_reaction(const Instance& inst, int k, std::vector<double> flow, std::span<const double> arc_cost,
                       std::span<const double> tolls) {
    Reaction r;
    r.commodity = k;
    r.path = detail::extract_path(inst, k, flow, arc_cost);
    r.usage = path_usage(inst, r.path);
    for (int a = 0; a < inst.arc_count(); ++a) {
        const double x = flow[static_cast<std::size_t>(a)];
        if (x == 0.0) continue;
        r.base_cost += inst.arc(a).cost * x;
        const int i = inst.tolled_index(a);
        if (i >= 0 && !tolls.empty()) r.revenue += tolls[static_cast<std::size_t>(i)] * x;
    }
    r.total_cost = r.base_cost + r.revenue;
    std::vector<double> indicator = path_flow(inst, r.path);
    for (std::size_t a = 0; a < flow.size(); ++a)
        if (std::fabs(flow[a] - indicator[a]) > 1e-6) r.simple_path = false;
    if (r.path.empty()) r.simple_path = false;
    r.flow = std::move(flow);
    return r;
}

std::vector<double> flow_from_columns(const Instance& inst, const std::vector<int>& col, const lp::Simplex& sx) {
    std::vector<double> flow(static_cast<std::size_t>(inst.arc_count()), 0.0);
    for (int a = 0; a < inst.arc_count(); ++a) {
        const int c = col[static_cast<std::size_t>(a)];
        if (c < 0) continue;
        double v = sx.column_value(c);
        if (std::fabs(v) < 1e-11) v = 0.0;
        if (std::fabs(v - std::round(v)) < 1e-9) v = std::round(v);
        flow[static_cast<std::size_t>(a)] = v;
    }
    return flow;
}

}  // namespace

TollVector::TollVector(std::vector<double> values) : values_(std::move(values)) {
    for (double v : values_)
        if (std::isnan(v) || v < 0.0) throw PreconditionError("tolls must be non-negative");
}

TollVector TollVector::unbounded(int n) {
    return TollVector(std::vector<double>(static_cast<std::size_t>(n), std::numeric_limits<double>::infinity()));
}

bool TollVector::is_unbounded(int i) const { return std::isinf(values_.at(static_cast<std::size_t>(i))); }

std::vector<double> path_flow(const Instance& inst, std::span<const int> path) {
    std::vector<double> x(static_cast<std::size_t>(inst.arc_count()), 0.0);
    for (int a : path) x[static_cast<std::size_t>(a)] += 1.0;
    return x;
}

double path_base_cost(const Instance& inst, std::span<const int> path) {
    double c = 0.0;
    for (int a : path) c += inst.arc(a).cost;
    return c;
}

std::vector<int> path_usage(const Instance& inst, std::span<const int> path) {
    std::vector<int> w(static_cast<std::size_t>(inst.tolled_count()), 0);
    for (int a : path) {
        const int i = inst.tolled_index(a);
        if (i >= 0) w[static_cast<std::size_t>(i)] += 1;
    }
    return w;
}

double commodity_cost(const Instance& inst, int commodity, const TollVector& tolls) {
    check_commodity(inst, commodity);
    check_tolls(inst, tolls);
    const std::vector<double> cost = detail::tolled_costs(inst, tolls.values());
    const Commodity& k = inst.commodity(commodity);
    std::vector<double> dist(static_cast<std::size_t>(inst.node_count()), std::numeric_limits<double>::infinity());
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> open;
    dist[static_cast<std::size_t>(k.origin)] = 0.0;
    open.push({0.0, k.origin});
    while (!open.empty()) {
        auto [d, v] = open.top();
        open.pop();
        if (d > dist[static_cast<std::size_t>(v)]) continue;
        if (v == k.destination) return d;
        for (int a : inst.out_arcs(v)) {
            const double c = cost[static_cast<std::size_t>(a)];
            if (!std::isfinite(c)) continue;
            const int h = inst.arc(a).head;
            if (d + c < dist[static_cast<std::size_t>(h)]) {
                dist[static_cast<std::size_t>(h)] = d + c;
                open.push({d + c, h});
            }
        }
    }
    return dist[static_cast<std::size_t>(k.destination)];
}

double follower_cost(const Instance& inst, const TollVector& tolls) {
    double total = 0.0;
    for (int k = 0; k < inst.commodity_count(); ++k) total += inst.commodity(k).demand * commodity_cost(inst, k, tolls);
    return total;
}

Reaction shortest_path(const Instance& inst, int commodity, const TollVector& tolls) {
    check_commodity(inst, commodity);
    check_tolls(inst, tolls);
    const std::vector<double> cost = detail::tolled_costs(inst, tolls.values());
    lp::Problem p(lp::Sense::minimize);
    std::vector<int> col = detail::add_commodity_flow(p, inst, commodity, 1.0, cost);
    lp::Simplex sx(p);
    if (sx.solve() != lp::Status::optimal) throw Error("shortest path model failed to solve");
    std::vector<double> toll_obj(static_cast<std::size_t>(p.column_count()), 0.0);
    for (int a = 0; a < inst.arc_count(); ++a) {
        const int i = inst.tolled_index(a);
        const int c = col[static_cast<std::size_t>(a)];
        if (i >= 0 && c >= 0) toll_obj[static_cast<std::size_t>(c)] = tolls[i];
    }
    if (sx.optimize_over_optimal_face(toll_obj, lp::Sense::maximize) != lp::Status::optimal)
        throw Error("shortest path tie-break failed to solve");
    Reaction r = make_reaction(inst, commodity, flow_from_columns(inst, col, sx), cost, tolls.values());
    r.total_cost = commodity_cost(inst, commodity, tolls);
    return r;
}

std::optional<Reaction> fill_tollfree(const Instance& inst, int commodity, std::span<const int> usage) {
    check_commodity(inst, commodity);
    if (static_cast<int>(usage.size()) != inst.tolled_count())
        throw PreconditionError("usage vector length differs from tolled arc count");
    std::vector<double> cost(static_cast<std::size_t>(inst.arc_count()));
    for (int a = 0; a < inst.arc_count(); ++a) cost[static_cast<std::size_t>(a)] = inst.arc(a).cost;
    lp::Problem p(lp::Sense::minimize);
    std::vector<int> col = detail::add_commodity_flow(p, inst, commodity, 1.0, cost);
    for (int i = 0; i < inst.tolled_count(); ++i) {
        const double u = usage[static_cast<std::size_t>(i)];
        p.set_bounds(col[static_cast<std::size_t>(inst.tolled_arc(i))], u, u);
    }
    lp::Simplex sx(p);
    const lp::Status s = sx.solve();
    if (s == lp::Status::infeasible) return std::nullopt;
    if (s != lp::Status::optimal) throw Error("toll-free completion model failed to solve");
    return make_reaction(inst, commodity, flow_from_columns(inst, col, sx), cost, {});
}

PriceResult price_for_paths(const Instance& inst, std::span<const std::vector<double>> flows) {
    const int nk = inst.commodity_count();
    const int n = inst.tolled_count();
    if (static_cast<int>(flows.size()) != nk) throw PreconditionError("one flow per commodity is required");
    for (const auto& f : flows)
        if (static_cast<int>(f.size()) != inst.arc_count()) throw PreconditionError("flow length differs from arc count");

    lp::Problem p(lp::Sense::maximize);
    std::vector<int> tcol(static_cast<std::size_t>(n));
    std::vector<char> used(static_cast<std::size_t>(n), 0);
    for (int i = 0; i < n; ++i) {
        double weight = 0.0;
        for (int k = 0; k < nk; ++k) {
            const double x = flows[static_cast<std::size_t>(k)][static_cast<std::size_t>(inst.tolled_arc(i))];
            weight += inst.commodity(k).demand * x;
            if (x > 0.0) used[static_cast<std::size_t>(i)] = 1;
        }
        tcol[static_cast<std::size_t>(i)] = p.add_column(weight, 0.0, inst.toll_cap());
    }
    for (int k = 0; k < nk; ++k) {
        const Commodity& com = inst.commodity(k);
        std::vector<int> y(static_cast<std::size_t>(inst.node_count()));
        for (int v = 0; v < inst.node_count(); ++v)
            y[static_cast<std::size_t>(v)] =
                v == com.destination ? p.add_column(0.0, 0.0, 0.0) : p.add_column(0.0, -lp::kInf, lp::kInf);
        const auto& x = flows[static_cast<std::size_t>(k)];
        std::vector<lp::Term> sd{{y[static_cast<std::size_t>(com.origin)], 1.0}, {y[static_cast<std::size_t>(com.destination)], -1.0}};
        double base = 0.0;
        for (int a = 0; a < inst.arc_count(); ++a) {
            const Arc& arc = inst.arc(a);
            const int i = inst.tolled_index(a);
            std::vector<lp::Term> row{{y[static_cast<std::size_t>(arc.tail)], 1.0}, {y[static_cast<std::size_t>(arc.head)], -1.0}};
            if (i >= 0) row.push_back({tcol[static_cast<std::size_t>(i)], -1.0});
            p.add_row(row, lp::RowType::less_equal, arc.cost);
            const double xa = x[static_cast<std::size_t>(a)];
            base += arc.cost * xa;
            if (i >= 0 && xa != 0.0) sd.push_back({tcol[static_cast<std::size_t>(i)], -xa});
        }
        p.add_row(sd, lp::RowType::equal, base);
    }

    PriceResult out;
    lp::Simplex sx(p);
    const lp::Status s = sx.solve();
    if (s == lp::Status::infeasible) {
        out.tolls = TollVector::unbounded(n);
        return out;
    }
    if (s != lp::Status::optimal) throw Error("pricing model failed to solve");
    std::vector<double> push(static_cast<std::size_t>(p.column_count()), 0.0);
    for (int i = 0; i < n; ++i)
        if (!used[static_cast<std::size_t>(i)]) push[static_cast<std::size_t>(tcol[static_cast<std::size_t>(i)])] = 1.0;
    if (sx.optimize_over_optimal_face(push, lp::Sense::maximize) != lp::Status::optimal)
        throw Error("pricing tie-break failed to solve");

    std::vector<double> t(static_cast<std::size_t>(n));
    const double cap = inst.toll_cap();
    for (int i = 0; i < n; ++i) {
        double v = sx.column_value(tcol[static_cast<std::size_t>(i)]);
        if (v >= cap - kTol.zero * std::max(1.0, cap)) v = std::numeric_limits<double>::infinity();
        t[static_cast<std::size_t>(i)] = std::max(0.0, v);
    }
    out.feasible = true;
    out.tolls = TollVector(std::move(t));
    for (int k = 0; k < nk; ++k)
        for (int i = 0; i < n; ++i) {
            const double x = flows[static_cast<std::size_t>(k)][static_cast<std::size_t>(inst.tolled_arc(i))];
            if (x != 0.0) out.revenue += inst.commodity(k).demand * x * out.tolls[i];
        }
    return out;
}

std::vector<PlotSample> reaction_plot_sample(const Instance& inst,
                                             std::span<const std::pair<double, double>> box, int resolution) {
    const int n = inst.tolled_count();
    if (static_cast<int>(box.size()) != n) throw PreconditionError("box needs one range per tolled arc");
    if (resolution < 1) throw PreconditionError("resolution must be positive");
    for (const auto& [lo, hi] : box)
        if (!(lo >= 0.0) || !(hi >= lo) || !std::isfinite(hi)) throw PreconditionError("box ranges must be finite, ordered and non-negative");
    std::size_t total = 1;
    for (int i = 0; i < n; ++i) total *= static_cast<std::size_t>(resolution);

    std::vector<PlotSample> out;
    out.reserve(total);
    std::vector<int> idx(static_cast<std::size_t>(n), 0);
    for (std::size_t s = 0; s < total; ++s) {
        PlotSample sample;
        for (int i = 0; i < n; ++i) {
            const auto& [lo, hi] = box[static_cast<std::size_t>(i)];
            const double step = resolution > 1 ? (hi - lo) / (resolution - 1) : 0.0;
            sample.tolls.push_back(lo + step * idx[static_cast<std::size_t>(i)]);
        }
        TollVector t(sample.tolls);
        sample.aggregate.assign(static_cast<std::size_t>(n), 0);
        for (int k = 0; k < inst.commodity_count(); ++k) {
            Reaction r = shortest_path(inst, k, t);
            for (int i = 0; i < n; ++i) sample.aggregate[static_cast<std::size_t>(i)] += r.usage[static_cast<std::size_t>(i)];
            sample.usage.push_back(std::move(r.usage));
        }
        out.push_back(std::move(sample));
        for (int i = n - 1; i >= 0; --i) {
            if (++idx[static_cast<std::size_t>(i)] < resolution) break;
            idx[static_cast<std::size_t>(i)] = 0;
        }
    }
    return out;
}

std::string plot_csv(const Instance& inst, std::span<const PlotSample> samples) {
    const int n = inst.tolled_count();
    std::ostringstream os;
    os.precision(10);
    for (int i = 0; i < n; ++i) os << "t_" << i + 1 << ',';
    os << 'k';
    for (int i = 0; i < n; ++i) os << ",w_" << i + 1;
    os << '\n';
    auto emit = [&](const PlotSample& s, int k, const std::vector<int>& w) {
        for (double t : s.tolls) os << t << ',';
        os << k;
        for (int v : w) os << ',' << v;
        os << '\n';
    };
    for (const PlotSample& s : samples) {
        for (std::size_t k = 0; k < s.usage.size(); ++k) emit(s, static_cast<int>(k), s.usage[k]);
        emit(s, -1, s.aggregate);
    }
    return os.str();
}

}  // namespace npp
