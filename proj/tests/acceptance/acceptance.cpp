#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "npp/bifeas.hpp"
#include "npp/cli.hpp"
#include "npp/conjugate.hpp"
#include "npp/cuts.hpp"
#include "npp/follower.hpp"
#include "npp/instance.hpp"
#include "npp/milp.hpp"
#include "npp/oracle.hpp"

using namespace npp;
using nlohmann::json;

namespace {

constexpr double kValueTol = 1e-6;
constexpr double kSbfTol = 1e-9;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

std::string example_path(int id) { return std::string(NPP_DATA_DIR) + "/example" + std::to_string(id) + ".json"; }
Instance example(int id) { return load_instance(example_path(id)); }

bool near(double a, double b, double tol = kValueTol) { return std::fabs(a - b) <= tol * std::max(1.0, std::fabs(b)); }

// Collects failures; a criterion passes when nothing was recorded.
class Checker {
  public:
    void expect(bool ok, const std::string& what) {
        ++checks_;
        if (!ok && failures_.size() < 5) failures_.push_back(what);
        failed_ = failed_ || !ok;
    }
    bool passed() const { return !failed_; }
    std::string summary() const {
        if (passed()) return std::to_string(checks_) + " checks";
        std::string s;
        for (const auto& f : failures_) s += (s.empty() ? "" : "; ") + f;
        return s;
    }

  private:
    long checks_ = 0;
    bool failed_ = false;
    std::vector<std::string> failures_;
};

json cli_json(std::vector<std::string> args, int& code) {
    args.insert(args.begin(), "npp");
    std::ostringstream out, err;
    code = cli::run(args, out, err);
    return code == cli::kExitOk ? json::parse(out.str()) : json();
}

// Small grids: three tolled arcs, up to three commodities.
std::vector<Instance> oracle_corpus() {
    std::vector<Instance> corpus;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        GridConfig cfg;
        cfg.tolled_fraction = 3.0 / 24.0;
        corpus.push_back(generate_grid(3, 2 + static_cast<int>(seed % 2), seed, cfg));
    }
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        GridConfig cfg;
        cfg.tolled_fraction = 3.0 / 48.0;
        corpus.push_back(generate_grid(4, 3, 100 + seed, cfg));
    }
    return corpus;
}

int all_pairs(const Instance& g) { return g.commodity_count() * g.commodity_count(); }

void criterion1(Checker& c) {
    for (const char* method : {"enum", "milp", "oracle"}) {
        const auto start = Clock::now();
        int code = 0;
        json r = cli_json({"solve", example_path(1), "--method", method}, code);
        const double secs = seconds_since(start);
        c.expect(code == 0, std::string(method) + " exit code");
        if (code != 0) continue;
        c.expect(near(r["revenue"].get<double>(), 3.0), std::string(method) + " revenue");
        c.expect(r["w"] == json::array({1, 1}), std::string(method) + " w");
        c.expect(secs < 1.0, std::string(method) + " runtime");
    }
    int code = 0;
    json paths = cli_json({"paths", example_path(1)}, code);
    c.expect(code == 0 && paths.size() == 1, "paths output");
    if (code != 0) return;
    std::vector<std::pair<double, json>> seen;
    for (const auto& p : paths[0]["paths"]) seen.emplace_back(p["base_cost"].get<double>(), p["w"]);
    c.expect(seen.size() == 3, "three feasible paths");
    for (const auto& [cost, w] : seen) c.expect(w != json::array({0, 1}), "infeasible path listed");
    const std::vector<std::pair<double, json>> want{{5, json::array({0, 0})}, {4, json::array({1, 0})}, {2, json::array({1, 1})}};
    for (const auto& p : want) c.expect(std::find(seen.begin(), seen.end(), p) != seen.end(), "missing path");
}

void criterion2(Checker& c) {
    const auto start = Clock::now();
    int code = 0;
    json single = cli_json({"solve", example_path(2), "--method", "single-toll"}, code);
    c.expect(code == 0, "single-toll exit code");
    json en = cli_json({"solve", example_path(2), "--method", "enum"}, code);
    c.expect(code == 0, "enum exit code");
    c.expect(seconds_since(start) < 1.0, "runtime");
    if (single.is_null() || en.is_null()) return;
    c.expect(single["revenue"] == 10, "revenue");
    c.expect(single["t"] == 10, "toll");
    c.expect(en["revenue"] == single["revenue"], "agrees with enumeration");
}

void criterion3(Checker& c) {
    const auto start = Clock::now();
    const double U = std::numeric_limits<double>::infinity();
    struct Row {
        int w1, w2;
        double t1, t2, revenue;
    };
    const Row rows[] = {{0, 0, U, U, 0}, {1, 0, 5, U, 5},  {2, 0, 3, U, 6},  {0, 1, U, 6, 6}, {1, 1, 4, 5, 9},
                        {2, 1, 4, 5, 13}, {0, 2, U, 4, 8}, {1, 2, 4, 5, 14}, {2, 2, 2, 3, 10}};
    const EnumerationResult e = solve_by_enumeration(example(3));
    c.expect(e.table.size() == 9, "nine grid points");
    for (const EnumerationEntry& entry : e.table) {
        for (const Row& r : rows) {
            if (entry.capacity != std::vector<int>{r.w1, r.w2}) continue;
            const std::string tag = "w=(" + std::to_string(r.w1) + "," + std::to_string(r.w2) + ")";
            c.expect(near(entry.revenue, r.revenue), tag + " revenue");
            const double want[] = {r.t1, r.t2};
            for (int i = 0; i < 2; ++i) {
                if (std::isinf(want[i])) c.expect(entry.tolls.is_unbounded(i), tag + " unbounded toll");
                else c.expect(!entry.tolls.is_unbounded(i) && near(entry.tolls[i], want[i]), tag + " toll");
            }
        }
    }
    c.expect(near(e.revenue, 14.0) && e.capacity == std::vector<int>{1, 2}, "optimum");
    c.expect(!e.tolls.is_unbounded(0) && near(e.tolls[0], 4.0) && near(e.tolls[1], 5.0), "optimal tolls");
    c.expect(seconds_since(start) < 5.0, "runtime");
}

void criterion4(Checker& c) {
    const Instance g = example(1);
    c.expect(near(conjugate_g(g, std::vector<double>{0, 1}).value, 5.0), "g(0,1)");
    c.expect(near(conjugate_g(g, std::vector<double>{0.5, 0.5}).value, 3.5), "g(.5,.5)");
    for (double a : {0.25, 0.75})
        c.expect(near(conjugate_g(g, std::vector<double>{a, a}).value, 5.0 - 3.0 * a), "g(a,a)");
}

void criterion5(Checker& c) {
    const auto start = Clock::now();
    const Instance g3 = example(3), g6 = example(6), g7 = example(7);
    c.expect(classify_w(g3, std::vector<int>{1, 1}).classification == Strength::weak, "example 3 (1,1)");
    c.expect(classify_w(g3, std::vector<int>{1, 2}).classification == Strength::strong, "example 3 (1,2)");
    const Classification six = classify_w(g6, std::vector<int>{1, 1});
    c.expect(six.classification == Strength::weak, "example 6 (1,1)");
    c.expect(six.witnesses.size() == 2, "example 6 has two binary decompositions");
    for (const auto& dec : six.witnesses) c.expect(sbf_test(g6, dec).objective > kTol.zero, "example 6 sbf objective");
    c.expect(classify_w(g7, std::vector<int>{1, 1}).classification == Strength::weak, "example 7 (1,1)");
    const ConjugateSolution s = action_prices(g7, std::vector<double>{1, 1});
    c.expect(near(s.tolls[0], 2.0) && near(s.tolls[1], 3.0), "example 7 tolls");
    c.expect(seconds_since(start) < 5.0, "runtime");
}

void criterion6(Checker& c) {
    const auto start = Clock::now();
    const auto corpus = oracle_corpus();
    c.expect(corpus.size() >= 20, "corpus size");
    std::size_t priced = 0;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const Instance& g = corpus[i];
        const std::string tag = "instance " + std::to_string(i);
        c.expect(g.tolled_count() <= 3 && g.commodity_count() <= 3, tag + " shape");
        const double oracle = brute_force_solve(g).revenue;
        priced += oracle > kValueTol;
        c.expect(near(solve_by_enumeration(g).revenue, oracle), tag + " enumeration");
        c.expect(near(solve_milp(g, 0).revenue, oracle), tag + " milp without cuts");
        c.expect(near(solve_milp(g, all_pairs(g)).revenue, oracle), tag + " milp with cuts");
    }
    c.expect(2 * priced >= corpus.size(), "most instances earn revenue");
    c.expect(seconds_since(start) < 120.0, "runtime");
}

void criterion7(Checker& c) {
    auto corpus = oracle_corpus();
    corpus.push_back(example(3));
    corpus.push_back(example(6));
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const Instance& g = corpus[i];
        const std::string tag = "instance " + std::to_string(i);
        const PathSets paths = enumerate_bf_paths(g);
        const CutPool pool = generate_cuts(g, paths, all_pairs(g));
        for (const Cut& cut : pool.cuts)
            for (int p : cut.first_paths)
                for (int q : cut.second_paths) {
                    const PathRecord pair[] = {paths[static_cast<std::size_t>(cut.first)][static_cast<std::size_t>(p)],
                                               paths[static_cast<std::size_t>(cut.second)][static_cast<std::size_t>(q)]};
                    c.expect(sbf_test(g, pair).objective > kSbfTol, tag + " cut pair passes the test");
                }
        const SolveReport without = branch_and_bound(g, build_pastd(g, paths, {}));
        const SolveReport with = branch_and_bound(g, build_pastd(g, paths, pool));
        c.expect(near(with.revenue, without.revenue), tag + " revenue changed by cuts");
        if (i + 1 == corpus.size()) {
            c.expect(!pool.cuts.empty(), "example 6 has cuts");
            c.expect(with.nodes <= without.nodes, "example 6 node count");
        }
    }
}

void criterion8(Checker& c) {
    auto corpus = oracle_corpus();
    for (int id : {1, 2, 3, 6, 7}) corpus.push_back(example(id));

    for (const Instance& g : corpus) {
        for (const EnumerationEntry& row : solve_by_enumeration(g).table) {
            double tw = 0.0;
            for (int i = 0; i < g.tolled_count(); ++i)
                if (!row.tolls.is_unbounded(i)) tw += row.tolls[i] * row.capacity[static_cast<std::size_t>(i)];
                else c.expect(row.capacity[static_cast<std::size_t>(i)] == 0, "unbounded toll on a used arc");
            c.expect(near(follower_cost(g, row.tolls), tw + row.g_value), "fenchel pairing");
        }
    }

    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    auto pick = [&]() -> const Instance& { return corpus[rng() % corpus.size()]; };
    for (int trial = 0; trial < 100; ++trial) {
        const Instance& g = pick();
        const int n = g.tolled_count();
        std::vector<double> a, b, m;
        for (int i = 0; i < n; ++i) {
            a.push_back(g.toll_cap() * u01(rng));
            b.push_back(g.toll_cap() * u01(rng));
            m.push_back(0.5 * (a.back() + b.back()));
        }
        const double fm = follower_cost(g, TollVector(m));
        c.expect(fm >= 0.5 * (follower_cost(g, TollVector(a)) + follower_cost(g, TollVector(b))) - kValueTol,
                 "follower cost concavity");
    }
    for (int trial = 0; trial < 100; ++trial) {
        const Instance& g = pick();
        const double K = g.commodity_count();
        std::vector<double> a, b, m;
        for (int i = 0; i < g.tolled_count(); ++i) {
            a.push_back(K * u01(rng));
            b.push_back(K * u01(rng));
            m.push_back(0.5 * (a.back() + b.back()));
        }
        c.expect(conjugate_g(g, m).value <= 0.5 * (conjugate_g(g, a).value + conjugate_g(g, b).value) + kValueTol,
                 "capacitated cost convexity");
    }
    for (int trial = 0; trial < 100; ++trial) {
        const Instance& g = pick();
        const int n = g.tolled_count();
        std::vector<double> sum(static_cast<std::size_t>(n), 0.0);
        double parts = 0.0;
        for (int k = 0; k < g.commodity_count(); ++k) {
            std::vector<double> wk;
            for (int i = 0; i < n; ++i) {
                wk.push_back(u01(rng));
                sum[static_cast<std::size_t>(i)] += wk.back();
            }
            const std::vector<int> only{k};
            parts += conjugate_g(g, wk, only, true).value;
        }
        c.expect(conjugate_g(g, sum).value <= parts + kValueTol, "subadditivity");
    }

    long leaves = 0;
    for (const Instance& g : corpus) {
        auto probe = [&](const MilpModel& m, std::span<const double> x) {
            ++leaves;
            for (const auto& prod : m.products) {
                const double z = x[static_cast<std::size_t>(m.z[static_cast<std::size_t>(prod.commodity)][static_cast<std::size_t>(prod.path)])];
                const double t = x[static_cast<std::size_t>(m.toll[static_cast<std::size_t>(prod.tolled)])];
                c.expect(std::fabs(x[static_cast<std::size_t>(prod.column)] - t * std::round(z)) <= kValueTol, "mccormick exactness");
            }
        };
        solve_milp(g, 0, {}, probe);
        solve_milp(g, all_pairs(g), {}, probe);
    }
    c.expect(leaves >= static_cast<long>(2 * corpus.size()), "integral leaves visited");
}

void criterion9(Checker& c) {
    constexpr int kInstances = 10;
    double nodes_plain = 0.0, nodes_cut = 0.0;
    for (std::uint64_t seed = 1; seed <= kInstances; ++seed) {
        const Instance g = generate_grid(4, 12, seed);
        const PathSets paths = enumerate_bf_paths(g);
        const SolveReport plain = branch_and_bound(g, build_pastd(g, paths, {}));
        const SolveReport cut = branch_and_bound(g, build_pastd(g, paths, generate_cuts(g, paths, all_pairs(g))));
        c.expect(plain.status == SolveStatus::optimal && cut.status == SolveStatus::optimal, "solved to optimality");
        c.expect(near(plain.revenue, cut.revenue), "seed " + std::to_string(seed) + " optimum changed");
        nodes_plain += static_cast<double>(plain.nodes);
        nodes_cut += static_cast<double>(cut.nodes);
    }
    nodes_plain /= kInstances;
    nodes_cut /= kInstances;
    std::ostringstream msg;
    msg << "mean nodes " << nodes_cut << " with cuts vs " << nodes_plain << " without";
    c.expect(nodes_cut <= nodes_plain, msg.str());
    std::cerr << "  " << msg.str() << '\n';
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<void(Checker&)>>> criteria{
        {"example 1 exactness", criterion1},          {"single-toll closed form", criterion2},
        {"enumeration table", criterion3},            {"capacitated cost values", criterion4},
        {"strong/weak classification", criterion5},   {"oracle equivalence", criterion6},
        {"cut soundness", criterion7},                {"analytic invariants", criterion8},
        {"cuts at desk scale", criterion9}};
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Checker c;
        const auto start = Clock::now();
        try {
            criteria[i].second(c);
        } catch (const std::exception& e) {
            c.expect(false, std::string("exception: ") + e.what());
        }
        std::cout << "criterion " << i + 1 << " (" << criteria[i].first << "): " << (c.passed() ? "PASS" : "FAIL") << " ["
                  << c.summary() << ", " << seconds_since(start) << " s]" << std::endl;
        failed += !c.passed();
    }
    return failed == 0 ? 0 : 1;
}
