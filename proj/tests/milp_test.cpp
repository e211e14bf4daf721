#include <cmath>

#include "doctest.h"
#include "npp/bifeas.hpp"
#include "npp/conjugate.hpp"
#include "npp/cuts.hpp"
#include "npp/error.hpp"
#include "npp/milp.hpp"
#include "npp/oracle.hpp"
#include "support/fixtures.hpp"

using namespace npp;

namespace {

GridConfig sparse_tolls() {
    GridConfig cfg;
    cfg.tolled_fraction = 0.1;
    return cfg;
}

// Integral points must satisfy s = t z and leave every follower on a cheapest path.
IntegralObserver exactness_probe(const Instance& inst, int& calls) {
    return [&inst, &calls](const MilpModel& m, std::span<const double> x) {
        ++calls;
        for (const auto& prod : m.products) {
            const double z = x[static_cast<std::size_t>(m.z[static_cast<std::size_t>(prod.commodity)][static_cast<std::size_t>(prod.path)])];
            const double t = x[static_cast<std::size_t>(m.toll[static_cast<std::size_t>(prod.tolled)])];
            CHECK(std::fabs(x[static_cast<std::size_t>(prod.column)] - t * std::round(z)) <= 1e-6);
        }
        std::vector<double> tolls;
        for (int c : m.toll) tolls.push_back(x[static_cast<std::size_t>(c)]);
        const TollVector tv(tolls);
        for (int k = 0; k < inst.commodity_count(); ++k)
            for (std::size_t q = 0; q < m.z[static_cast<std::size_t>(k)].size(); ++q)
                if (x[static_cast<std::size_t>(m.z[static_cast<std::size_t>(k)][q])] > 0.5) {
                    const PathRecord& r = m.paths[static_cast<std::size_t>(k)][q];
                    double cost = r.base_cost;
                    for (int i = 0; i < inst.tolled_count(); ++i) cost += r.usage[static_cast<std::size_t>(i)] * tv[i];
                    CHECK(cost == doctest::Approx(commodity_cost(inst, k, tv)).epsilon(1e-6));
                }
    };
}

}  // namespace

TEST_SUITE("milp") {
    TEST_CASE("toll bound") {
        CHECK(toll_bound(testing::example(1)) == doctest::Approx(3.0));
    }

    TEST_CASE("model shape") {
        Instance g1 = testing::example(1);
        MilpModel m1 = build_pastd(g1, enumerate_bf_paths(g1), {});
        CHECK(m1.binary_count() == 3);
        CHECK(m1.cut_rows == 0);

        Instance g3 = testing::example(3);
        MilpModel m3 = build_pastd(g3, enumerate_bf_paths(g3), {});
        CHECK(m3.flow_rows == 2);
        CHECK(m3.duality_rows == 2);
        CHECK(m3.dual_rows == 2 * g3.arc_count());
        CHECK(m3.mccormick_rows == 3 * static_cast<int>(m3.products.size()));

        PathSets broken = enumerate_bf_paths(g3);
        broken[1].clear();
        CHECK_THROWS_AS(build_pastd(g3, broken, {}), ValidationError);
        CutPool bad;
        bad.cuts.push_back({0, 0, {0}, {0}});
        CHECK_THROWS_AS(build_pastd(g3, enumerate_bf_paths(g3), bad), ValidationError);
    }

    TEST_CASE("worked examples") {
        SolveReport r1 = solve_milp(testing::example(1), 0);
        CHECK(r1.revenue == doctest::Approx(3.0).epsilon(1e-6));
        CHECK(r1.w == std::vector<double>{1, 1});
        CHECK(r1.status == SolveStatus::optimal);
        CHECK(r1.gap == doctest::Approx(0.0));

        CHECK(solve_milp(testing::example(2), 0).revenue == doctest::Approx(10.0));
        SolveReport r3 = solve_milp(testing::example(3), 0);
        CHECK(r3.revenue == doctest::Approx(14.0));
        CHECK(r3.w == std::vector<double>{1, 2});
        CHECK(r3.t[0] == doctest::Approx(4.0));
        CHECK(r3.t[1] == doctest::Approx(5.0));
        CHECK(solve_milp(testing::example(3), 4).revenue == doctest::Approx(14.0));
    }

    TEST_CASE("cuts keep the optimum and do not grow the tree") {
        Instance g = testing::example(6);
        SolveReport plain = solve_milp(g, 0);
        SolveReport cut = solve_milp(g, 1);
        CHECK(cut.cuts >= 1);
        CHECK(plain.cuts == 0);
        CHECK(cut.revenue == doctest::Approx(plain.revenue).epsilon(1e-6));
        CHECK(cut.revenue == doctest::Approx(brute_force_solve(g).revenue).epsilon(1e-6));
        CHECK(cut.nodes <= plain.nodes);
    }

    TEST_CASE("agrees with the oracle and enumeration on random grids") {
        for (std::uint64_t seed = 1; seed <= 8; ++seed) {
            Instance g = generate_grid(3, 3, seed, sparse_tolls());
            CAPTURE(seed);
            int calls = 0;
            SolveReport a = solve_milp(g, 0, {}, exactness_probe(g, calls));
            SolveReport b = solve_milp(g, 100, {}, exactness_probe(g, calls));
            CHECK(calls >= 2);
            const double ref = brute_force_solve(g).revenue;
            CHECK(a.revenue == doctest::Approx(ref).epsilon(1e-6));
            CHECK(b.revenue == doctest::Approx(ref).epsilon(1e-6));
            CHECK(solve_by_enumeration(g).revenue == doctest::Approx(ref).epsilon(1e-6));
            CHECK(a.bound >= a.revenue - 1e-6);
        }
    }

    TEST_CASE("limits") {
        Limits none;
        none.time_seconds = 0.0;
        SolveReport r = solve_milp(testing::example(3), 0, none);
        CHECK(r.status == SolveStatus::time_limit);
        CHECK(r.nodes == 0);
        CHECK(r.revenue == doctest::Approx(0.0));
        CHECK(r.bound >= r.revenue);

        Limits loose;
        loose.gap = 1.0;
        SolveReport g = solve_milp(testing::example(3), 0, loose);
        CHECK(g.revenue <= 14.0 + 1e-6);
        CHECK(g.bound >= 14.0 - 1e-6);
        CHECK(g.gap <= 1.0);
    }

    TEST_CASE("report json") {
        SolveReport r = solve_milp(testing::example(1), 0);
        const std::string s = report_to_json(r);
        CHECK(s.find("\"revenue\":3") != std::string::npos);
        CHECK(s.find("\"status\":\"optimal\"") != std::string::npos);
        CHECK(s.find("\"cut_millis\"") != std::string::npos);
    }
}
