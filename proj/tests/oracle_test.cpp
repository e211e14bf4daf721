#include "doctest.h"
#include "npp/bifeas.hpp"
#include "npp/error.hpp"
#include "npp/follower.hpp"
#include "npp/oracle.hpp"
#include "support/fixtures.hpp"

using namespace npp;

TEST_SUITE("oracle") {
    TEST_CASE("worked examples") {
        OracleResult r1 = brute_force_solve(testing::example(1));
        CHECK(r1.revenue == doctest::Approx(3.0));
        CHECK(r1.tolls[0] == doctest::Approx(3.0));
        CHECK(brute_force_solve(testing::example(2)).revenue == doctest::Approx(10.0));
        OracleResult r3 = brute_force_solve(testing::example(3));
        CHECK(r3.revenue == doctest::Approx(14.0));
        CHECK(r3.tolls[0] == doctest::Approx(4.0));
        CHECK(r3.tolls[1] == doctest::Approx(5.0));
    }

    TEST_CASE("no tolled arcs") {
        Instance g(3, {{0, 1, 1.0, false}, {1, 2, 1.0, false}, {0, 2, 3.0, false}}, {{0, 2, 1.0}});
        OracleResult r = brute_force_solve(g);
        CHECK(r.revenue == 0.0);
        CHECK(r.compositions == 1);
    }

    TEST_CASE("budget") {
        CHECK_THROWS_AS(brute_force_solve(testing::example(3), 2), BudgetExceeded);
    }

    TEST_CASE("feasible compositions are exactly the bilevel feasible ones") {
        GridConfig cfg;
        cfg.tolled_fraction = 0.15;
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            Instance g = generate_grid(3, 2, seed, cfg);
            long seen = 0;
            brute_force_solve(g, kDefaultOracleBudget, [&](std::span<const std::vector<int>> paths, const PriceResult& price) {
                std::vector<PathRecord> comp;
                for (std::size_t k = 0; k < paths.size(); ++k)
                    comp.push_back({static_cast<int>(k), paths[k], path_base_cost(g, paths[k]), path_usage(g, paths[k])});
                CAPTURE(seed);
                CHECK(price.feasible == is_bf_composition(g, comp));
                ++seen;
            });
            CHECK(seen > 0);
        }
    }
}
