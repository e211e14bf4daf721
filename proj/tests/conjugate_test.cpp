#include <cmath>
#include <random>

#include "doctest.h"
#include "npp/conjugate.hpp"
#include "npp/error.hpp"
#include "npp/follower.hpp"
#include "support/fixtures.hpp"

using namespace npp;

namespace {

Instance single_toll_instance(double detour, double toll_cost) {
    std::string text = R"({"nodes":4,"arcs":[{"tail":0,"head":3,"cost":)" + std::to_string(detour) +
                       R"(},{"tail":0,"head":1,"cost":0},{"tail":1,"head":2,"cost":)" + std::to_string(toll_cost) +
                       R"(,"tolled":true},{"tail":2,"head":3,"cost":0}],"commodities":[{"origin":0,"destination":3}]})";
    return parse_instance(text);
}

struct Row {
    int w1, w2;
    double t1, t2, revenue;
};

}  // namespace

TEST_SUITE("conjugate") {
    TEST_CASE("capacitated flow values") {
        Instance g = testing::example(1);
        CHECK(conjugate_g(g, std::vector<double>{0, 1}).value == doctest::Approx(5.0));
        CHECK(conjugate_g(g, std::vector<double>{0.5, 0.5}).value == doctest::Approx(3.5));
        for (double a : {0.0, 0.25, 0.5, 0.75, 1.0})
            CHECK(conjugate_g(g, std::vector<double>{a, a}).value == doctest::Approx(5.0 - 3.0 * a));
        CHECK(conjugate_g(g, std::vector<double>{3, 3}).value == doctest::Approx(2.0));
        CHECK_THROWS_AS(conjugate_g(g, std::vector<double>{-1, 0}), PreconditionError);
        CHECK_THROWS_AS(conjugate_g(g, std::vector<double>{1}), PreconditionError);
    }

    TEST_CASE("toll sets for the two-commodity table") {
        const double U = std::numeric_limits<double>::infinity();
        const Row rows[] = {{0, 0, U, U, 0},  {1, 0, 5, U, 5},  {2, 0, 3, U, 6},
                            {0, 1, U, 6, 6},  {1, 1, 4, 5, 9},  {2, 1, 4, 5, 13},
                            {0, 2, U, 4, 8},  {1, 2, 4, 5, 14}, {2, 2, 2, 3, 10}};
        Instance g = testing::example(3);
        for (const Row& r : rows) {
            CAPTURE(r.w1);
            CAPTURE(r.w2);
            ConjugateSolution s = action_prices(g, std::vector<double>{double(r.w1), double(r.w2)});
            CHECK(s.revenue == doctest::Approx(r.revenue));
            if (std::isinf(r.t1)) CHECK(s.tolls.is_unbounded(0));
            else CHECK(s.tolls[0] == doctest::Approx(r.t1));
            if (std::isinf(r.t2)) CHECK(s.tolls.is_unbounded(1));
            else CHECK(s.tolls[1] == doctest::Approx(r.t2));
        }
    }

    TEST_CASE("single-point toll set of the three-commodity graph") {
        ConjugateSolution s = action_prices(testing::example(7), std::vector<double>{1, 1});
        CHECK(s.tolls[0] == doctest::Approx(2.0));
        CHECK(s.tolls[1] == doctest::Approx(3.0));
        CHECK(s.revenue == doctest::Approx(5.0));
        CHECK(s.g_value == doctest::Approx(4.0));
    }

    TEST_CASE("enumeration optimum") {
        EnumerationResult a = solve_by_enumeration(testing::example(3));
        CHECK(a.revenue == doctest::Approx(14.0));
        CHECK(a.capacity == std::vector<int>{1, 2});
        CHECK(a.tolls[0] == doctest::Approx(4.0));
        CHECK(a.tolls[1] == doctest::Approx(5.0));
        CHECK(a.table.size() == 9);

        EnumerationResult b = solve_by_enumeration(testing::example(1));
        CHECK(b.revenue == doctest::Approx(3.0));
        CHECK(b.capacity == std::vector<int>{1, 1});

        CHECK(solve_by_enumeration(testing::example(2)).revenue == doctest::Approx(10.0));
        CHECK_THROWS_AS(solve_by_enumeration(testing::example(3), 8), BudgetExceeded);
    }

    TEST_CASE("closed-form single toll") {
        SingleTollResult r = solve_single_toll(testing::example(2));
        CHECK(r.revenue == doctest::Approx(10.0));
        CHECK(r.toll == doctest::Approx(10.0));
        CHECK(r.thresholds == std::vector<double>{10, 4, 3});

        CHECK(solve_single_toll(single_toll_instance(5, 0)).revenue == doctest::Approx(5.0));
        CHECK(solve_single_toll(single_toll_instance(3, 3)).revenue == doctest::Approx(0.0));
        CHECK_THROWS_AS(solve_single_toll(testing::example(1)), PreconditionError);
    }

    TEST_CASE("closed-form single toll agrees with enumeration on random grids") {
        GridConfig cfg;
        cfg.tolled_fraction = 1.0 / 24.0;
        for (std::uint64_t seed = 1; seed <= 15; ++seed) {
            Instance g = generate_grid(3, 4, seed, cfg);
            REQUIRE(g.tolled_count() == 1);
            CAPTURE(seed);
            CHECK(solve_single_toll(g).revenue == doctest::Approx(solve_by_enumeration(g).revenue));
        }
    }

    TEST_CASE("fenchel pairing holds at every enumerated capacity") {
        GridConfig cfg;
        cfg.tolled_fraction = 2.0 / 24.0;
        std::vector<Instance> corpus{testing::example(1), testing::example(2), testing::example(3),
                                     testing::example(6), testing::example(7)};
        for (std::uint64_t seed = 1; seed <= 6; ++seed) corpus.push_back(generate_grid(3, 3, seed, cfg));
        for (const Instance& g : corpus) {
            EnumerationResult e = solve_by_enumeration(g);
            for (const EnumerationEntry& row : e.table) {
                double tw = 0;
                for (int i = 0; i < g.tolled_count(); ++i) {
                    if (row.tolls.is_unbounded(i)) {
                        CHECK(row.capacity[static_cast<std::size_t>(i)] == 0);
                    } else {
                        tw += row.tolls[i] * row.capacity[static_cast<std::size_t>(i)];
                    }
                }
                CHECK(follower_cost(g, row.tolls) == doctest::Approx(tw + row.g_value).epsilon(1e-9));
                std::vector<double> wd(row.capacity.begin(), row.capacity.end());
                CHECK(conjugate_g(g, wd).value == doctest::Approx(row.g_value).epsilon(1e-9));
            }
        }
    }

    TEST_CASE("capacitated cost is convex, non-increasing and subadditive") {
        std::mt19937 rng(17);
        std::uniform_real_distribution<double> u01(0.0, 1.0);
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            Instance g = generate_grid(3, 3, seed);
            const int n = g.tolled_count();
            const double K = g.commodity_count();
            for (int trial = 0; trial < 10; ++trial) {
                std::vector<double> a, b, m, up;
                const double l = u01(rng);
                for (int i = 0; i < n; ++i) {
                    a.push_back(K * u01(rng));
                    b.push_back(K * u01(rng));
                    m.push_back(l * a.back() + (1 - l) * b.back());
                    up.push_back(a.back() + u01(rng));
                }
                const double ga = conjugate_g(g, a).value;
                CHECK(conjugate_g(g, m).value <= l * ga + (1 - l) * conjugate_g(g, b).value + 1e-9);
                CHECK(conjugate_g(g, up).value <= ga + 1e-9);

                std::vector<double> sum(static_cast<std::size_t>(n), 0.0);
                double parts = 0;
                for (int k = 0; k < g.commodity_count(); ++k) {
                    std::vector<double> wk;
                    for (int i = 0; i < n; ++i) wk.push_back(u01(rng));
                    for (int i = 0; i < n; ++i) sum[static_cast<std::size_t>(i)] += wk[static_cast<std::size_t>(i)];
                    std::vector<int> only{k};
                    parts += conjugate_g(g, wk, only, true).value;
                }
                CHECK(conjugate_g(g, sum).value <= parts + 1e-9);
            }
        }
    }
}
