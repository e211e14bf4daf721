#ifndef NPP_MILP_HPP
#define NPP_MILP_HPP

#include <functional>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "npp/bifeas.hpp"
#include "npp/cuts.hpp"
#include "npp/follower.hpp"
#include "npp/instance.hpp"
#include "npp/lp.hpp"

namespace npp {

// Path-selection model: binary z per bilevel-feasible path, tolls t, node potentials
// y per commodity, and one product column s = t_a * z_p per tolled arc of each path.
struct MilpModel {
    struct Product {
        int commodity;
        int path;
        int tolled;  // tolled-arc index
        int column;
    };

    lp::Problem problem{lp::Sense::maximize};
    PathSets paths;
    std::vector<std::vector<int>> z;          // [commodity][path]
    std::vector<int> toll;                    // per tolled arc
    std::vector<std::vector<int>> potential;  // [commodity][node]
    std::vector<Product> products;
    double big_m = 0.0;
    int flow_rows = 0;
    int dual_rows = 0;
    int duality_rows = 0;
    int mccormick_rows = 0;
    int cut_rows = 0;

    int binary_count() const;
};

// Largest gain any commodity can get from the tolled network: toll-free distance minus
// distance with zero tolls, maximised over commodities.
double toll_bound(const Instance& inst);

MilpModel build_pastd(const Instance& inst, const PathSets& paths, const CutPool& pool);

struct Limits {
    double time_seconds = std::numeric_limits<double>::infinity();
    double gap = 0.0;
};

enum class SolveStatus { optimal, gap_limit, time_limit };
std::string_view to_string(SolveStatus s);

struct SolveReport {
    double revenue = 0.0;
    double bound = 0.0;
    double gap = 0.0;
    long nodes = 0;
    double millis = 0.0;
    SolveStatus status = SolveStatus::optimal;
    int cuts = 0;
    double cut_millis = 0.0;
    std::vector<double> w;
    TollVector t;
    std::vector<int> selection;  // chosen path index per commodity, when known
};

// Called with the model and the node's primal vector at every integral node solution.
using IntegralObserver = std::function<void(const MilpModel&, std::span<const double>)>;

SolveReport branch_and_bound(const Instance& inst, const MilpModel& model, const Limits& limits = {},
                             const IntegralObserver& observer = {});

// Enumerate paths, generate cuts over the top `pair_limit` pairs, build and solve.
SolveReport solve_milp(const Instance& inst, int pair_limit, const Limits& limits = {},
                       const IntegralObserver& observer = {});

std::string report_to_json(const SolveReport& report);

}  // namespace npp

#endif
