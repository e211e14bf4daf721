#ifndef NPP_CUTS_HPP
#define NPP_CUTS_HPP

#include <string>
#include <vector>

#include "npp/bifeas.hpp"
#include "npp/instance.hpp"

namespace npp {

struct PairScore {
    int first = 0;
    int second = 0;
    double score = 0.0;  // +infinity when both commodities have a single path
};

double closeness(std::size_t shared_arcs, std::size_t paths_first, std::size_t paths_second);

// All unordered commodity pairs, best score first, ties by (first, second).
std::vector<PairScore> closeness_scores(const Instance& inst, const PathSets& paths);

using BinaryMatrix = std::vector<std::vector<int>>;

// Entry (p, q) is 1 when paths p of `first` and q of `second` cannot both appear in a
// strongly bilevel feasible composition.
BinaryMatrix pair_matrix(const Instance& inst, const PathSets& paths, int first, int second);

struct Biclique {
    std::vector<int> rows;
    std::vector<int> cols;
    bool operator==(const Biclique&) const = default;
};

std::vector<Biclique> greedy_biclique_cover(const BinaryMatrix& h);

// sum_{p in first_paths} z_p + sum_{q in second_paths} z_q <= 1; indices into the path sets.
struct Cut {
    int first = 0;
    int second = 0;
    std::vector<int> first_paths;
    std::vector<int> second_paths;
};

struct CutPool {
    std::vector<Cut> cuts;
    int pairs_examined = 0;
    double millis = 0.0;
};

CutPool generate_cuts(const Instance& inst, const PathSets& paths, int pair_limit);

std::string cut_pool_to_json(const CutPool& pool);
CutPool cut_pool_from_json(const std::string& text);

}  // namespace npp

#endif
