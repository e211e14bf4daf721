#include "npp/cuts.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "json.hpp"
#include "npp/error.hpp"
#include "npp/tolerances.hpp"

namespace npp {

double closeness(std::size_t shared_arcs, std::size_t paths_first, std::size_t paths_second) {
    const double product = static_cast<double>(paths_first) * static_cast<double>(paths_second);
    if (product <= 1.0) return std::numeric_limits<double>::infinity();
    const double l = std::log(product);
    return static_cast<double>(shared_arcs) / (l * l);
}

std::vector<PairScore> closeness_scores(const Instance& inst, const PathSets& paths) {
    const int nk = inst.commodity_count();
    if (static_cast<int>(paths.size()) != nk) throw PreconditionError("one path set per commodity is required");
    std::vector<std::vector<char>> arcs(static_cast<std::size_t>(nk), std::vector<char>(static_cast<std::size_t>(inst.arc_count()), 0));
    for (int k = 0; k < nk; ++k)
        for (const PathRecord& r : paths[static_cast<std::size_t>(k)])
            for (int a : r.arcs) arcs[static_cast<std::size_t>(k)][static_cast<std::size_t>(a)] = 1;
    std::vector<PairScore> out;
    for (int i = 0; i < nk; ++i)
        for (int j = i + 1; j < nk; ++j) {
            std::size_t shared = 0;
            for (int a = 0; a < inst.arc_count(); ++a)
                shared += arcs[static_cast<std::size_t>(i)][static_cast<std::size_t>(a)] &&
                          arcs[static_cast<std::size_t>(j)][static_cast<std::size_t>(a)];
            out.push_back({i, j, closeness(shared, paths[static_cast<std::size_t>(i)].size(), paths[static_cast<std::size_t>(j)].size())});
        }
    std::stable_sort(out.begin(), out.end(), [](const PairScore& a, const PairScore& b) { return a.score > b.score; });
    return out;
}

BinaryMatrix pair_matrix(const Instance& inst, const PathSets& paths, int first, int second) {
    if (first == second) throw PreconditionError("pair needs two distinct commodities");
    const auto& pi = paths.at(static_cast<std::size_t>(first));
    const auto& pj = paths.at(static_cast<std::size_t>(second));
    BinaryMatrix h(pi.size(), std::vector<int>(pj.size(), 0));
    for (std::size_t p = 0; p < pi.size(); ++p)
        for (std::size_t q = 0; q < pj.size(); ++q) {
            const PathRecord pair[] = {pi[p], pj[q]};
            h[p][q] = sbf_test(inst, pair).objective > kTol.zero ? 1 : 0;
        }
    return h;
}

std::vector<Biclique> greedy_biclique_cover(const BinaryMatrix& h) {
    const std::size_t rows = h.size();
    const std::size_t cols = rows ? h.front().size() : 0;
    for (const auto& r : h)
        if (r.size() != cols) throw PreconditionError("matrix rows differ in length");
    std::vector<int> row_ones(rows, 0), col_ones(cols, 0);
    std::size_t uncovered = 0;
    std::vector<std::vector<char>> covered(rows, std::vector<char>(cols, 0));
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c)
            if (h[r][c]) {
                ++row_ones[r];
                ++col_ones[c];
                ++uncovered;
            }

    std::vector<Biclique> out;
    while (uncovered > 0) {
        std::size_t sr = 0, sc = 0;
        int best = -1;
        for (std::size_t r = 0; r < rows; ++r)
            for (std::size_t c = 0; c < cols; ++c)
                if (h[r][c] && !covered[r][c] && row_ones[r] + col_ones[c] > best) {
                    best = row_ones[r] + col_ones[c];
                    sr = r;
                    sc = c;
                }
        std::vector<char> in_p(rows, 0), in_q(cols, 0);
        std::vector<std::size_t> P{sr}, Q{sc};
        in_p[sr] = 1;
        in_q[sc] = 1;
        for (;;) {
            long gain_best = -1;
            bool add_row = true;
            std::size_t pick = 0;
            for (std::size_t r = 0; r < rows; ++r) {
                if (in_p[r]) continue;
                long gain = 0;
                bool ok = true;
                for (std::size_t c : Q) {
                    if (!h[r][c]) {
                        ok = false;
                        break;
                    }
                    gain += !covered[r][c];
                }
                if (ok && gain > gain_best) {
                    gain_best = gain;
                    add_row = true;
                    pick = r;
                }
            }
            for (std::size_t c = 0; c < cols; ++c) {
                if (in_q[c]) continue;
                long gain = 0;
                bool ok = true;
                for (std::size_t r : P) {
                    if (!h[r][c]) {
                        ok = false;
                        break;
                    }
                    gain += !covered[r][c];
                }
                if (ok && gain > gain_best) {
                    gain_best = gain;
                    add_row = false;
                    pick = c;
                }
            }
            if (gain_best < 0) break;
            if (add_row) {
                in_p[pick] = 1;
                P.push_back(pick);
            } else {
                in_q[pick] = 1;
                Q.push_back(pick);
            }
        }
        Biclique b;
        for (std::size_t r : P)
            for (std::size_t c : Q)
                if (!covered[r][c]) {
                    covered[r][c] = 1;
                    --uncovered;
                }
        std::sort(P.begin(), P.end());
        std::sort(Q.begin(), Q.end());
        for (std::size_t r : P) b.rows.push_back(static_cast<int>(r));
        for (std::size_t c : Q) b.cols.push_back(static_cast<int>(c));
        out.push_back(std::move(b));
    }
    return out;
}

CutPool generate_cuts(const Instance& inst, const PathSets& paths, int pair_limit) {
    const auto start = std::chrono::steady_clock::now();
    CutPool pool;
    if (pair_limit < 0) throw PreconditionError("pair limit must be non-negative");
    std::vector<PairScore> ranked = closeness_scores(inst, paths);
    const std::size_t take = std::min(ranked.size(), static_cast<std::size_t>(pair_limit));
    for (std::size_t s = 0; s < take; ++s) {
        const PairScore& ps = ranked[s];
        BinaryMatrix h = pair_matrix(inst, paths, ps.first, ps.second);
        for (Biclique& b : greedy_biclique_cover(h))
            pool.cuts.push_back({ps.first, ps.second, std::move(b.rows), std::move(b.cols)});
        ++pool.pairs_examined;
    }
    pool.millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return pool;
}

std::string cut_pool_to_json(const CutPool& pool) {
    nlohmann::json doc = nlohmann::json::array();
    for (const Cut& c : pool.cuts)
        doc.push_back({{"k_i", c.first}, {"k_j", c.second}, {"P_hat", c.first_paths}, {"Q_hat", c.second_paths}});
    return doc.dump(2);
}

CutPool cut_pool_from_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(e.what(), e.byte);
    }
    CutPool pool;
    try {
        for (const auto& c : doc)
            pool.cuts.push_back({c.at("k_i").get<int>(), c.at("k_j").get<int>(), c.at("P_hat").get<std::vector<int>>(),
                                 c.at("Q_hat").get<std::vector<int>>()});
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("malformed cut pool: ") + e.what());
    }
    return pool;
}

}  // namespace npp
