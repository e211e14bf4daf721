#include <algorithm>
#include <cmath>

#include "npp/error.hpp"
#include "npp/lp.hpp"

namespace npp::lp {

namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kDropTol = 1e-13;

double slack_lower(RowType t) { return t == RowType::greater_equal ? -kInf : 0.0; }
double slack_upper(RowType t) { return t == RowType::less_equal ? kInf : 0.0; }

}  // namespace

Simplex::Simplex(const Problem& problem, Options options) : problem_(problem), opt_(options) {
    problem_.validate();
    n_ = problem_.column_count();
    m_ = problem_.row_count();
    ncols_ = n_ + 2 * m_;
    dense_a_.assign(static_cast<std::size_t>(m_) * static_cast<std::size_t>(n_), 0.0);
    for (const Triplet& t : problem_.entries())
        dense_a_[static_cast<std::size_t>(t.row) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(t.col)] += t.value;
    sense_sign_ = problem_.sense() == Sense::minimize ? 1.0 : -1.0;
    internal_cost_.resize(static_cast<std::size_t>(n_));
    for (int j = 0; j < n_; ++j)
        internal_cost_[static_cast<std::size_t>(j)] = sense_sign_ * problem_.costs()[static_cast<std::size_t>(j)];
    user_lo_.assign(problem_.lower().begin(), problem_.lower().end());
    user_up_.assign(problem_.upper().begin(), problem_.upper().end());
    limit_ = opt_.max_iterations > 0 ? opt_.max_iterations : 200L * (m_ + n_) + 5000;
}

void Simplex::set_column_bounds(int col, double lower, double upper) {
    if (col < 0 || col >= n_ || std::isnan(lower) || std::isnan(upper) || lower > upper)
        throw PreconditionError("invalid column bound change");
    user_lo_[static_cast<std::size_t>(col)] = lower;
    user_up_[static_cast<std::size_t>(col)] = upper;
    if (face_restricted_) {
        for (int j = 0; j < n_; ++j) {
            lo_[static_cast<std::size_t>(j)] = user_lo_[static_cast<std::size_t>(j)];
            up_[static_cast<std::size_t>(j)] = user_up_[static_cast<std::size_t>(j)];
        }
        for (int i = 0; i < m_; ++i) {
            auto s = static_cast<std::size_t>(n_ + i);
            lo_[s] = slack_lower(problem_.row_types()[static_cast<std::size_t>(i)]);
            up_[s] = slack_upper(problem_.row_types()[static_cast<std::size_t>(i)]);
            lo_[s + static_cast<std::size_t>(m_)] = 0.0;
            up_[s + static_cast<std::size_t>(m_)] = 0.0;
        }
        std::fill(cost_.begin(), cost_.end(), 0.0);
        std::copy(internal_cost_.begin(), internal_cost_.end(), cost_.begin());
        sense_sign_ = problem_.sense() == Sense::minimize ? 1.0 : -1.0;
        if (has_basis_) compute_reduced_costs();
        face_restricted_ = false;
    } else if (!lo_.empty()) {
        lo_[static_cast<std::size_t>(col)] = lower;
        up_[static_cast<std::size_t>(col)] = upper;
    }
}

void Simplex::build_initial_tableau() {
    const auto m = static_cast<std::size_t>(m_);
    const auto n = static_cast<std::size_t>(n_);
    tab_.assign(m * static_cast<std::size_t>(ncols_), 0.0);
    beta_.assign(m, 0.0);
    basis_.assign(m, -1);
    row_of_.assign(static_cast<std::size_t>(ncols_), -1);
    lo_.assign(static_cast<std::size_t>(ncols_), 0.0);
    up_.assign(static_cast<std::size_t>(ncols_), 0.0);
    x_.assign(static_cast<std::size_t>(ncols_), 0.0);
    cost_.assign(static_cast<std::size_t>(ncols_), 0.0);
    d_.assign(static_cast<std::size_t>(ncols_), 0.0);

    for (std::size_t j = 0; j < n; ++j) {
        lo_[j] = user_lo_[j];
        up_[j] = user_up_[j];
        x_[j] = std::isfinite(lo_[j]) ? lo_[j] : (std::isfinite(up_[j]) ? up_[j] : 0.0);
    }
    for (std::size_t i = 0; i < m; ++i) {
        const RowType type = problem_.row_types()[i];
        const std::size_t s = n + i;
        const std::size_t a = n + m + i;
        lo_[s] = slack_lower(type);
        up_[s] = slack_upper(type);
        double activity = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            double v = dense_a_[i * n + j];
            tab(static_cast<int>(i), static_cast<int>(j)) = v;
            activity += v * x_[j];
        }
        tab(static_cast<int>(i), static_cast<int>(s)) = 1.0;
        const double b = problem_.rhs()[i];
        const double r = b - activity;
        if (r >= lo_[s] && r <= up_[s]) {
            basis_[i] = static_cast<int>(s);
            beta_[i] = b;
        } else {
            const double v = std::clamp(r, lo_[s], up_[s]);
            x_[s] = v;
            const double sigma = r - v > 0.0 ? 1.0 : -1.0;
            if (sigma < 0.0)
                for (int j = 0; j < ncols_; ++j) tab(static_cast<int>(i), j) = -tab(static_cast<int>(i), j);
            tab(static_cast<int>(i), static_cast<int>(a)) = 1.0;
            basis_[i] = static_cast<int>(a);
            beta_[i] = sigma * b;
            up_[a] = kInf;
            cost_[a] = 1.0;
        }
        row_of_[static_cast<std::size_t>(basis_[i])] = static_cast<int>(i);
    }
}

void Simplex::compute_reduced_costs() {
    for (int j = 0; j < ncols_; ++j) d_[static_cast<std::size_t>(j)] = cost_[static_cast<std::size_t>(j)];
    for (int i = 0; i < m_; ++i) {
        const double cb = cost_[static_cast<std::size_t>(basis_[static_cast<std::size_t>(i)])];
        if (cb == 0.0) continue;
        const double* row = &tab_[static_cast<std::size_t>(i) * static_cast<std::size_t>(ncols_)];
        for (int j = 0; j < ncols_; ++j) d_[static_cast<std::size_t>(j)] -= cb * row[j];
    }
    for (int i = 0; i < m_; ++i) d_[static_cast<std::size_t>(basis_[static_cast<std::size_t>(i)])] = 0.0;
}

void Simplex::compute_basic_values() {
    std::vector<int> active;
    for (int j = 0; j < ncols_; ++j)
        if (row_of_[static_cast<std::size_t>(j)] < 0 && x_[static_cast<std::size_t>(j)] != 0.0) active.push_back(j);
    for (int i = 0; i < m_; ++i) {
        double v = beta_[static_cast<std::size_t>(i)];
        const double* row = &tab_[static_cast<std::size_t>(i) * static_cast<std::size_t>(ncols_)];
        for (int j : active) v -= row[j] * x_[static_cast<std::size_t>(j)];
        x_[static_cast<std::size_t>(basis_[static_cast<std::size_t>(i)])] = v;
    }
}

void Simplex::pivot(int r, int q) {
    const auto nc = static_cast<std::size_t>(ncols_);
    double* prow = &tab_[static_cast<std::size_t>(r) * nc];
    const double inv = 1.0 / prow[q];
    std::vector<int> nz;
    nz.reserve(64);
    for (int j = 0; j < ncols_; ++j) {
        if (prow[j] == 0.0) continue;
        prow[j] *= inv;
        if (std::fabs(prow[j]) < kDropTol) {
            prow[j] = 0.0;
        } else {
            nz.push_back(j);
        }
    }
    prow[q] = 1.0;
    beta_[static_cast<std::size_t>(r)] *= inv;
    const double br = beta_[static_cast<std::size_t>(r)];
    for (int i = 0; i < m_; ++i) {
        if (i == r) continue;
        double* row = &tab_[static_cast<std::size_t>(i) * nc];
        const double f = row[q];
        if (f == 0.0) continue;
        for (int j : nz) row[j] -= f * prow[j];
        row[q] = 0.0;
        beta_[static_cast<std::size_t>(i)] -= f * br;
    }
    const double fd = d_[static_cast<std::size_t>(q)];
    if (fd != 0.0)
        for (int j : nz) d_[static_cast<std::size_t>(j)] -= fd * prow[j];
    d_[static_cast<std::size_t>(q)] = 0.0;
    const int leaving = basis_[static_cast<std::size_t>(r)];
    row_of_[static_cast<std::size_t>(leaving)] = -1;
    basis_[static_cast<std::size_t>(r)] = q;
    row_of_[static_cast<std::size_t>(q)] = r;
}

Status Simplex::primal_loop(Phase phase) {
    const double opt_tol = opt_.tol.zero;
    bool bland = false;
    int stalls = 0;
    for (long it = 0;; ++it) {
        if (it > limit_) return Status::numerical_failure;
        int q = -1;
        double dir = 0.0;
        double best = 0.0;
        for (int j = 0; j < ncols_; ++j) {
            const auto u = static_cast<std::size_t>(j);
            if (row_of_[u] >= 0 || is_fixed(j)) continue;
            const double dj = d_[u];
            double score = 0.0;
            double dj_dir = 0.0;
            if (x_[u] < up_[u] && dj < -opt_tol) {
                score = -dj;
                dj_dir = 1.0;
            } else if (x_[u] > lo_[u] && dj > opt_tol) {
                score = dj;
                dj_dir = -1.0;
            } else {
                continue;
            }
            if (bland) {
                q = j;
                dir = dj_dir;
                break;
            }
            if (score > best) {
                best = score;
                q = j;
                dir = dj_dir;
            }
        }
        if (q < 0) return Status::optimal;

        double theta = kInf;
        int r = -1;
        double r_alpha = 0.0;
        bool r_to_upper = false;
        for (int i = 0; i < m_; ++i) {
            const double alpha = tab(i, q);
            if (std::fabs(alpha) <= kPivotTol) continue;
            const auto b = static_cast<std::size_t>(basis_[static_cast<std::size_t>(i)]);
            const double rate = -alpha * dir;
            double limit;
            bool to_upper;
            if (rate < 0.0) {
                if (!std::isfinite(lo_[b])) continue;
                limit = std::max(0.0, x_[b] - lo_[b]) / -rate;
                to_upper = false;
            } else {
                if (!std::isfinite(up_[b])) continue;
                limit = std::max(0.0, up_[b] - x_[b]) / rate;
                to_upper = true;
            }
            bool take = false;
            if (limit < theta - 1e-12) {
                take = true;
            } else if (limit <= theta + 1e-12 && r >= 0) {
                take = bland ? basis_[static_cast<std::size_t>(i)] < basis_[static_cast<std::size_t>(r)]
                             : std::fabs(alpha) > std::fabs(r_alpha);
            }
            if (take) {
                theta = std::min(theta, limit);
                r = i;
                r_alpha = alpha;
                r_to_upper = to_upper;
            }
        }
        const auto uq = static_cast<std::size_t>(q);
        const double span = up_[uq] - lo_[uq];
        if (!std::isfinite(theta) && !std::isfinite(span)) return phase == Phase::one ? Status::numerical_failure : Status::unbounded;

        ++iterations_;
        if (span <= theta) {
            for (int i = 0; i < m_; ++i) {
                const double alpha = tab(i, q);
                if (alpha != 0.0) x_[static_cast<std::size_t>(basis_[static_cast<std::size_t>(i)])] -= alpha * dir * span;
            }
            x_[uq] = dir > 0.0 ? up_[uq] : lo_[uq];
            stalls = 0;
            continue;
        }
        for (int i = 0; i < m_; ++i) {
            const double alpha = tab(i, q);
            if (alpha != 0.0) x_[static_cast<std::size_t>(basis_[static_cast<std::size_t>(i)])] -= alpha * dir * theta;
        }
        x_[uq] += dir * theta;
        const auto leaving = static_cast<std::size_t>(basis_[static_cast<std::size_t>(r)]);
        x_[leaving] = r_to_upper ? up_[leaving] : lo_[leaving];
        pivot(r, q);
        if (theta <= opt_.tol.zero) {
            if (++stalls > opt_.bland_after_stalls) bland = true;
        } else {
            stalls = 0;
        }
    }
}

Status Simplex::dual_loop() {
    const double feas = opt_.tol.feasibility;
    bool bland = false;
    int stalls = 0;
    for (long it = 0;; ++it) {
        if (it > limit_) return Status::numerical_failure;
        int r = -1;
        double worst = 0.0;
        bool raise = false;
        for (int i = 0; i < m_; ++i) {
            const auto b = static_cast<std::size_t>(basis_[static_cast<std::size_t>(i)]);
            double viol = 0.0;
            bool up = false;
            if (x_[b] < lo_[b] - feas) {
                viol = lo_[b] - x_[b];
                up = true;
            } else if (x_[b] > up_[b] + feas) {
                viol = x_[b] - up_[b];
            } else {
                continue;
            }
            if (bland) {
                if (r < 0 || basis_[static_cast<std::size_t>(i)] < basis_[static_cast<std::size_t>(r)]) {
                    r = i;
                    raise = up;
                }
            } else if (viol > worst) {
                worst = viol;
                r = i;
                raise = up;
            }
        }
        if (r < 0) return Status::optimal;

        int q = -1;
        double best_ratio = kInf;
        double best_alpha = 0.0;
        for (int j = 0; j < ncols_; ++j) {
            const auto u = static_cast<std::size_t>(j);
            if (row_of_[u] >= 0 || is_fixed(j)) continue;
            const double alpha = tab(r, j);
            if (std::fabs(alpha) <= kPivotTol) continue;
            const bool can_up = x_[u] < up_[u];
            const bool can_down = x_[u] > lo_[u];
            // x_b moves by -alpha * dx_j; it must move towards the violated bound.
            const bool ok = raise ? ((can_up && alpha < 0.0) || (can_down && alpha > 0.0))
                                  : ((can_up && alpha > 0.0) || (can_down && alpha < 0.0));
            if (!ok) continue;
            const double ratio = std::fabs(d_[u]) / std::fabs(alpha);
            bool take = false;
            if (ratio < best_ratio - 1e-12) {
                take = true;
            } else if (ratio <= best_ratio + 1e-12 && q >= 0) {
                take = bland ? false : std::fabs(alpha) > std::fabs(best_alpha);
            }
            if (take) {
                best_ratio = std::min(best_ratio, ratio);
                q = j;
                best_alpha = alpha;
            }
        }
        if (q < 0) return Status::infeasible;

        ++iterations_;
        const auto b = static_cast<std::size_t>(basis_[static_cast<std::size_t>(r)]);
        const double target = raise ? lo_[b] : up_[b];
        const double delta = (x_[b] - target) / best_alpha;
        for (int i = 0; i < m_; ++i) {
            const double alpha = tab(i, q);
            if (alpha != 0.0) x_[static_cast<std::size_t>(basis_[static_cast<std::size_t>(i)])] -= alpha * delta;
        }
        x_[static_cast<std::size_t>(q)] += delta;
        x_[b] = target;
        pivot(r, q);
        if (best_ratio <= opt_.tol.zero) {
            if (++stalls > opt_.bland_after_stalls) bland = true;
        } else {
            stalls = 0;
        }
    }
}

bool Simplex::make_dual_feasible() {
    const double tol = opt_.tol.zero;
    for (int j = 0; j < ncols_; ++j) {
        const auto u = static_cast<std::size_t>(j);
        if (row_of_[u] >= 0) continue;
        const double lo = lo_[u];
        const double up = up_[u];
        const double dj = d_[u];
        if (lo == up) {
            x_[u] = lo;
            continue;
        }
        const bool at_lo = x_[u] == lo;
        const bool at_up = x_[u] == up;
        if (dj > tol) {
            if (!std::isfinite(lo)) return false;
            x_[u] = lo;
        } else if (dj < -tol) {
            if (!std::isfinite(up)) return false;
            x_[u] = up;
        } else if (!at_lo && !at_up) {
            if (std::isfinite(lo) && std::isfinite(up))
                x_[u] = std::fabs(x_[u] - lo) <= std::fabs(up - x_[u]) ? lo : up;
            else if (std::isfinite(lo))
                x_[u] = lo;
            else if (std::isfinite(up))
                x_[u] = up;
            else
                x_[u] = 0.0;
        }
    }
    return true;
}

bool Simplex::residual_ok() const {
    const double tol = 10.0 * opt_.tol.feasibility;
    for (int j = 0; j < n_; ++j) {
        const auto u = static_cast<std::size_t>(j);
        if (x_[u] < user_lo_[u] - tol * (1.0 + std::fabs(user_lo_[u])) ||
            x_[u] > user_up_[u] + tol * (1.0 + std::fabs(user_up_[u])))
            return false;
    }
    for (int i = 0; i < m_; ++i) {
        double act = 0.0;
        double scale = 1.0;
        for (int j = 0; j < n_; ++j) {
            double a = dense_a_[static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(j)];
            if (a == 0.0) continue;
            act += a * x_[static_cast<std::size_t>(j)];
            scale = std::max(scale, std::fabs(a * x_[static_cast<std::size_t>(j)]));
        }
        const double b = problem_.rhs()[static_cast<std::size_t>(i)];
        const double t = tol * std::max(scale, std::fabs(b));
        switch (problem_.row_types()[static_cast<std::size_t>(i)]) {
            case RowType::less_equal:
                if (act > b + t) return false;
                break;
            case RowType::greater_equal:
                if (act < b - t) return false;
                break;
            case RowType::equal:
                if (std::fabs(act - b) > t) return false;
                break;
        }
    }
    return true;
}

Status Simplex::solve() {
    face_restricted_ = false;
    has_basis_ = false;
    sense_sign_ = problem_.sense() == Sense::minimize ? 1.0 : -1.0;
    build_initial_tableau();
    compute_basic_values();
    bool any_artificial = false;
    for (int i = 0; i < m_; ++i) any_artificial |= basis_[static_cast<std::size_t>(i)] >= n_ + m_;
    if (any_artificial) {
        compute_reduced_costs();
        Status s = primal_loop(Phase::one);
        if (s != Status::optimal) return status_ = Status::numerical_failure;
        double infeas = 0.0;
        for (int a = n_ + m_; a < ncols_; ++a) infeas += x_[static_cast<std::size_t>(a)];
        if (infeas > opt_.tol.feasibility) return status_ = Status::infeasible;
    }
    for (int a = n_ + m_; a < ncols_; ++a) {
        lo_[static_cast<std::size_t>(a)] = 0.0;
        up_[static_cast<std::size_t>(a)] = 0.0;
        cost_[static_cast<std::size_t>(a)] = 0.0;
        if (row_of_[static_cast<std::size_t>(a)] < 0) x_[static_cast<std::size_t>(a)] = 0.0;
    }
    std::copy(internal_cost_.begin(), internal_cost_.end(), cost_.begin());
    compute_reduced_costs();
    status_ = primal_loop(Phase::two);
    has_basis_ = true;
    if (status_ == Status::optimal) {
        compute_basic_values();
        if (!residual_ok()) status_ = Status::numerical_failure;
    }
    return status_;
}

Status Simplex::reoptimize() {
    if (!has_basis_ || face_restricted_) return solve();
    if (!make_dual_feasible()) return solve();
    compute_basic_values();
    Status s = dual_loop();
    if (s == Status::infeasible) return status_ = s;
    if (s != Status::optimal) return solve();
    // Guard against reduced costs that drifted out of sign during the dual phase.
    s = primal_loop(Phase::two);
    if (s != Status::optimal) return solve();
    compute_basic_values();
    if (!residual_ok()) return solve();
    return status_ = Status::optimal;
}

Status Simplex::optimize_over_optimal_face(std::span<const double> objective, Sense sense) {
    if (status_ != Status::optimal) throw PreconditionError("face restriction needs an optimal basis");
    if (static_cast<int>(objective.size()) != n_) throw PreconditionError("objective length mismatch");
    const double tol = opt_.tol.zero;
    for (int j = 0; j < ncols_; ++j) {
        const auto u = static_cast<std::size_t>(j);
        if (row_of_[u] >= 0 || is_fixed(j)) continue;
        if (std::fabs(d_[u]) > tol) {
            lo_[u] = x_[u];
            up_[u] = x_[u];
        }
    }
    face_restricted_ = true;
    const double sign = sense == Sense::minimize ? 1.0 : -1.0;
    std::fill(cost_.begin(), cost_.end(), 0.0);
    for (int j = 0; j < n_; ++j) cost_[static_cast<std::size_t>(j)] = sign * objective[static_cast<std::size_t>(j)];
    sense_sign_ = sign;
    compute_reduced_costs();
    status_ = primal_loop(Phase::two);
    if (status_ == Status::optimal) compute_basic_values();
    return status_;
}

double Simplex::objective_value() const {
    double v = 0.0;
    for (int j = 0; j < n_; ++j) v += cost_[static_cast<std::size_t>(j)] * x_[static_cast<std::size_t>(j)];
    return sense_sign_ * v;
}

std::vector<double> Simplex::primal() const {
    return std::vector<double>(x_.begin(), x_.begin() + n_);
}

Solution Simplex::solution() const {
    Solution s;
    s.status = status_;
    s.iterations = iterations_;
    if (status_ != Status::optimal) return s;
    s.objective = objective_value();
    s.primal = primal();
    s.dual.resize(static_cast<std::size_t>(m_));
    for (int i = 0; i < m_; ++i) s.dual[static_cast<std::size_t>(i)] = -sense_sign_ * d_[static_cast<std::size_t>(n_ + i)];
    s.reduced_cost.resize(static_cast<std::size_t>(n_));
    for (int j = 0; j < n_; ++j) s.reduced_cost[static_cast<std::size_t>(j)] = sense_sign_ * d_[static_cast<std::size_t>(j)];
    return s;
}

Solution solve(const Problem& problem, Options options) {
    Simplex sx(problem, options);
    sx.solve();
    return sx.solution();
}

Solution solve_with_fixed_value(const Problem& problem, double value, std::span<const double> secondary,
                                Sense secondary_sense, Options options) {
    Simplex sx(problem, options);
    if (sx.solve() != Status::optimal) return sx.solution();
    const double got = sx.objective_value();
    if (std::fabs(got - value) > options.tol.duality_gap * std::max(1.0, std::fabs(value)))
        throw PreconditionError("fixed value does not match the problem optimum");
    sx.optimize_over_optimal_face(secondary, secondary_sense);
    return sx.solution();
}

}  // namespace npp::lp
