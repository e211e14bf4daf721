#ifndef NPP_LP_HPP
#define NPP_LP_HPP

#include <initializer_list>
#include <limits>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "npp/tolerances.hpp"

namespace npp::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Sense { minimize, maximize };
enum class RowType { less_equal, equal, greater_equal };
enum class Status { optimal, infeasible, unbounded, numerical_failure };

std::string_view to_string(Status s);

struct Triplet {
    int row;
    int col;
    double value;
};

using Term = std::pair<int, double>;

class Problem {
  public:
    explicit Problem(Sense sense = Sense::minimize) : sense_(sense) {}

    int add_column(double cost, double lower = 0.0, double upper = kInf);
    int add_row(std::span<const Term> terms, RowType type, double rhs);
    int add_row(std::initializer_list<Term> terms, RowType type, double rhs) {
        return add_row(std::span<const Term>(terms.begin(), terms.size()), type, rhs);
    }
    void set_cost(int col, double cost) { costs_.at(static_cast<std::size_t>(col)) = cost; }
    void set_bounds(int col, double lower, double upper);
    void set_sense(Sense s) noexcept { sense_ = s; }

    Sense sense() const noexcept { return sense_; }
    int column_count() const noexcept { return static_cast<int>(costs_.size()); }
    int row_count() const noexcept { return static_cast<int>(rhs_.size()); }
    std::span<const double> costs() const noexcept { return costs_; }
    std::span<const double> lower() const noexcept { return lower_; }
    std::span<const double> upper() const noexcept { return upper_; }
    std::span<const RowType> row_types() const noexcept { return types_; }
    std::span<const double> rhs() const noexcept { return rhs_; }
    std::span<const Triplet> entries() const noexcept { return entries_; }

    // Throws PreconditionError on dimension mismatch, NaN data or crossed bounds.
    void validate() const;

  private:
    Sense sense_;
    std::vector<double> costs_, lower_, upper_;
    std::vector<RowType> types_;
    std::vector<double> rhs_;
    std::vector<Triplet> entries_;
};

// Duals are derivatives of the optimal objective with respect to each right-hand side,
// in the problem's own sense; reduced costs are cost minus dual-weighted column.
struct Solution {
    Status status = Status::numerical_failure;
    double objective = 0.0;
    std::vector<double> primal;
    std::vector<double> dual;
    std::vector<double> reduced_cost;
    long iterations = 0;
};

struct Options {
    Tolerances tol = kTol;
    long max_iterations = 0;       // 0 picks a size-based limit
    int bland_after_stalls = 60;   // consecutive degenerate pivots before Bland's rule
};

// Dense-tableau bounded-variable simplex. A solved object can be warm-started after
// column bound changes (dual simplex) or restricted to its optimal face for a
// lexicographic follow-up objective.
class Simplex {
  public:
    explicit Simplex(const Problem& problem, Options options = {});

    Status solve();
    Status reoptimize();
    void set_column_bounds(int col, double lower, double upper);

    // Fixes every nonbasic column whose reduced cost is nonzero (which pins the current
    // optimal face) and then optimises the new objective over that face.
    Status optimize_over_optimal_face(std::span<const double> objective, Sense sense);

    Status status() const noexcept { return status_; }
    double objective_value() const;
    double column_value(int col) const { return x_.at(static_cast<std::size_t>(col)); }
    std::vector<double> primal() const;
    Solution solution() const;
    long iterations() const noexcept { return iterations_; }

  private:
    enum class Phase { one, two };

    void build_initial_tableau();
    void compute_reduced_costs();
    void compute_basic_values();
    void pivot(int row, int col);
    Status primal_loop(Phase phase);
    Status dual_loop();
    bool make_dual_feasible();
    bool residual_ok() const;
    bool is_fixed(int j) const { return up_[static_cast<std::size_t>(j)] - lo_[static_cast<std::size_t>(j)] <= 0.0; }
    double& tab(int i, int j) { return tab_[static_cast<std::size_t>(i) * static_cast<std::size_t>(ncols_) + static_cast<std::size_t>(j)]; }
    double tab(int i, int j) const { return tab_[static_cast<std::size_t>(i) * static_cast<std::size_t>(ncols_) + static_cast<std::size_t>(j)]; }

    Problem problem_;
    Options opt_;
    int n_ = 0;      // structural columns
    int m_ = 0;      // rows
    int ncols_ = 0;  // structural + slack + artificial
    std::vector<double> dense_a_;  // original rows over structural columns
    std::vector<double> tab_;
    std::vector<double> beta_;
    std::vector<int> basis_;
    std::vector<int> row_of_;  // basic row of each column, -1 when nonbasic
    std::vector<double> lo_, up_, x_, cost_, d_;
    std::vector<double> user_lo_, user_up_;  // structural bounds requested by the caller
    std::vector<double> internal_cost_;     // structural costs in minimisation form
    double sense_sign_ = 1.0;
    Status status_ = Status::numerical_failure;
    bool has_basis_ = false;
    bool face_restricted_ = false;
    long iterations_ = 0;
    long limit_ = 0;
};

Solution solve(const Problem& problem, Options options = {});

// Re-solves `problem`, checks the optimum matches `value`, then optimises `secondary`
// (in `secondary_sense`) over the set of optimal solutions.
Solution solve_with_fixed_value(const Problem& problem, double value, std::span<const double> secondary,
                                Sense secondary_sense, Options options = {});

}  // namespace npp::lp

#endif
