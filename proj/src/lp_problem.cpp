#include <cmath>

#include "npp/error.hpp"
#include "npp/lp.hpp"

namespace npp::lp {

std::string_view to_string(Status s) {
    switch (s) {
        case Status::optimal: return "optimal";
        case Status::infeasible: return "infeasible";
        case Status::unbounded: return "unbounded";
        case Status::numerical_failure: return "numerical-failure";
    }
    return "unknown";
}

int Problem::add_column(double cost, double lower, double upper) {
    costs_.push_back(cost);
    lower_.push_back(lower);
    upper_.push_back(upper);
    return static_cast<int>(costs_.size()) - 1;
}

int Problem::add_row(std::span<const Term> terms, RowType type, double rhs) {
    const int row = static_cast<int>(rhs_.size());
    for (const auto& [col, value] : terms)
        if (value != 0.0) entries_.push_back({row, col, value});
    types_.push_back(type);
    rhs_.push_back(rhs);
    return row;
}

void Problem::set_bounds(int col, double lower, double upper) {
    lower_.at(static_cast<std::size_t>(col)) = lower;
    upper_.at(static_cast<std::size_t>(col)) = upper;
}

void Problem::validate() const {
    const int n = column_count();
    const int m = row_count();
    for (int j = 0; j < n; ++j) {
        auto u = static_cast<std::size_t>(j);
        if (!std::isfinite(costs_[u])) throw PreconditionError("non-finite objective coefficient");
        if (std::isnan(lower_[u]) || std::isnan(upper_[u]) || lower_[u] > upper_[u] || lower_[u] == kInf ||
            upper_[u] == -kInf)
            throw PreconditionError("invalid column bounds");
    }
    for (double b : rhs_)
        if (!std::isfinite(b)) throw PreconditionError("non-finite right-hand side");
    for (const Triplet& t : entries_) {
        if (t.row < 0 || t.row >= m || t.col < 0 || t.col >= n)
            throw PreconditionError("matrix entry outside problem dimensions");
        if (!std::isfinite(t.value)) throw PreconditionError("non-finite matrix entry");
    }
}

}  // namespace npp::lp
