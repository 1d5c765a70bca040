#pragma once

#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

#include "ltl/model.hpp"

namespace ltl {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Generic bounded LP: min c'x subject to rows and lower <= x <= upper.
struct LpProblem {
    struct Row {
        std::vector<std::pair<std::size_t, double>> coefs;
        Sense sense = Sense::Eq;
        double rhs = 0.0;
    };
    std::vector<double> cost, lower, upper;
    std::vector<Row> rows;

    std::size_t num_cols() const { return cost.size(); }
};

/// Continuous relaxation of a MipModel.
LpProblem relaxation(const MipModel& model);

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpSolution {
    LpStatus status = LpStatus::Infeasible;
    double objective = 0.0;
    std::vector<double> values;
    long iterations = 0;
};

struct LpOptions {
    double feas_tol = 1e-7;
    double dual_tol = 1e-9;
    double pivot_tol = 1e-9;
    int refactor_every = 100;
    /// Consecutive degenerate pivots before switching to Bland's rule.
    int bland_after = 50;
    long max_iterations = 0;  ///< 0 = automatic
};

/**
 * Two-phase bounded-variable primal simplex (Dantzig pricing with a Bland
 * fallback on degenerate stalls). Fixed columns and empty rows are removed
 * before the simplex runs. Lower bounds must be finite.
 */
LpSolution solve_lp(const LpProblem& problem, const LpOptions& options = {});

/// Solves the continuous relaxation of the model.
LpSolution solve_lp(const MipModel& model, const LpOptions& options = {});

}  // namespace ltl
