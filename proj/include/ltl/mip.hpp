#pragma once

#include <string>
#include <vector>

#include "ltl/lp.hpp"
#include "ltl/model.hpp"

namespace ltl {

enum class MipStatus { Optimal, Feasible, Infeasible, BoundExceeded };

std::string_view mip_status_name(MipStatus status);

struct MipSolution {
    MipStatus status = MipStatus::Infeasible;
    std::vector<double> values;  ///< integral when status is Optimal or Feasible
    double objective = 0.0;
    double best_bound = 0.0;
    long node_count = 0;
    long lp_iterations = 0;

    bool has_incumbent() const { return status == MipStatus::Optimal || status == MipStatus::Feasible; }
};

struct MipLimits {
    long max_nodes = 200000;
    double time_budget_seconds = 0.0;  ///< 0 = unlimited
    double gap = 1e-6;                 ///< absolute, in objective units
    double int_tol = 1e-6;
    /// Open-node count beyond which selection falls back to depth-first.
    std::size_t max_open_nodes = 100000;
};

struct Violation {
    std::string what;  ///< row or variable name
    double activity = 0.0;
    double bound = 0.0;
};

/**
 * Substitutes values into every model row and checks variable bounds and
 * integrality. Returns all violations beyond the tolerance.
 */
std::vector<Violation> verify_solution(const MipModel& model, const std::vector<double>& values, double tol = 1e-6);

/// Objective value of an assignment.
double objective_value(const MipModel& model, const std::vector<double>& values);

/**
 * Best-first branch-and-bound on the LP relaxation. Branches on the most
 * fractional Y variable, then the most fractional X variable (lowest index
 * on ties). Every incumbent is re-verified with verify_solution.
 */
MipSolution solve_mip(const MipModel& model, const MipLimits& limits = {});

struct OracleCaps {
    std::size_t max_free_vars = 64;
    long max_search_nodes = 20'000'000;
};

/**
 * Exhaustive enumeration of the integer box, pruned only by row-implied
 * bound propagation and by partial cost. Independent of the LP code.
 * Throws SizeExceededError when the model exceeds the caps.
 */
MipSolution brute_force_oracle(const MipModel& model, const OracleCaps& caps = {});

}  // namespace ltl
