#include "ltl/mip.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "ltl/error.hpp"

namespace ltl {

namespace {

constexpr double kEps = 1e-9;

struct Box {
    std::vector<double> lo, hi;
};

/// Row-implied bound tightening to a fixpoint; false when some row cannot be met.
bool propagate(const MipModel& m, Box& box) {
    for (bool changed = true; changed;) {
        changed = false;
        for (const auto& r : m.rows) {
            double minact = 0.0, maxact = 0.0;
            for (auto [j, a] : r.coefs) {
                minact += a > 0 ? a * box.lo[j] : a * box.hi[j];
                maxact += a > 0 ? a * box.hi[j] : a * box.lo[j];
            }
            const bool upper_side = r.sense != Sense::Ge;
            const bool lower_side = r.sense != Sense::Le;
            if (upper_side && minact > r.rhs + 1e-7) return false;
            if (lower_side && maxact < r.rhs - 1e-7) return false;
            for (auto [j, a] : r.coefs) {
                double lo = box.lo[j], hi = box.hi[j];
                if (lo == hi) continue;
                if (upper_side) {
                    const double rest = minact - (a > 0 ? a * lo : a * hi);
                    const double lim = (r.rhs - rest) / a;
                    if (a > 0) hi = std::min(hi, std::floor(lim + kEps));
                    else lo = std::max(lo, std::ceil(lim - kEps));
                }
                if (lower_side) {
                    const double rest = maxact - (a > 0 ? a * box.hi[j] : a * box.lo[j]);
                    const double lim = (r.rhs - rest) / a;
                    if (a > 0) lo = std::max(lo, std::ceil(lim - kEps));
                    else hi = std::min(hi, std::floor(lim + kEps));
                }
                if (lo > hi) return false;
                if (lo != box.lo[j] || hi != box.hi[j]) {
                    // keep the running activities consistent with the tightened box
                    minact += a > 0 ? a * (lo - box.lo[j]) : a * (hi - box.hi[j]);
                    maxact += a > 0 ? a * (hi - box.hi[j]) : a * (lo - box.lo[j]);
                    box.lo[j] = lo;
                    box.hi[j] = hi;
                    changed = true;
                }
            }
        }
    }
    return true;
}

struct Search {
    const MipModel& m;
    const OracleCaps& caps;
    double best = std::numeric_limits<double>::infinity();
    std::vector<double> best_x;
    long nodes = 0;

    Search(const MipModel& model, const OracleCaps& c) : m(model), caps(c) {}

    void dfs(Box box) {
        if (++nodes > caps.max_search_nodes)
            throw SizeExceededError(fmt::format("brute_force_oracle: more than {} search nodes", caps.max_search_nodes));
        if (!propagate(m, box)) return;
        double cost_lb = 0.0;
        std::size_t pick = box.lo.size();
        for (std::size_t j = 0; j < box.lo.size(); ++j) {
            const double c = m.variables[j].cost;
            cost_lb += c >= 0 ? c * box.lo[j] : c * box.hi[j];
            if (pick == box.lo.size() && box.lo[j] < box.hi[j]) pick = j;
        }
        if (cost_lb >= best - kEps) return;
        if (pick == box.lo.size()) {
            best = cost_lb;
            best_x = box.lo;
            return;
        }
        for (double v = box.lo[pick]; v <= box.hi[pick]; v += 1.0) {
            Box child = box;
            child.lo[pick] = child.hi[pick] = v;
            dfs(std::move(child));
        }
    }
};

}  // namespace

MipSolution brute_force_oracle(const MipModel& model, const OracleCaps& caps) {
    Box box;
    for (const auto& v : model.variables) {
        box.lo.push_back(std::ceil(v.lower - kEps));
        box.hi.push_back(std::floor(v.upper + kEps));
    }
    MipSolution sol;
    sol.status = MipStatus::Infeasible;
    if (!propagate(model, box)) return sol;

    std::size_t free_vars = 0;
    for (std::size_t j = 0; j < box.lo.size(); ++j) free_vars += box.lo[j] < box.hi[j];
    if (free_vars > caps.max_free_vars)
        throw SizeExceededError(fmt::format("brute_force_oracle: {} free variables exceed the cap of {}", free_vars,
                                            caps.max_free_vars));

    Search s(model, caps);
    s.dfs(std::move(box));
    sol.node_count = s.nodes;
    if (s.best_x.empty() && !model.variables.empty()) return sol;
    sol.status = MipStatus::Optimal;
    sol.values = std::move(s.best_x);
    sol.objective = objective_value(model, sol.values);
    sol.best_bound = sol.objective;
    return sol;
}

}  // namespace ltl
