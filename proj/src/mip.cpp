#include "ltl/mip.hpp"

#include <chrono>
#include <cmath>
#include <map>
#include <set>

#include <fmt/format.h>

#include "ltl/error.hpp"

namespace ltl {

std::string_view mip_status_name(MipStatus status) {
    switch (status) {
        case MipStatus::Optimal: return "Optimal";
        case MipStatus::Feasible: return "Feasible";
        case MipStatus::Infeasible: return "Infeasible";
        case MipStatus::BoundExceeded: return "BoundExceeded";
    }
    return "?";
}

std::vector<Violation> verify_solution(const MipModel& model, const std::vector<double>& values, double tol) {
    std::vector<Violation> out;
    if (values.size() != model.variables.size()) {
        out.push_back({"<dimension>", static_cast<double>(values.size()), static_cast<double>(model.variables.size())});
        return out;
    }
    for (std::size_t j = 0; j < values.size(); ++j) {
        const auto& v = model.variables[j];
        const double x = values[j];
        if (!std::isfinite(x) || x < v.lower - tol || x > v.upper + tol) out.push_back({v.name, x, v.upper});
        else if (std::abs(x - std::round(x)) > tol) out.push_back({v.name + " (integrality)", x, std::round(x)});
    }
    for (const auto& r : model.rows) {
        double act = 0.0;
        for (auto [j, a] : r.coefs) act += a * values[j];
        const bool ok = (r.sense == Sense::Eq && std::abs(act - r.rhs) <= tol) ||
                        (r.sense == Sense::Le && act <= r.rhs + tol) || (r.sense == Sense::Ge && act >= r.rhs - tol);
        if (!ok) out.push_back({r.name, act, r.rhs});
    }
    return out;
}

double objective_value(const MipModel& model, const std::vector<double>& values) {
    double z = 0.0;
    for (std::size_t j = 0; j < values.size(); ++j) z += model.variables[j].cost * values[j];
    return z;
}

namespace {

struct Node {
    double bound = 0.0;
    int depth = 0;
    std::map<std::size_t, std::pair<double, double>> bounds;  // overrides of root bounds
};

/// Most fractional variable within [first, last); lowest index on ties.
std::optional<std::size_t> most_fractional(const std::vector<double>& x, std::size_t first, std::size_t last,
                                           double tol) {
    std::optional<std::size_t> pick;
    double best = tol;
    for (std::size_t j = first; j < last; ++j) {
        const double f = x[j] - std::floor(x[j]);
        const double dist = std::min(f, 1.0 - f);
        if (dist > best) {
            best = dist;
            pick = j;
        }
    }
    return pick;
}

/**
 * Completes an LP point whose X part is integral. With X fixed, each capacity
 * row becomes a truck-count floor, and the remaining Y problem is solved as an
 * LP. Returns the rounded point only when it is integral and verifies.
 */
std::optional<std::vector<double>> complete_from_x(const MipModel& model, const LpProblem& root,
                                                   const std::vector<double>& x) {
    LpProblem lp = root;
    for (std::size_t j = 0; j < model.num_x(); ++j) lp.lower[j] = lp.upper[j] = std::round(x[j]);
    for (std::size_t i = 0; i < model.rows.size(); ++i) {
        if (model.rows[i].tag != RowTag::Eq3) continue;
        auto& row = lp.rows[i];
        double load = 0.0, cap = 0.0;
        std::vector<std::pair<std::size_t, double>> trucks;
        for (auto [j, a] : row.coefs) {
            if (j < model.num_x()) {
                load += a * lp.lower[j];
            } else {
                cap = -a;
                trucks.emplace_back(j, 1.0);
            }
        }
        if (!(cap > 0.0)) return std::nullopt;
        row.coefs = std::move(trucks);
        row.sense = Sense::Ge;
        row.rhs = std::max(0.0, std::ceil(load / cap - 1e-9));
    }
    const LpSolution rel = solve_lp(lp);
    if (rel.status != LpStatus::Optimal) return std::nullopt;
    std::vector<double> out(rel.values.size());
    for (std::size_t j = 0; j < out.size(); ++j) {
        out[j] = std::round(rel.values[j]);
        if (std::abs(out[j] - rel.values[j]) > 1e-6) return std::nullopt;
    }
    if (!verify_solution(model, out).empty()) return std::nullopt;
    return out;
}

}  // namespace

MipSolution solve_mip(const MipModel& model, const MipLimits& limits) {
    using clock = std::chrono::steady_clock;
    const auto t0 = clock::now();
    auto out_of_time = [&] {
        return limits.time_budget_seconds > 0.0 &&
               std::chrono::duration<double>(clock::now() - t0).count() > limits.time_budget_seconds;
    };

    const LpProblem root = relaxation(model);
    const std::size_t n = root.num_cols();
    MipSolution sol;
    double incumbent = kInf;

    std::map<long, Node> open;
    std::set<std::pair<double, long>> by_bound;
    long next_id = 0;
    auto push = [&](Node node) {
        const long id = next_id++;
        by_bound.emplace(node.bound, id);
        open.emplace(id, std::move(node));
    };
    push(Node{-kInf, 0, {}});

    bool limit_hit = false;
    LpProblem lp = root;
    while (!open.empty()) {
        if (sol.node_count >= limits.max_nodes || out_of_time()) {
            limit_hit = true;
            break;
        }
        long id;
        if (open.size() > limits.max_open_nodes) {
            id = open.rbegin()->first;
        } else {
            id = by_bound.begin()->second;
        }
        Node node = std::move(open.at(id));
        open.erase(id);
        by_bound.erase({node.bound, id});
        if (node.bound >= incumbent - limits.gap) continue;

        ++sol.node_count;
        lp.lower = root.lower;
        lp.upper = root.upper;
        for (const auto& [j, b] : node.bounds) {
            lp.lower[j] = b.first;
            lp.upper[j] = b.second;
        }
        const LpSolution rel = solve_lp(lp);
        sol.lp_iterations += rel.iterations;
        if (rel.status == LpStatus::Unbounded)
            throw InternalError(fmt::format("model {}: LP relaxation unbounded; all variables should be bounded",
                                            model.name));
        if (rel.status == LpStatus::Infeasible) continue;
        if (rel.objective >= incumbent - limits.gap) continue;

        const bool x_integral = !most_fractional(rel.values, 0, model.num_x(), limits.int_tol);
        auto branch = most_fractional(rel.values, model.num_x(), n, limits.int_tol);
        if (branch && x_integral) {
            if (auto x = complete_from_x(model, root, rel.values)) {
                const double z = objective_value(model, *x);
                if (z < incumbent - limits.gap) {
                    incumbent = z;
                    sol.values = std::move(*x);
                    sol.objective = z;
                }
                if (rel.objective >= incumbent - limits.gap) continue;
            }
        }
        if (!branch) branch = most_fractional(rel.values, 0, model.num_x(), limits.int_tol);
        if (!branch) {
            std::vector<double> x(n);
            for (std::size_t j = 0; j < n; ++j) x[j] = std::round(rel.values[j]);
            if (!verify_solution(model, x).empty()) continue;  // rounding drift; treat as unusable
            const double z = objective_value(model, x);
            if (z < incumbent) {
                incumbent = z;
                sol.values = std::move(x);
                sol.objective = z;
            }
            continue;
        }

        const std::size_t j = *branch;
        const double v = rel.values[j];
        const double lo = lp.lower[j], hi = lp.upper[j];
        Node down{rel.objective, node.depth + 1, node.bounds};
        down.bounds[j] = {lo, std::floor(v)};
        Node up{rel.objective, node.depth + 1, std::move(node.bounds)};
        up.bounds[j] = {std::ceil(v), hi};
        push(std::move(down));
        push(std::move(up));
    }

    const bool have = std::isfinite(incumbent);
    if (!limit_hit) {
        sol.status = have ? MipStatus::Optimal : MipStatus::Infeasible;
        sol.best_bound = have ? incumbent : kInf;
    } else {
        sol.status = have ? MipStatus::Feasible : MipStatus::BoundExceeded;
        double lb = have ? incumbent : kInf;
        if (!by_bound.empty()) lb = std::min(lb, by_bound.begin()->first);
        sol.best_bound = lb;
    }
    if (!have) sol.values.clear();
    return sol;
}

}  // namespace ltl
