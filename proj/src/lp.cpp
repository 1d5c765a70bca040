#include "ltl/lp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "ltl/error.hpp"

namespace ltl {

LpProblem relaxation(const MipModel& model) {
    LpProblem p;
    for (const auto& v : model.variables) {
        p.cost.push_back(v.cost);
        p.lower.push_back(v.lower);
        p.upper.push_back(v.upper);
    }
    for (const auto& r : model.rows) p.rows.push_back({r.coefs, r.sense, r.rhs});
    return p;
}

namespace {

enum class VarState : unsigned char { Basic, AtLower, AtUpper };

/// Equality-form working problem: A x = b with bounds, columns stored sparsely.
class Simplex {
public:
    Simplex(std::size_t m, const LpOptions& opt) : m_(m), opt_(opt) {}

    std::size_t add_column(std::vector<std::pair<std::size_t, double>> col, double lo, double hi) {
        cols_.push_back(std::move(col));
        lb_.push_back(lo);
        ub_.push_back(hi);
        return cols_.size() - 1;
    }

    /// Places structurals at a finite bound and builds a slack/artificial starting basis.
    void start(const std::vector<double>& b, const std::vector<std::size_t>& slack_of_row,
               const std::vector<double>& slack_sign) {
        b_ = b;
        const std::size_t n0 = cols_.size();
        x_.assign(n0, 0.0);
        state_.assign(n0, VarState::AtLower);
        for (std::size_t j = 0; j < n0; ++j) {
            if (std::isfinite(lb_[j])) {
                x_[j] = lb_[j];
            } else if (std::isfinite(ub_[j])) {
                x_[j] = ub_[j];
                state_[j] = VarState::AtUpper;
            } else {
                throw InternalError("solve_lp: free variables are not supported");
            }
        }
        std::vector<double> resid = b_;
        for (std::size_t j = 0; j < n0; ++j)
            for (auto [i, a] : cols_[j]) resid[i] -= a * x_[j];

        basis_.assign(m_, 0);
        binv_.assign(m_ * m_, 0.0);
        for (std::size_t i = 0; i < m_; ++i) {
            const std::size_t s = slack_of_row[i];
            if (s != kNone && resid[i] * slack_sign[i] >= 0.0) {
                basis_[i] = s;
                state_[s] = VarState::Basic;
                x_[s] = resid[i] * slack_sign[i];
                binv_[i * m_ + i] = slack_sign[i];
            } else {
                const double sign = resid[i] >= 0.0 ? 1.0 : -1.0;
                const std::size_t a = add_column({{i, sign}}, 0.0, kInf);
                x_.push_back(std::abs(resid[i]));
                state_.push_back(VarState::Basic);
                artificial_.push_back(a);
                basis_[i] = a;
                binv_[i * m_ + i] = sign;
            }
        }
        is_artificial_.assign(cols_.size(), 0);
        for (auto a : artificial_) is_artificial_[a] = 1;
    }

    bool has_artificials() const { return !artificial_.empty(); }
    const std::vector<std::size_t>& artificials() const { return artificial_; }

    enum class Result { Optimal, Unbounded };

    Result run(const std::vector<double>& cost) {
        const std::size_t n = cols_.size();
        std::vector<double> pi(m_), alpha(m_);
        int degenerate = 0;
        bool bland = false;
        long since_refactor = 0;
        bool fresh_duals = true;
        refactor();
        const long max_iter = opt_.max_iterations > 0 ? opt_.max_iterations
                                                      : 50L * static_cast<long>(m_ + n) + 1000L;
        for (long local = 0;; ++local, ++iterations_) {
            if (local > max_iter) throw InternalError("solve_lp: iteration limit reached");
            if (fresh_duals) {
                // duals from scratch; between refactorizations they are updated per pivot
                fresh_duals = false;
                for (std::size_t k = 0; k < m_; ++k) pi[k] = 0.0;
                for (std::size_t i = 0; i < m_; ++i) {
                    const double cb = cost[basis_[i]];
                    if (cb == 0.0) continue;
                    const double* row = &binv_[i * m_];
                    for (std::size_t k = 0; k < m_; ++k) pi[k] += cb * row[k];
                }
            }

            std::size_t q = kNone;
            double best = 0.0, dq = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                if (state_[j] == VarState::Basic || !(lb_[j] < ub_[j])) continue;
                double d = cost[j];
                for (auto [i, a] : cols_[j]) d -= pi[i] * a;
                double score = 0.0;
                if (state_[j] == VarState::AtLower && d < -opt_.dual_tol) score = -d;
                if (state_[j] == VarState::AtUpper && d > opt_.dual_tol) score = d;
                if (score <= 0.0) continue;
                if (bland) {
                    q = j;
                    dq = d;
                    break;
                }
                if (score > best) {
                    best = score;
                    q = j;
                    dq = d;
                }
            }
            if (q == kNone) return Result::Optimal;

            for (std::size_t i = 0; i < m_; ++i) {
                const double* row = &binv_[i * m_];
                double v = 0.0;
                for (auto [k, a] : cols_[q]) v += row[k] * a;
                alpha[i] = v;
            }
            const double dir = state_[q] == VarState::AtLower ? 1.0 : -1.0;

            double theta = ub_[q] - lb_[q];
            std::size_t leave = kNone;
            for (std::size_t i = 0; i < m_; ++i) {
                if (std::abs(alpha[i]) <= opt_.pivot_tol) continue;
                const double delta = -dir * alpha[i];
                const std::size_t j = basis_[i];
                double t;
                if (delta < 0.0) {
                    t = std::max(0.0, x_[j] - lb_[j]) / -delta;
                } else {
                    if (!std::isfinite(ub_[j])) continue;
                    t = std::max(0.0, ub_[j] - x_[j]) / delta;
                }
                const bool better = t < theta - 1e-12;
                const bool tie = !better && t <= theta + 1e-12 && leave != kNone;
                if (better ||
                    (tie && (bland ? basis_[i] < basis_[leave] : std::abs(alpha[i]) > std::abs(alpha[leave])))) {
                    theta = t;
                    leave = i;
                }
            }
            if (!std::isfinite(theta)) return Result::Unbounded;

            x_[q] += dir * theta;
            for (std::size_t i = 0; i < m_; ++i) x_[basis_[i]] -= dir * alpha[i] * theta;

            if (leave == kNone) {
                state_[q] = dir > 0 ? VarState::AtUpper : VarState::AtLower;
                x_[q] = dir > 0 ? ub_[q] : lb_[q];
            } else {
                const std::size_t j = basis_[leave];
                const bool to_lower = -dir * alpha[leave] < 0.0;
                x_[j] = to_lower ? lb_[j] : ub_[j];
                state_[j] = to_lower ? VarState::AtLower : VarState::AtUpper;
                pivot(leave, q, alpha);
                const double* prow = &binv_[leave * m_];
                for (auto k : nz_) pi[k] += dq * prow[k];
                if (++since_refactor >= opt_.refactor_every) {
                    refactor();
                    since_refactor = 0;
                    fresh_duals = true;
                }
            }

            if (theta <= 1e-12) {
                if (++degenerate > opt_.bland_after) bland = true;
            } else {
                degenerate = 0;
                bland = false;
            }
        }
    }

    /// Fixes artificials at zero and pivots basic ones out where possible.
    void retire_artificials() {
        for (auto a : artificial_) {
            ub_[a] = 0.0;
            if (state_[a] != VarState::Basic) {
                x_[a] = 0.0;
                state_[a] = VarState::AtLower;
            }
        }
        std::vector<double> alpha(m_);
        for (std::size_t r = 0; r < m_; ++r) {
            if (!is_artificial_[basis_[r]]) continue;
            const double* row = &binv_[r * m_];
            for (std::size_t j = 0; j < cols_.size(); ++j) {
                if (state_[j] == VarState::Basic || is_artificial_[j]) continue;
                double v = 0.0;
                for (auto [k, a] : cols_[j]) v += row[k] * a;
                if (std::abs(v) < 1e-7) continue;
                for (std::size_t i = 0; i < m_; ++i) alpha[i] = 0.0;
                for (auto [k, a] : cols_[j])
                    for (std::size_t i = 0; i < m_; ++i) alpha[i] += binv_[i * m_ + k] * a;
                const std::size_t art = basis_[r];
                x_[art] = 0.0;
                state_[art] = VarState::AtLower;
                pivot(r, j, alpha);
                break;
            }
        }
    }

    double artificial_sum() const {
        double s = 0.0;
        for (auto a : artificial_) s += x_[a];
        return s;
    }

    std::size_t num_columns() const { return cols_.size(); }
    const std::vector<double>& x() const { return x_; }
    long iterations() const { return iterations_; }

    void refactor() {
        // Gauss-Jordan on [B | I] without row exchanges.
        std::vector<double> bmat(m_ * m_, 0.0);
        for (std::size_t c = 0; c < m_; ++c)
            for (auto [i, a] : cols_[basis_[c]]) bmat[i * m_ + c] = a;
        std::vector<double> inv(m_ * m_, 0.0);
        for (std::size_t i = 0; i < m_; ++i) inv[i * m_ + i] = 1.0;

        std::vector<std::size_t> order(m_);
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::vector<char> used(m_, 0);
        std::vector<std::size_t> pivot_row(m_), nzb, nzi;
        for (std::size_t c : order) {
            std::size_t p = kNone;
            double best = 1e-12;
            for (std::size_t r = 0; r < m_; ++r)
                if (!used[r] && std::abs(bmat[r * m_ + c]) > best) {
                    best = std::abs(bmat[r * m_ + c]);
                    p = r;
                }
            if (p == kNone) throw InternalError("solve_lp: singular basis");
            used[p] = 1;
            pivot_row[c] = p;
            double* brow = &bmat[p * m_];
            double* irow = &inv[p * m_];
            const double d = brow[c];
            nzb.clear();
            nzi.clear();
            for (std::size_t k = 0; k < m_; ++k) {
                if (brow[k] != 0.0) {
                    brow[k] /= d;
                    nzb.push_back(k);
                }
                if (irow[k] != 0.0) {
                    irow[k] /= d;
                    nzi.push_back(k);
                }
            }
            for (std::size_t r = 0; r < m_; ++r) {
                if (r == p) continue;
                const double f = bmat[r * m_ + c];
                if (f == 0.0) continue;
                for (auto k : nzb) bmat[r * m_ + k] -= f * brow[k];
                for (auto k : nzi) inv[r * m_ + k] -= f * irow[k];
            }
        }
        binv_.resize(m_ * m_);
        for (std::size_t c = 0; c < m_; ++c)
            std::copy_n(&inv[pivot_row[c] * m_], m_, &binv_[c * m_]);

        std::vector<double> rhs = b_;
        for (std::size_t j = 0; j < cols_.size(); ++j) {
            if (state_[j] == VarState::Basic || x_[j] == 0.0) continue;
            for (auto [i, a] : cols_[j]) rhs[i] -= a * x_[j];
        }
        nzi.clear();
        for (std::size_t k = 0; k < m_; ++k)
            if (rhs[k] != 0.0) nzi.push_back(k);
        for (std::size_t i = 0; i < m_; ++i) {
            const double* row = &binv_[i * m_];
            double v = 0.0;
            for (auto k : nzi) v += row[k] * rhs[k];
            x_[basis_[i]] = v;
        }
    }

private:
    static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

    void pivot(std::size_t r, std::size_t q, const std::vector<double>& alpha) {
        const double piv = alpha[r];
        double* prow = &binv_[r * m_];
        nz_.clear();
        for (std::size_t k = 0; k < m_; ++k) {
            if (prow[k] == 0.0) continue;
            prow[k] /= piv;
            nz_.push_back(k);
        }
        for (std::size_t i = 0; i < m_; ++i) {
            if (i == r || alpha[i] == 0.0) continue;
            const double f = alpha[i];
            double* row = &binv_[i * m_];
            for (auto k : nz_) row[k] -= f * prow[k];
        }
        basis_[r] = q;
        state_[q] = VarState::Basic;
    }

    std::size_t m_;
    LpOptions opt_;
    std::vector<std::vector<std::pair<std::size_t, double>>> cols_;
    std::vector<double> lb_, ub_, b_, x_, binv_;
    std::vector<VarState> state_;
    std::vector<std::size_t> basis_, artificial_;
    std::vector<std::size_t> nz_;  ///< nonzero columns of the last pivot row
    std::vector<char> is_artificial_;
    long iterations_ = 0;

public:
    static constexpr std::size_t none() { return kNone; }
};

}  // namespace

LpSolution solve_lp(const LpProblem& p, const LpOptions& opt) {
    const std::size_t n = p.num_cols();
    LpSolution out;
    out.values.assign(n, 0.0);

    // Presolve: drop fixed columns, then rows left without coefficients.
    std::vector<std::size_t> reduced(n, Simplex::none());
    std::vector<std::size_t> kept;
    for (std::size_t j = 0; j < n; ++j) {
        if (p.upper[j] < p.lower[j] - opt.feas_tol) return out;  // Infeasible
        if (p.upper[j] - p.lower[j] <= 0.0) {
            out.values[j] = p.lower[j];
        } else {
            reduced[j] = kept.size();
            kept.push_back(j);
        }
    }

    struct WorkRow {
        std::vector<std::pair<std::size_t, double>> coefs;
        Sense sense;
        double rhs;
    };
    std::vector<WorkRow> rows;
    for (const auto& r : p.rows) {
        WorkRow w{{}, r.sense, r.rhs};
        for (auto [j, a] : r.coefs) {
            if (a == 0.0) continue;
            if (reduced[j] == Simplex::none())
                w.rhs -= a * out.values[j];
            else
                w.coefs.emplace_back(reduced[j], a);
        }
        if (w.coefs.empty()) {
            const bool ok = (w.sense == Sense::Eq && std::abs(w.rhs) <= opt.feas_tol) ||
                            (w.sense == Sense::Le && w.rhs >= -opt.feas_tol) ||
                            (w.sense == Sense::Ge && w.rhs <= opt.feas_tol);
            if (!ok) return out;
            continue;
        }
        rows.push_back(std::move(w));
    }

    const std::size_t m = rows.size();
    Simplex sx(m, opt);
    std::vector<std::vector<std::pair<std::size_t, double>>> cols(kept.size());
    for (std::size_t i = 0; i < m; ++i)
        for (auto [j, a] : rows[i].coefs) cols[j].emplace_back(i, a);
    for (std::size_t c = 0; c < kept.size(); ++c)
        sx.add_column(std::move(cols[c]), p.lower[kept[c]], p.upper[kept[c]]);

    std::vector<std::size_t> slack_of_row(m, Simplex::none());
    std::vector<double> slack_sign(m, 1.0), b(m);
    for (std::size_t i = 0; i < m; ++i) {
        b[i] = rows[i].rhs;
        if (rows[i].sense == Sense::Eq) continue;
        slack_sign[i] = rows[i].sense == Sense::Le ? 1.0 : -1.0;
        slack_of_row[i] = sx.add_column({{i, slack_sign[i]}}, 0.0, kInf);
    }
    sx.start(b, slack_of_row, slack_sign);

    if (sx.has_artificials()) {
        std::vector<double> phase1(sx.num_columns(), 0.0);
        for (auto a : sx.artificials()) phase1[a] = 1.0;
        sx.run(phase1);
        if (sx.artificial_sum() > 1e-6 * std::max<double>(1.0, static_cast<double>(m))) {
            out.iterations = sx.iterations();
            return out;  // Infeasible
        }
        sx.retire_artificials();
    }

    std::vector<double> phase2(sx.num_columns(), 0.0);
    for (std::size_t c = 0; c < kept.size(); ++c) phase2[c] = p.cost[kept[c]];
    const auto res = sx.run(phase2);
    out.iterations = sx.iterations();
    if (res == Simplex::Result::Unbounded) {
        out.status = LpStatus::Unbounded;
        return out;
    }
    sx.refactor();
    for (std::size_t c = 0; c < kept.size(); ++c) {
        const std::size_t j = kept[c];
        out.values[j] = std::clamp(sx.x()[c], p.lower[j], p.upper[j]);
    }
    out.status = LpStatus::Optimal;
    out.objective = 0.0;
    for (std::size_t j = 0; j < n; ++j) out.objective += p.cost[j] * out.values[j];
    return out;
}

LpSolution solve_lp(const MipModel& model, const LpOptions& options) { return solve_lp(relaxation(model), options); }

}  // namespace ltl
