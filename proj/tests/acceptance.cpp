// Acceptance suite: one PASS/FAIL line per primary criterion. Exit status is
// the number of failed criteria.

#include <chrono>
#include <cmath>
#include <functional>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "ltl/error.hpp"
#include "ltl/generator.hpp"
#include "ltl/kpi.hpp"
#include "ltl/lp.hpp"
#include "ltl/mip.hpp"
#include "ltl/mps.hpp"
#include "ltl/pipeline.hpp"
#include "ltl/time_expansion.hpp"
#include "support.hpp"

using namespace ltl;
using namespace ltl::testing;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
    bool pass = true;
    std::string detail;
    std::string first_failure;

    void fail(std::string why) {
        if (pass) first_failure = std::move(why);
        pass = false;
    }
};

/// Every solved model seen by the suite, for the cross-cutting criteria.
struct Ledger {
    std::vector<std::pair<MipModel, MipSolution>> solved;
    std::vector<ScenarioRun> runs;
};

bool close_rel(double a, double b, double tol) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(b)); }

Outcome oracle_equivalence(Ledger& ledger) {
    Outcome o;
    int instances = 0, models = 0;
    double solve_time = 0.0;
    for (std::uint64_t seed = 1; instances < 60 && seed < 500; ++seed) {
        const auto inst = tiny_instance(seed);
        bool any = false;
        for (auto mode : kModes) {
            std::vector<MipModel> built;
            try {
                built = build_scenario_models(inst, scenario(mode));
            } catch (const InfeasibleError&) {
                continue;
            }
            for (auto& m : built) {
                const auto t0 = Clock::now();
                const auto mip = solve_mip(m);
                const auto ref = brute_force_oracle(m);
                solve_time += seconds_since(t0);
                ++models;
                any = true;
                const bool mip_inf = mip.status == MipStatus::Infeasible;
                const bool ref_inf = ref.status == MipStatus::Infeasible;
                if (mip.status != MipStatus::Optimal && !mip_inf)
                    o.fail(fmt::format("seed {} {}: solver status {}", seed, m.name, mip_status_name(mip.status)));
                else if (mip_inf != ref_inf)
                    o.fail(fmt::format("seed {} {}: feasibility differs", seed, m.name));
                else if (!mip_inf && std::abs(mip.objective - ref.objective) > 1e-6)
                    o.fail(fmt::format("seed {} {}: {} vs oracle {}", seed, m.name, mip.objective, ref.objective));
                if (mip.has_incumbent()) ledger.solved.emplace_back(m, mip);
            }
        }
        instances += any;
    }
    if (instances < 50) o.fail(fmt::format("only {} instances", instances));
    if (solve_time >= 5.0) o.fail(fmt::format("took {:.2f}s", solve_time));
    o.detail = fmt::format("{} instances, {} models, {:.2f}s", instances, models, solve_time);
    return o;
}

Outcome relaxation_bound(const Ledger& ledger) {
    Outcome o;
    std::size_t checked = 0;
    auto check = [&](const MipModel& m, const MipSolution& s) {
        ++checked;
        const auto lp = solve_lp(m);
        if (lp.status != LpStatus::Optimal)
            o.fail(fmt::format("{}: LP not optimal", m.name));
        else if (lp.objective > s.objective + 1e-6 * std::max(1.0, std::abs(s.objective)))
            o.fail(fmt::format("{}: LP {} above MIP {}", m.name, lp.objective, s.objective));
    };
    for (const auto& [m, s] : ledger.solved) check(m, s);
    for (const auto& run : ledger.runs)
        for (const auto& mr : run.models)
            if (mr.solution.has_incumbent()) check(mr.model, mr.solution);
    o.detail = fmt::format("{} models", checked);
    return o;
}

Outcome constraint_verification(const Ledger& ledger) {
    Outcome o;
    std::size_t checked = 0;
    auto check = [&](const MipModel& m, const MipSolution& s) {
        ++checked;
        if (const auto bad = verify_solution(m, s.values); !bad.empty())
            o.fail(fmt::format("{}: {} violations, first {}", m.name, bad.size(), bad.front().what));
    };
    for (const auto& [m, s] : ledger.solved) check(m, s);
    for (const auto& run : ledger.runs)
        for (const auto& mr : run.models)
            if (mr.solution.has_incumbent()) check(mr.model, mr.solution);
    o.detail = fmt::format("{} solutions", checked);
    return o;
}

Outcome time_expansion() {
    Outcome o;
    {
        const PhysicalNetwork tri({hub(0, 0, 0), hub(1, 0, 1), hub(2, 1, 0)}, {{0, 1, 1, 60}, {1, 2, 1, 60}, {2, 0, 1, 60}});
        const auto g = expand(tri, 3);
        if (g.nodes().size() != 12 || g.hold_count() != 9 || g.move_count() != 9)
            o.fail(fmt::format("3-hub ring: {}/{}/{}", g.nodes().size(), g.hold_count(), g.move_count()));
    }
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        Draw d(seed * 7919);
        const int n = d.integer(1, 8);
        std::vector<Hub> hubs;
        for (int i = 0; i < n; ++i) hubs.push_back(hub(i, d.unit(), d.unit()));
        std::vector<PhysicalArc> arcs;
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                if (a != b && d.chance(0.35)) arcs.push_back({a, b, d.integer(1, 8), 5.0 + d.unit()});
        const PhysicalNetwork net(hubs, arcs);
        const int T = d.integer(0, 15);
        const auto g = expand(net, T);
        std::size_t moves = 0;
        for (const auto& a : arcs) moves += static_cast<std::size_t>(std::max(0, T - a.transit_time + 1));
        if (g.nodes().size() != static_cast<std::size_t>(n * (T + 1)) ||
            g.hold_count() != static_cast<std::size_t>(n * T) || g.move_count() != moves)
            o.fail(fmt::format("network {}: {}/{}/{}", seed, g.nodes().size(), g.hold_count(), g.move_count()));
    }
    o.detail = "ring + 100 random networks";
    return o;
}

Outcome ratio_identity(const Ledger& ledger) {
    Outcome o;
    if (std::round(average_trip_hour(131, 29) * 100) / 100 != 4.52) o.fail("131/29 does not print as 4.52");
    std::size_t rows = 0;
    for (const auto& run : ledger.runs) {
        if (!run.kpis) continue;
        const auto written = parse_kpis_csv(kpis_csv(*run.kpis), run.kpis->scenario);
        auto check = [&](const KpiRow& r, const KpiRow& w) {
            ++rows;
            if (r.avg_trip_hour != average_trip_hour(r.total_hours, r.total_trips))
                o.fail(fmt::format("carrier {}: {} != {}/{}", r.name, r.avg_trip_hour, r.total_hours, r.total_trips));
            // the CSV keeps two decimals
            if (std::abs(w.avg_trip_hour - average_trip_hour(w.total_hours, w.total_trips)) > 0.005 + 1e-9)
                o.fail(fmt::format("carrier {}: written ratio drifts", r.name));
        };
        for (std::size_t i = 0; i < run.kpis->carriers.size(); ++i) check(run.kpis->carriers[i], written.carriers[i]);
        check(run.kpis->total, written.total);
    }
    o.detail = fmt::format("131/29 = {:.2f}; {} report rows", average_trip_hour(131, 29), rows);
    return o;
}

/// Each carrier's collaborative permission contains its separate-scenario permission.
bool contains_permissions(const std::vector<MipModel>& outer, const std::vector<MipModel>& inner) {
    std::map<CarrierId, std::set<std::pair<HubId, HubId>>> joint;
    for (const auto& m : outer)
        for (const auto& p : m.permissions)
            for (const auto& a : p.arcs) joint[p.carrier].insert({a.from, a.to});
    for (const auto& m : inner)
        for (const auto& p : m.permissions)
            for (const auto& a : p.arcs)
                if (!joint[p.carrier].contains({a.from, a.to})) return false;
    return true;
}

Outcome scenario_nesting(Ledger& ledger) {
    Outcome o;
    MipLimits limits;
    limits.max_nodes = 20000;
    int counted = 0, capped = 0;
    const auto t0 = Clock::now();
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto inst = nesting_line(seed);
        const auto relay_sc = scenario(ScenarioMode::InRegionRelay);
        const auto hyper_sc = scenario(ScenarioMode::HyperconnectedRelay);
        if (!contains_permissions(build_scenario_models(inst, hyper_sc), build_scenario_models(inst, relay_sc))) {
            o.fail(fmt::format("instance {}: joint permissions miss a separate arc", seed));
            continue;
        }
        auto relay = run_scenario(inst, relay_sc, limits);
        auto hyper = run_scenario(inst, hyper_sc, limits);
        if (relay.status != RunStatus::Optimal) {
            o.fail(fmt::format("instance {}: relay {}", seed, run_status_name(relay.status)));
            continue;
        }
        if (!hyper.kpis) {
            o.fail(fmt::format("instance {}: hyper {}", seed, run_status_name(hyper.status)));
            continue;
        }
        capped += hyper.status != RunStatus::Optimal;
        ++counted;

        // a capped search still returns an incumbent, which bounds the joint optimum from above
        const double separate = relay.kpis->objective;
        const double joint = hyper.kpis->objective;
        if (joint > separate + 1e-6 * std::max(1.0, separate))
            o.fail(fmt::format("instance {}: hyper {} > relay {}", seed, joint, separate));

        std::vector<const ModelRun*> sources;
        for (const auto& mr : relay.models) sources.push_back(&mr);
        const auto& target = hyper.models.at(0).model;
        const auto injected = transfer_solutions(target, sources);
        if (const auto bad = verify_solution(target, injected); !bad.empty())
            o.fail(fmt::format("instance {}: injected relay plan violates {}", seed, bad.front().what));
        else if (!close_rel(objective_value(target, injected), separate, 1e-9))
            o.fail(fmt::format("instance {}: injected plan costs {} not {}", seed, objective_value(target, injected),
                               separate));

        ledger.runs.push_back(std::move(relay));
        ledger.runs.push_back(std::move(hyper));
    }
    if (counted < 10) o.fail(fmt::format("only {} instances", counted));
    o.detail = fmt::format("{} instances, {} hyper searches capped, {:.1f}s", counted, capped, seconds_since(t0));
    return o;
}

Outcome decomposition_conservation(Ledger& ledger) {
    Outcome o;
    // add the tiny suite's full pipelines so every scenario shape is covered
    for (std::uint64_t seed = 1; seed <= 40; ++seed)
        for (auto mode : kModes) {
            auto run = run_scenario(tiny_instance(seed), scenario(mode), MipLimits{});
            if (run.kpis) ledger.runs.push_back(std::move(run));
        }
    std::size_t models = 0;
    for (const auto& run : ledger.runs) {
        for (const auto& mr : run.models) {
            if (!mr.solution.has_incumbent()) continue;
            ++models;
            const auto& m = mr.model;
            std::map<std::pair<CarrierId, ArcIndex>, long> used;
            for (const auto& it : mr.vehicles)
                for (auto a : it.arcs) ++used[{it.carrier, a}];
            std::map<CarrierId, long> y_hours, trip_hours;
            for (std::size_t j = m.num_x(); j < m.variables.size(); ++j) {
                const auto& v = m.variables[j];
                const long y = std::lround(mr.solution.values[j]);
                if (used[{v.entity, v.arc}] != y) o.fail(fmt::format("{}: {} used {} times, Y = {}", m.name, v.name, used[{v.entity, v.arc}], y));
                const auto& a = m.graph.arcs()[v.arc];
                if (a.is_move()) y_hours[v.entity] += a.transit * y;
            }
            for (const auto& t : mr.trips) trip_hours[t.carrier] += t.driving_hours;
            for (CarrierId c : m.carriers)
                if (y_hours[c] != trip_hours[c])
                    o.fail(fmt::format("{}: carrier {} trips drive {}h, Y drives {}h", m.name, c, trip_hours[c], y_hours[c]));
        }
    }
    o.detail = fmt::format("{} models", models);
    return o;
}

Outcome allocation_conservation(const Ledger& ledger) {
    Outcome o;
    const auto exact = allocate_shared(100, {1, 3}, {0, 1}, 0);
    if (exact.at(0) != 25.0 || exact.at(1) != 75.0) o.fail("{1 t, 3 t} split is not 25/75");
    Draw d(2024);
    for (int trial = 0; trial < 2000; ++trial) {
        const double q = 5000 * d.unit();
        const int n = d.integer(1, 8);
        std::vector<double> w;
        std::vector<CarrierId> owners;
        for (int i = 0; i < n; ++i) {
            w.push_back(0.01 * d.integer(0, 1500));
            owners.push_back(d.integer(0, 3));
        }
        double sum = 0;
        for (const auto& [c, v] : allocate_shared(q, w, owners, d.integer(0, 3))) sum += v;
        if (std::abs(sum - q) > 1e-6) o.fail(fmt::format("trial {}: shares {} of {}", trial, sum, q));
    }
    for (const auto& run : ledger.runs) {
        if (!run.kpis) continue;
        double cost = 0, tons = 0;
        for (const auto& r : run.kpis->carriers) {
            cost += r.cost;
            tons += r.emission_metric_tons;
        }
        if (std::abs(cost - run.kpis->objective) > 1e-6 * std::max(1.0, run.kpis->objective))
            o.fail(fmt::format("{} run: carrier costs {} vs objective {}", scenario_key(run.scenario.mode), cost,
                               run.kpis->objective));
        if (std::abs(tons - run.kpis->total.emission_metric_tons) > 1e-6)
            o.fail(fmt::format("{} run: carrier emissions do not add up", scenario_key(run.scenario.mode)));
    }
    o.detail = fmt::format("25/75 exact, 2000 random legs, {} scenario runs", ledger.runs.size());
    return o;
}

std::vector<std::string> report_files(std::uint64_t seed, const GeneratorParams& p) {
    const auto inst = generate_instance(seed, p);
    std::vector<std::string> out{serialize_instance(inst)};
    for (auto mode : kModes) {
        for (const auto& m : build_scenario_models(inst, scenario(mode))) out.push_back(export_model(m));
        MipLimits limits;
        limits.max_nodes = 300;
        const auto run = run_scenario(inst, scenario(mode), limits);
        out.push_back(solution_json(run));
        if (run.kpis) {
            out.push_back(kpis_csv(*run.kpis));
            out.push_back(trips_csv(run));
            out.push_back(truckflow_csv(run));
        }
    }
    return out;
}

Outcome determinism() {
    Outcome o;
    GeneratorParams p;
    p.hubs = 6;
    p.carriers = 2;
    p.arcs = 16;
    p.commodities = 4;
    p.horizon = 14;
    p.winding_down = 3;
    const auto a = report_files(11, p);
    const auto b = report_files(11, p);
    if (a != b) o.fail("outputs differ between runs");
    const auto full_a = serialize_instance(generate_instance(1, GeneratorParams{}));
    const auto full_b = serialize_instance(generate_instance(1, GeneratorParams{}));
    if (full_a != full_b) o.fail("default-size instance differs between runs");
    o.detail = fmt::format("{} artifacts compared", a.size() + 1);
    return o;
}

/// Structural MPS check: section order, one marker pair, every reference resolves.
std::string mps_problem(const std::string& text) {
    std::istringstream in(text);
    std::string line, section;
    std::vector<std::string> order;
    std::set<std::string> rows, cols;
    int markers = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::vector<std::string> f;
        for (std::string w; ls >> w;) f.push_back(w);
        if (line[0] != ' ') {
            section = f[0];
            order.push_back(section);
            continue;
        }
        if (section == "ROWS") {
            if (f.size() != 2) return "bad ROWS line: " + line;
            rows.insert(f[1]);
        } else if (section == "COLUMNS") {
            if (f.size() == 3 && f[1] == "'MARKER'") {
                ++markers;
                continue;
            }
            if (f.size() != 3 || !rows.contains(f[1])) return "bad COLUMNS line: " + line;
            std::stod(f[2]);
            cols.insert(f[0]);
        } else if (section == "RHS") {
            if (f.size() != 3 || !rows.contains(f[1])) return "bad RHS line: " + line;
        } else if (section == "BOUNDS") {
            if (f.size() != 4 || !cols.contains(f[2])) return "bad BOUNDS line: " + line;
        }
    }
    if (order != std::vector<std::string>{"NAME", "ROWS", "COLUMNS", "RHS", "BOUNDS", "ENDATA"}) return "section order";
    if (markers != 2) return "marker count";
    return "";
}

Outcome desk_scale() {
    Outcome o;
    const auto t0 = Clock::now();
    const auto inst = generate_instance(1, GeneratorParams{});
    if (inst.network.hubs().size() != 18 || inst.network.arcs().size() != 120 || inst.carriers.size() != 3 ||
        inst.commodities.size() != 82 || inst.horizon != 48 || inst.winding_down != 6)
        o.fail("instance shape differs from 18/120/3/82/48+6");
    std::size_t files = 0, vars = 0;
    for (auto mode : kModes) {
        for (const auto& m : build_scenario_models(inst, scenario(mode))) {
            const auto text = export_model(m);
            ++files;
            vars += m.variables.size();
            if (const auto why = mps_problem(text); !why.empty()) o.fail(fmt::format("{}: {}", m.name, why));
        }
    }
    const double secs = seconds_since(t0);
    if (files != 7) o.fail(fmt::format("{} models instead of 7", files));
    if (secs >= 60.0) o.fail(fmt::format("took {:.1f}s", secs));
    o.detail = fmt::format("{} MPS files, {} variables, {:.1f}s", files, vars, secs);
    return o;
}

}  // namespace

int main() {
    Ledger ledger;
    int failed = 0;
    auto report = [&](const char* name, const std::function<Outcome()>& check) {
        Outcome o;
        try {
            o = check();
        } catch (const std::exception& e) {
            o.fail(fmt::format("exception: {}", e.what()));
        }
        fmt::print("{}  {:<28} {}{}\n", o.pass ? "PASS" : "FAIL", name, o.detail,
                   o.pass ? "" : fmt::format(" [{}]", o.first_failure));
        std::fflush(stdout);
        failed += !o.pass;
    };

    report("oracle-equivalence", [&] { return oracle_equivalence(ledger); });
    report("scenario-nesting", [&] { return scenario_nesting(ledger); });
    report("decomposition-conservation", [&] { return decomposition_conservation(ledger); });
    report("relaxation-bound", [&] { return relaxation_bound(ledger); });
    report("constraint-verification", [&] { return constraint_verification(ledger); });
    report("time-expansion-formulas", time_expansion);
    report("trip-ratio-identity", [&] { return ratio_identity(ledger); });
    report("allocation-conservation", [&] { return allocation_conservation(ledger); });
    report("determinism", determinism);
    report("desk-scale-export", desk_scale);
    return failed;
}
