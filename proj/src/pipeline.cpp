#include "ltl/pipeline.hpp"

#include <cmath>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "ltl/error.hpp"

namespace ltl {

std::string_view run_status_name(RunStatus s) {
    switch (s) {
        case RunStatus::Optimal: return "Optimal";
        case RunStatus::Feasible: return "Feasible";
        case RunStatus::Infeasible: return "Infeasible";
        case RunStatus::LimitExceeded: return "LimitExceeded";
    }
    return "?";
}

std::vector<std::set<CarrierId>> scenario_scopes(const Instance& instance, const ScenarioConfig& scenario) {
    std::vector<std::set<CarrierId>> scopes;
    if (scenario.separate()) {
        for (const auto& c : instance.carriers) scopes.push_back({c.id});
    } else {
        std::set<CarrierId> all;
        for (const auto& c : instance.carriers) all.insert(c.id);
        scopes.push_back(std::move(all));
    }
    return scopes;
}

std::vector<MipModel> build_scenario_models(const Instance& instance, const ScenarioConfig& scenario) {
    std::vector<MipModel> out;
    for (const auto& scope : scenario_scopes(instance, scenario)) out.push_back(build_model(instance, scenario, scope));
    return out;
}

ScenarioRun run_scenario(const Instance& instance, const ScenarioConfig& scenario, const MipLimits& limits) {
    ScenarioRun run;
    run.scenario = scenario;
    std::vector<MipModel> models;
    try {
        models = build_scenario_models(instance, scenario);
    } catch (const InfeasibleError& e) {
        run.status = RunStatus::Infeasible;
        run.failure = e.what();
        return run;
    }

    auto worsen = [&](RunStatus s) {
        if (static_cast<int>(s) > static_cast<int>(run.status)) run.status = s;
    };
    for (auto& m : models) {
        ModelRun mr;
        mr.model = std::move(m);
        mr.solution = solve_mip(mr.model, limits);
        switch (mr.solution.status) {
            case MipStatus::Optimal: break;
            case MipStatus::Feasible: worsen(RunStatus::Feasible); break;
            case MipStatus::Infeasible:
                worsen(RunStatus::Infeasible);
                if (run.failure.empty()) run.failure = fmt::format("model {}: infeasible", mr.model.name);
                break;
            case MipStatus::BoundExceeded:
                worsen(RunStatus::LimitExceeded);
                if (run.failure.empty())
                    run.failure = fmt::format("model {}: node/time limit reached without an incumbent", mr.model.name);
                break;
        }
        if (mr.solution.has_incumbent()) {
            if (const auto bad = verify_solution(mr.model, mr.solution.values); !bad.empty())
                throw InternalError(fmt::format("model {}: solver returned a solution violating {}", mr.model.name,
                                                bad.front().what));
            mr.vehicles = decompose_vehicles(mr.solution, mr.model);
            mr.trips = extract_trips(mr.vehicles, mr.model);
            mr.paths = commodity_paths(mr.solution, mr.model, mr.vehicles);
        }
        run.models.push_back(std::move(mr));
    }

    if (run.status == RunStatus::Optimal || run.status == RunStatus::Feasible) {
        std::vector<SolvedModel> solved;
        for (const auto& mr : run.models)
            solved.push_back({&mr.model, &mr.solution, &mr.vehicles, &mr.trips, &mr.paths});
        run.kpis = compute_kpis(instance, scenario.mode, solved, instance.cost_params);
    }
    return run;
}

std::vector<double> transfer_solutions(const MipModel& target, const std::vector<const ModelRun*>& sources) {
    std::map<std::tuple<int, int, ArcKey>, std::size_t> index;
    for (std::size_t j = 0; j < target.variables.size(); ++j) {
        const auto& v = target.variables[j];
        index[{static_cast<int>(v.kind), v.entity, arc_key(target.graph.arcs()[v.arc])}] = j;
    }
    std::vector<double> x(target.variables.size(), 0.0);
    for (const ModelRun* src : sources) {
        if (!src->solution.has_incumbent()) throw ValidationError("transfer_solutions: source has no incumbent");
        const auto& m = src->model;
        for (std::size_t j = 0; j < m.variables.size(); ++j) {
            const double val = src->solution.values[j];
            if (val == 0.0) continue;
            const auto& v = m.variables[j];
            auto it = index.find({static_cast<int>(v.kind), v.entity, arc_key(m.graph.arcs()[v.arc])});
            if (it == index.end())
                throw ValidationError(fmt::format("transfer_solutions: {} from {} has no counterpart in {}", v.name,
                                                  m.name, target.name));
            x[it->second] += val;
        }
    }
    return x;
}

std::vector<TruckFlow> truck_flow(const ScenarioRun& run) {
    std::map<std::tuple<int, HubId, HubId>, int> flow;
    for (const auto& mr : run.models) {
        if (!mr.solution.has_incumbent()) continue;
        const auto& m = mr.model;
        for (std::size_t j = m.num_x(); j < m.variables.size(); ++j) {
            const auto& a = m.graph.arcs()[m.variables[j].arc];
            const long y = std::lround(mr.solution.values[j]);
            if (a.is_move() && y > 0) flow[{a.tail_t, a.tail_hub, a.head_hub}] += static_cast<int>(y);
        }
    }
    std::vector<TruckFlow> out;
    for (const auto& [k, n] : flow) out.push_back({std::get<1>(k), std::get<2>(k), std::get<0>(k), n});
    return out;
}

namespace {

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string r = "\"";
    for (char c : s) {
        if (c == '"') r += '"';
        r += c;
    }
    return r + "\"";
}

std::vector<std::string> csv_split(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(std::move(cur));
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(std::move(cur));
    return out;
}

constexpr const char* kKpiHeader =
    "scenario,carrier_id,carrier,cost,total_hours,total_trips,avg_trip_hour,emission_metric_tons,empty_miles,"
    "empty_emission_metric_tons";

void kpi_line(std::string& out, ScenarioMode sc, const KpiRow& r) {
    fmt::format_to(std::back_inserter(out), "{},{},{},{:.2f},{:.2f},{},{:.2f},{:.6f},{:.2f},{:.6f}\n",
                   scenario_key(sc), r.carrier < 0 ? std::string("total") : std::to_string(r.carrier),
                   csv_escape(r.name), r.cost, r.total_hours, r.total_trips, r.avg_trip_hour, r.emission_metric_tons,
                   r.empty_miles, r.empty_emission_metric_tons);
}

}  // namespace

std::string kpis_csv(const KpiReport& report) {
    std::string out = std::string(kKpiHeader) + "\n";
    for (const auto& r : report.carriers) kpi_line(out, report.scenario, r);
    kpi_line(out, report.scenario, report.total);
    return out;
}

KpiReport parse_kpis_csv(const std::string& text, ScenarioMode scenario) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != kKpiHeader) throw ValidationError("kpis csv: unexpected header");
    KpiReport rep;
    rep.scenario = scenario;
    bool have_total = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = csv_split(line);
        if (f.size() != 10) throw ValidationError(fmt::format("kpis csv: expected 10 fields in '{}'", line));
        try {
            if (parse_scenario_key(f[0]) != scenario) throw ValidationError("kpis csv: scenario mismatch");
            KpiRow r;
            r.carrier = f[1] == "total" ? -1 : std::stoi(f[1]);
            r.name = f[2];
            r.cost = std::stod(f[3]);
            r.total_hours = std::stod(f[4]);
            r.total_trips = std::stoi(f[5]);
            r.avg_trip_hour = std::stod(f[6]);
            r.emission_metric_tons = std::stod(f[7]);
            r.empty_miles = std::stod(f[8]);
            r.empty_emission_metric_tons = std::stod(f[9]);
            if (r.carrier < 0) {
                rep.total = r;
                have_total = true;
            } else {
                rep.carriers.push_back(r);
            }
        } catch (const std::logic_error&) {
            throw ValidationError(fmt::format("kpis csv: malformed number in '{}'", line));
        }
    }
    if (!have_total) throw ValidationError("kpis csv: missing total row");
    return rep;
}

std::string trips_csv(const ScenarioRun& run) {
    std::string out =
        "scenario,carrier_id,vehicle,trip,origin,route,departure,arrival,driving_hours,wall_span,round_trip,"
        "crosses_region,exceeds_round_trip_limit,loaded_legs\n";
    for (const auto& mr : run.models) {
        const auto& g = mr.model.graph;
        std::map<std::pair<CarrierId, int>, int> trip_no;
        for (const auto& t : mr.trips) {
            std::string route = std::to_string(g.arcs()[t.moves.front()].tail_hub);
            int loaded = 0;
            for (auto a : t.moves) {
                route += ">" + std::to_string(g.arcs()[a].head_hub);
                loaded += mr.vehicles[t.itinerary].loads.contains(a);
            }
            fmt::format_to(std::back_inserter(out), "{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
                           scenario_key(run.scenario.mode), t.carrier, t.vehicle, trip_no[{t.carrier, t.vehicle}]++,
                           t.origin, route, g.arcs()[t.moves.front()].tail_t, g.arcs()[t.moves.back()].head_t,
                           t.driving_hours, t.wall_span, t.is_round_trip ? 1 : 0, t.crosses_region ? 1 : 0,
                           t.is_round_trip && t.driving_hours > kRoundTripHourLimit ? 1 : 0, loaded);
        }
    }
    return out;
}

std::string truckflow_csv(const ScenarioRun& run) {
    std::string out = "scenario,from,to,hour,trucks\n";
    for (const auto& f : truck_flow(run))
        fmt::format_to(std::back_inserter(out), "{},{},{},{},{}\n", scenario_key(run.scenario.mode), f.from, f.to,
                       f.hour, f.trucks);
    return out;
}

std::string comparison_csv(const Comparison& cmp) {
    std::string out = "kpi,carrier,base,scenario,base_value,value,abs_delta,pct_delta\n";
    for (const auto& r : cmp.rows) {
        const std::string pct = std::isnan(r.pct_delta) ? std::string("") : fmt::format("{:.2f}", r.pct_delta);
        fmt::format_to(std::back_inserter(out), "{},{},{},{},{:.2f},{:.2f},{:.2f},{}\n", r.kpi, csv_escape(r.carrier),
                       scenario_key(r.base), scenario_key(r.target), r.base_value, r.value, r.abs_delta, pct);
    }
    fmt::format_to(std::back_inserter(out), "nesting_anomaly,total,relay,hyper,,,,{}\n", cmp.nesting_anomaly ? 1 : 0);
    return out;
}

std::string solution_json(const ScenarioRun& run) {
    using nlohmann::ordered_json;
    ordered_json doc;
    doc["scenario"] = std::string(scenario_key(run.scenario.mode));
    doc["status"] = std::string(run_status_name(run.status));
    doc["failure"] = run.failure;
    double objective = 0.0;
    std::set<CommodityId> ids;
    ordered_json models = ordered_json::array();
    for (const auto& mr : run.models) {
        ordered_json m;
        m["name"] = mr.model.name;
        m["carriers"] = mr.model.carriers;
        m["status"] = std::string(mip_status_name(mr.solution.status));
        m["objective"] = mr.solution.objective;
        m["best_bound"] = std::isfinite(mr.solution.best_bound) ? ordered_json(mr.solution.best_bound) : ordered_json();
        m["node_count"] = mr.solution.node_count;
        ordered_json values = ordered_json::object();
        for (std::size_t j = 0; j < mr.solution.values.size(); ++j)
            if (mr.solution.values[j] != 0.0) values[mr.model.variables[j].name] = mr.solution.values[j];
        m["values"] = std::move(values);
        models.push_back(std::move(m));
        objective += mr.solution.objective;
        ids.insert(mr.model.commodities.begin(), mr.model.commodities.end());
    }
    doc["objective"] = objective;
    doc["commodities"] = ids;
    doc["models"] = std::move(models);
    return doc.dump(2) + "\n";
}

}  // namespace ltl
