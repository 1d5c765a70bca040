#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ltl/kpi.hpp"
#include "ltl/mip.hpp"
#include "ltl/model.hpp"
#include "ltl/trips.hpp"

namespace ltl {

/// One model of a scenario and everything derived from its solution.
struct ModelRun {
    MipModel model;
    MipSolution solution;
    std::vector<VehicleItinerary> vehicles;
    std::vector<TruckTrip> trips;
    std::vector<CommodityPath> paths;
};

enum class RunStatus { Optimal, Feasible, Infeasible, LimitExceeded };
std::string_view run_status_name(RunStatus s);

struct ScenarioRun {
    ScenarioConfig scenario;
    RunStatus status = RunStatus::Optimal;
    std::string failure;  ///< pre-check or solver message when not solved
    std::vector<ModelRun> models;
    std::optional<KpiReport> kpis;
};

/// Carrier scopes for a scenario: one per carrier when separate, otherwise one joint scope.
std::vector<std::set<CarrierId>> scenario_scopes(const Instance& instance, const ScenarioConfig& scenario);

/// Builds every model of the scenario (throws InfeasibleError on a failing pre-check).
std::vector<MipModel> build_scenario_models(const Instance& instance, const ScenarioConfig& scenario);

/**
 * Builds, solves, verifies and decomposes every model of the scenario, then
 * computes KPIs. Failures are recorded in the result rather than thrown.
 */
ScenarioRun run_scenario(const Instance& instance, const ScenarioConfig& scenario, const MipLimits& limits);

/// Maps solutions of other models over the same instance onto `target`'s variables by (entity, timed arc).
std::vector<double> transfer_solutions(const MipModel& target, const std::vector<const ModelRun*>& sources);

/// Truck count per moving arc and departure hour, summed over carriers and models.
struct TruckFlow {
    HubId from = 0;
    HubId to = 0;
    int hour = 0;
    int trucks = 0;
};
std::vector<TruckFlow> truck_flow(const ScenarioRun& run);

// CSV/JSON report writers. Headers are fixed; see README.
std::string kpis_csv(const KpiReport& report);
KpiReport parse_kpis_csv(const std::string& text, ScenarioMode scenario);
std::string trips_csv(const ScenarioRun& run);
std::string truckflow_csv(const ScenarioRun& run);
std::string comparison_csv(const Comparison& cmp);
std::string solution_json(const ScenarioRun& run);

}  // namespace ltl
