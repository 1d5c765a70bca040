#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "ltl/model.hpp"
#include "ltl/trips.hpp"

namespace ltl {

/// Table-style KPI row for one carrier (or the scenario total).
struct KpiRow {
    CarrierId carrier = -1;  ///< -1 for the total row
    std::string name;
    double cost = 0.0;
    double total_hours = 0.0;
    int total_trips = 0;
    double avg_trip_hour = 0.0;
    double emission_metric_tons = 0.0;
    // informational, outside the five headline KPIs
    double empty_miles = 0.0;
    double empty_emission_metric_tons = 0.0;
};

struct KpiReport {
    ScenarioMode scenario = ScenarioMode::EndToEnd;
    std::vector<KpiRow> carriers;  ///< ascending carrier id
    KpiRow total;
    double objective = 0.0;  ///< sum of model objectives
    std::vector<CommodityId> commodity_ids;
};

/// Everything needed to compute KPIs for one solved model.
struct SolvedModel {
    const MipModel* model = nullptr;
    const MipSolution* solution = nullptr;
    const std::vector<VehicleItinerary>* vehicles = nullptr;
    const std::vector<TruckTrip>* trips = nullptr;
    const std::vector<CommodityPath>* paths = nullptr;
};

/// total_hours / total_trips, 0 when there are no trips.
double average_trip_hour(double total_hours, int total_trips);

/**
 * Splits a quantity across the owners of the loads by weight ratio. Shares
 * are rounded to 1e-6 with largest-remainder so they add up to the rounded
 * quantity. An empty or weightless load charges `truck_carrier` in full.
 */
std::map<CarrierId, double> allocate_shared(double quantity, const std::vector<double>& weights,
                                            const std::vector<CarrierId>& owners, CarrierId truck_carrier);

/// Carrier responsible for a commodity's costs: the owner of its origin hub.
CarrierId responsible_carrier(const Instance& instance, CommodityId k);

/**
 * Per-carrier cost (allocated variable and fixed cost), driving hours, trip
 * count, average trip hour and loaded ton-mile emissions for one scenario.
 */
KpiReport compute_kpis(const Instance& instance, ScenarioMode scenario, const std::vector<SolvedModel>& models,
                       const CostParams& params);

struct ComparisonRow {
    std::string kpi;
    std::string carrier;  ///< carrier name or "total"
    ScenarioMode base;
    ScenarioMode target;
    double base_value = 0.0;
    double value = 0.0;
    double abs_delta = 0.0;
    double pct_delta = 0.0;  ///< NaN when the base is zero and the value is not
};

struct Comparison {
    std::vector<ComparisonRow> rows;
    /// Collaborative objective exceeded the summed in-region relay objectives.
    bool nesting_anomaly = false;
};

/// Deltas for relay vs e2e, hyper vs e2e and hyper vs relay. Reports must be ordered e2e, relay, hyper.
Comparison compare_scenarios(const std::array<KpiReport, 3>& reports);

}  // namespace ltl
