#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "ltl/instance.hpp"
#include "ltl/time_expansion.hpp"

namespace ltl {

enum class ScenarioMode { EndToEnd, InRegionRelay, HyperconnectedRelay };

/// Capacity coupling form: volume-weighted (default) or the unit count form.
enum class CapacityForm { VolumeWeighted, LiteralUnit };

struct ScenarioConfig {
    ScenarioMode mode = ScenarioMode::HyperconnectedRelay;
    int max_relay_transit = 5;
    bool gateway_restriction = true;
    CapacityForm capacity_form = CapacityForm::VolumeWeighted;
    double long_haul_speed_mph = 50.0;

    bool separate() const { return mode != ScenarioMode::HyperconnectedRelay; }
};

/// Short CLI/report key: "e2e", "relay" or "hyper".
std::string_view scenario_key(ScenarioMode mode);
ScenarioMode parse_scenario_key(std::string_view key);

/// A physical arc a carrier may drive, possibly synthesized for this scenario only.
struct PermittedArc {
    HubId from = 0;
    HubId to = 0;
    int transit_time = 1;
    double distance_miles = 0.0;
    bool synthesized = false;

    bool operator==(const PermittedArc&) const = default;
};

/// Scenario rule applied to one carrier: the arcs its trucks may use and the commodities it may move.
struct ArcPermission {
    CarrierId carrier = 0;
    std::vector<PermittedArc> arcs;  ///< sorted by (from, to), unique
    std::vector<CommodityId> commodities;

    bool allows(HubId from, HubId to) const;
};

ArcPermission allowed_arcs(const Instance& instance, const ScenarioConfig& scenario, const Carrier& carrier);

/// The network arc between two hubs if present, otherwise a synthesized great-circle long-haul arc.
PermittedArc direct_arc(const Instance& instance, const ScenarioConfig& scenario, HubId from, HubId to);

/// In-region hub closest to `target` by great-circle distance; lowest id on ties.
HubId nearest_region_hub(const Instance& instance, const Carrier& carrier, HubId target);

/// Variable commodity cost on a moving arc: rate x weight x distance.
double variable_cost(const CostParams& c, const Commodity& k, const TimedArc& a);

/// Per-truck fixed cost on a moving arc for the given carrier.
double fixed_cost(const CostParams& c, const Carrier& s, const TimedArc& a);

enum class VarKind { X, Y };
enum class RowTag { Eq2, Eq3, Eq4, Eq5, Eq6 };
enum class Sense { Eq, Le, Ge };

std::string_view row_tag_name(RowTag tag);

struct Variable {
    VarKind kind = VarKind::X;
    int entity = 0;  ///< commodity id for X, carrier id for Y
    ArcIndex arc = 0;
    double lower = 0.0;
    double upper = 1.0;
    double cost = 0.0;
    std::string name;
};

struct Row {
    RowTag tag = RowTag::Eq2;
    Sense sense = Sense::Eq;
    double rhs = 0.0;
    std::vector<std::pair<std::size_t, double>> coefs;  ///< (variable index, coefficient), ascending index
    std::string name;
};

/**
 * @brief The assembled commodity-routing / truck-allocation MILP.
 *
 * All variables are integral: X binary, Y integer in [0, fleet size].
 * Variables are ordered X by (commodity, arc) then Y by (carrier, arc).
 */
struct MipModel {
    std::string name;
    Instance instance;
    ScenarioConfig scenario;
    std::vector<CarrierId> carriers;       ///< carriers in scope, ascending
    std::vector<CommodityId> commodities;  ///< commodities in scope, ascending
    std::vector<ArcPermission> permissions;
    TimeExpandedGraph graph;  ///< expanded to instance.truck_horizon()
    std::vector<Variable> variables;
    std::vector<Row> rows;

    std::optional<std::size_t> find(VarKind kind, int entity, ArcIndex arc) const;
    std::size_t num_x() const { return num_x_; }

    // filled by build_model
    std::map<std::tuple<int, int, ArcIndex>, std::size_t> index_;
    std::size_t num_x_ = 0;
};

/**
 * Builds the model for the carriers in scope. Separate scenarios route each
 * in-scope carrier's assigned commodities with its own trucks only; the
 * collaborative scenario routes every commodity on the pooled fleet.
 * Throws InfeasibleError when a commodity has no timed path.
 */
MipModel build_model(const Instance& instance, const ScenarioConfig& scenario, const std::set<CarrierId>& carriers_in_scope);

/// Model name used for files: "<scenario>" or "<scenario>_<carrier>".
std::string model_name(const ScenarioConfig& scenario, std::optional<CarrierId> carrier);

/// Matching key for an arc across models that share an instance.
struct ArcKey {
    ArcKind kind;
    HubId tail_hub;
    int tail_t;
    HubId head_hub;
    auto operator<=>(const ArcKey&) const = default;
};
ArcKey arc_key(const TimedArc& a);

}  // namespace ltl
