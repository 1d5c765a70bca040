#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "ltl/network.hpp"

namespace ltl {

/// Cost and emission parameters. All money in dollars.
struct CostParams {
    double per_ton_mile_rate = 0.08;           ///< $/ton-mile, variable commodity cost
    double base_per_mile = 2.27;               ///< $/mile per truck
    double dedicated_premium_per_mile = 0.50;  ///< $/mile on arcs leaving the carrier's region
    double long_trip_surcharge = 150.0;        ///< $ per truck on an arc longer than the threshold
    int surcharge_threshold = 5;               ///< instances; strictly longer arcs pay the surcharge
    double emission_factor = 161.8;            ///< g CO2e per ton-mile
    double empty_truck_tare_tons = 15.0;       ///< used only for the informational empty-mile emission

    bool operator==(const CostParams&) const = default;
};

struct Commodity {
    CommodityId id = 0;
    HubId origin = 0;
    HubId destination = 0;
    int release = 0;
    int deadline = 0;
    double volume = 0.0;
    double weight_tons = 0.0;

    bool operator==(const Commodity&) const = default;
};

struct Carrier {
    CarrierId id = 0;
    std::string name;
    std::set<HubId> region;
    std::set<HubId> gateways;
    std::map<HubId, int> fleet_initial;
    std::map<HubId, int> fleet_final_min;

    bool in_region(HubId h) const { return region.contains(h); }
    int fleet_size() const;
    bool operator==(const Carrier&) const = default;
};

/**
 * @brief A full problem instance.
 *
 * Commodities must arrive by `horizon`; trucks may keep repositioning until
 * `horizon + winding_down`. Carriers and commodities are kept sorted by id.
 */
struct Instance {
    PhysicalNetwork network;
    int horizon = 0;
    int winding_down = 0;
    std::vector<Carrier> carriers;
    std::vector<Commodity> commodities;
    double v_max = 1.0;
    CostParams cost_params;

    int truck_horizon() const { return horizon + winding_down; }
    const Carrier& carrier(CarrierId id) const;
    const Commodity& commodity(CommodityId id) const;

    bool operator==(const Instance&) const = default;
};

/// Checks every instance invariant; throws ValidationError naming the offending entity.
void validate(Instance& instance);

Instance load_instance(const std::string& json_text);
Instance load_instance_file(const std::filesystem::path& path);
std::string serialize_instance(const Instance& instance);

CostParams load_cost_params(const std::string& json_text);
CostParams load_cost_params_file(const std::filesystem::path& path);
std::string serialize_cost_params(const CostParams& params);

/// The carrier whose region contains the hub, lowest id on ties.
CarrierId owning_carrier(const Instance& instance, HubId hub);

/// Assigns every commodity to the owner of its origin hub (lowest carrier id on ties).
std::map<CarrierId, std::set<CommodityId>> assign_commodities(const Instance& instance);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace ltl
