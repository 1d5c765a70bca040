#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace ltl {

using HubId = int;
using CarrierId = int;
using CommodityId = int;

struct GeoPoint {
    double lat = 0.0;  ///< degrees
    double lon = 0.0;  ///< degrees

    bool operator==(const GeoPoint&) const = default;
};

/// Great-circle distance in statute miles (haversine, mean Earth radius).
double great_circle_miles(const GeoPoint& a, const GeoPoint& b);

struct Hub {
    HubId id = 0;
    std::string name;
    GeoPoint position;
    std::vector<CarrierId> owner_carriers;  ///< sorted ascending
    bool is_gateway = false;

    bool operator==(const Hub&) const = default;
};

struct PhysicalArc {
    HubId from = 0;
    HubId to = 0;
    int transit_time = 1;  ///< planning instances (hours)
    double distance_miles = 0.0;

    bool operator==(const PhysicalArc&) const = default;
};

/// Rounds a fractional transit duration up to whole planning instances.
int transit_instances(double hours);

/**
 * @brief The physical hub graph: hubs plus directed arcs with transit times.
 *
 * Construction validates arc endpoints, rejects self loops, parallel arcs,
 * non-positive distances and transit times below one instance.
 */
class PhysicalNetwork {
public:
    PhysicalNetwork() = default;
    PhysicalNetwork(std::vector<Hub> hubs, std::vector<PhysicalArc> arcs);

    const std::vector<Hub>& hubs() const { return hubs_; }
    const std::vector<PhysicalArc>& arcs() const { return arcs_; }

    bool has_hub(HubId id) const { return index_.contains(id); }
    /// Position of a hub in hubs(); throws ValidationError for unknown ids.
    std::size_t hub_index(HubId id) const;
    const Hub& hub(HubId id) const { return hubs_[hub_index(id)]; }

    /// Index of the arc from -> to, if present.
    std::optional<std::size_t> find_arc(HubId from, HubId to) const;

    bool operator==(const PhysicalNetwork& o) const { return hubs_ == o.hubs_ && arcs_ == o.arcs_; }

private:
    std::vector<Hub> hubs_;
    std::vector<PhysicalArc> arcs_;
    std::unordered_map<HubId, std::size_t> index_;
    std::unordered_map<long long, std::size_t> arc_index_;
};

}  // namespace ltl
