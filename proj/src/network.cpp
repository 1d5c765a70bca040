#include "ltl/network.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "ltl/error.hpp"

namespace ltl {

namespace {

constexpr double kEarthRadiusMiles = 3958.7613;

long long pair_key(HubId from, HubId to) {
    return (static_cast<long long>(from) << 32) ^ static_cast<unsigned int>(to);
}

}  // namespace

double great_circle_miles(const GeoPoint& a, const GeoPoint& b) {
    constexpr double deg = std::numbers::pi / 180.0;
    const double dlat = (b.lat - a.lat) * deg;
    const double dlon = (b.lon - a.lon) * deg;
    const double h = std::sin(dlat / 2) * std::sin(dlat / 2) +
                     std::cos(a.lat * deg) * std::cos(b.lat * deg) * std::sin(dlon / 2) * std::sin(dlon / 2);
    return 2.0 * kEarthRadiusMiles * std::asin(std::min(1.0, std::sqrt(h)));
}

int transit_instances(double hours) {
    // tolerate representation noise such as 3.0000000001
    return static_cast<int>(std::ceil(hours - 1e-9));
}

PhysicalNetwork::PhysicalNetwork(std::vector<Hub> hubs, std::vector<PhysicalArc> arcs)
    : hubs_(std::move(hubs)), arcs_(std::move(arcs)) {
    for (std::size_t i = 0; i < hubs_.size(); ++i) {
        if (!index_.emplace(hubs_[i].id, i).second)
            throw ValidationError(fmt::format("hub {}: duplicate hub id", hubs_[i].id));
    }
    for (std::size_t i = 0; i < arcs_.size(); ++i) {
        const auto& a = arcs_[i];
        if (!has_hub(a.from) || !has_hub(a.to))
            throw ValidationError(fmt::format("arc {}->{}: dangling hub reference", a.from, a.to));
        if (a.from == a.to) throw ValidationError(fmt::format("arc {}->{}: self loop", a.from, a.to));
        if (a.transit_time < 1)
            throw ValidationError(fmt::format("arc {}->{}: transit_time must be >= 1", a.from, a.to));
        if (!(a.distance_miles > 0.0))
            throw ValidationError(fmt::format("arc {}->{}: distance_miles must be > 0", a.from, a.to));
        if (!arc_index_.emplace(pair_key(a.from, a.to), i).second)
            throw ValidationError(fmt::format("arc {}->{}: parallel arc", a.from, a.to));
    }
}

std::size_t PhysicalNetwork::hub_index(HubId id) const {
    auto it = index_.find(id);
    if (it == index_.end()) throw ValidationError(fmt::format("unknown hub id {}", id));
    return it->second;
}

std::optional<std::size_t> PhysicalNetwork::find_arc(HubId from, HubId to) const {
    auto it = arc_index_.find(pair_key(from, to));
    if (it == arc_index_.end()) return std::nullopt;
    return it->second;
}

}  // namespace ltl
