#pragma once

// Shared fixtures for the unit and acceptance tests.

#include <cstdint>
#include <random>
#include <vector>

#include "ltl/instance.hpp"
#include "ltl/model.hpp"

namespace ltl::testing {

class Draw {
public:
    explicit Draw(std::uint64_t seed) : e_(seed) {}
    double unit() { return static_cast<double>(e_() >> 11) * 0x1.0p-53; }
    int integer(int lo, int hi) { return lo + static_cast<int>(e_() % static_cast<std::uint64_t>(hi - lo + 1)); }
    bool chance(double p) { return unit() < p; }

private:
    std::mt19937_64 e_;
};

inline Hub hub(HubId id, double lat, double lon) {
    Hub h;
    h.id = id;
    h.name = std::string(1, static_cast<char>('A' + id));
    h.position = {lat, lon};
    return h;
}

inline Carrier carrier(CarrierId id, std::set<HubId> region, std::map<HubId, int> fleet, std::map<HubId, int> final_min,
                       std::set<HubId> gateways = {}) {
    Carrier c;
    c.id = id;
    c.name = std::string(1, static_cast<char>('A' + id));
    c.region = std::move(region);
    c.gateways = std::move(gateways);
    c.fleet_initial = std::move(fleet);
    c.fleet_final_min = std::move(final_min);
    return c;
}

inline Commodity commodity(CommodityId id, HubId o, HubId d, int r, int l, double volume, double weight) {
    return Commodity{id, o, d, r, l, volume, weight};
}

/**
 * Hubs A=0, B=1 with a 100-mile arc each way (one instance), T=2, one carrier
 * owning both with a truck based at A, commodity A->B released at 0 due at 2.
 */
inline Instance two_hub() {
    Instance inst;
    inst.network = PhysicalNetwork({hub(0, 40.0, -80.0), hub(1, 40.0, -78.1)},
                                   {{0, 1, 1, 100.0}, {1, 0, 1, 100.0}});
    inst.horizon = 2;
    inst.winding_down = 0;
    inst.v_max = 20.0;
    inst.carriers = {carrier(0, {0, 1}, {{0, 1}}, {{0, 1}})};
    inst.commodities = {commodity(0, 0, 1, 0, 2, 10.0, 2.0)};
    validate(inst);
    return inst;
}

/**
 * Four hubs on a line, 0-1 owned by carrier 0 and 2-3 by carrier 1, with
 * gateways 1 and 2. Besides the chain 0-1-2-3, the network has the arcs 1<->3
 * and 2<->0, so every dedicated long-haul arc the in-region relay scenario
 * needs is a physical gateway arc and the collaborative permissions contain
 * the separate ones. Arc lengths are great-circle distances.
 */
inline Instance nesting_line(std::uint64_t seed) {
    Draw d(seed);
    std::vector<Hub> hubs;
    for (int i = 0; i < 4; ++i) hubs.push_back(hub(i, 40.0, -80.0 + 0.5 * i + 0.1 * d.unit()));
    std::vector<PhysicalArc> arcs;
    auto link = [&](HubId a, HubId b) {
        const double miles = great_circle_miles(hubs[a].position, hubs[b].position);
        const int tau = std::max(1, transit_instances(miles / 50.0));
        arcs.push_back({a, b, tau, miles});
        arcs.push_back({b, a, tau, miles});
    };
    link(0, 1);
    link(1, 2);
    link(2, 3);
    link(1, 3);
    link(0, 2);

    Instance inst;
    inst.network = PhysicalNetwork(hubs, arcs);
    inst.horizon = 6;
    inst.winding_down = 2;
    inst.v_max = 20.0;
    inst.carriers = {carrier(0, {0, 1}, {{0, 1}, {1, 1}}, {{0, 1}, {1, 1}}, {1}),
                     carrier(1, {2, 3}, {{2, 1}, {3, 1}}, {{2, 1}, {3, 1}}, {2})};
    const int count = d.integer(1, 2);
    for (int k = 0; k < count; ++k) {
        const HubId o = d.integer(0, 3);
        HubId dst = d.integer(0, 2);
        if (dst >= o) ++dst;
        const int r = d.integer(0, 1);
        inst.commodities.push_back(commodity(k, o, dst, r, inst.horizon, 2.0 * d.integer(2, 8), d.integer(1, 10)));
    }
    validate(inst);
    return inst;
}

/// Random instance with at most 3 hubs, T <= 4, 2 commodities and 2 carriers.
inline Instance tiny_instance(std::uint64_t seed) {
    Draw d(seed);
    const int n = d.integer(2, 3);
    std::vector<Hub> hubs;
    for (int i = 0; i < n; ++i) hubs.push_back(hub(i, 40.0 + 0.2 * d.unit(), -80.0 + 0.6 * i));
    std::vector<PhysicalArc> arcs;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            if (a != b && d.chance(0.7)) arcs.push_back({a, b, d.integer(1, 2), 20.0 + 10.0 * d.integer(0, 10)});
    if (arcs.empty()) arcs.push_back({0, 1, 1, 50.0});

    Instance inst;
    inst.network = PhysicalNetwork(hubs, arcs);
    inst.horizon = d.integer(2, 4);
    inst.winding_down = d.integer(0, 1);
    inst.v_max = 10.0;

    const int carriers = d.integer(1, 2);
    const int split = carriers == 1 ? n : d.integer(1, n - 1);
    for (int c = 0; c < carriers; ++c) {
        std::set<HubId> region;
        for (int h = 0; h < n; ++h)
            if ((h < split) == (c == 0)) region.insert(h);
        if (c == 1 && d.chance(0.25)) region.insert(0);  // overlapping regions
        std::set<HubId> gateways;
        for (HubId h : region)
            if (d.chance(0.5)) gateways.insert(h);
        std::map<HubId, int> fleet;
        for (HubId h : region)
            if (d.chance(0.6)) fleet[h] = 1;
        if (fleet.empty()) fleet[*region.begin()] = 1;
        std::map<HubId, int> final_min;
        if (d.chance(0.5)) final_min = fleet;
        inst.carriers.push_back(carrier(c, region, fleet, final_min, gateways));
    }

    const int count = d.integer(0, 2);
    for (int k = 0; k < count; ++k) {
        const HubId o = d.integer(0, n - 1);
        HubId dst = d.integer(0, n - 2);
        if (dst >= o) ++dst;
        const int r = d.integer(0, inst.horizon - 1);
        const int l = d.integer(r + 1, inst.horizon);
        inst.commodities.push_back(commodity(k, o, dst, r, l, d.integer(1, 10), d.integer(1, 5)));
    }
    validate(inst);
    return inst;
}

inline ScenarioConfig scenario(ScenarioMode mode) {
    ScenarioConfig sc;
    sc.mode = mode;
    return sc;
}

inline constexpr ScenarioMode kModes[] = {ScenarioMode::EndToEnd, ScenarioMode::InRegionRelay,
                                          ScenarioMode::HyperconnectedRelay};

}  // namespace ltl::testing
