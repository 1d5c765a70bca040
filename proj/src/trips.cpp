#include "ltl/trips.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "ltl/error.hpp"

namespace ltl {

namespace {

constexpr double kCapTol = 1e-9;

bool pack_exact(const std::vector<double>& sizes, const std::vector<std::size_t>& order, std::size_t pos,
                std::vector<double>& room, std::vector<std::size_t>& assign, long& budget) {
    if (pos == order.size()) return true;
    if (--budget < 0) return false;
    const std::size_t item = order[pos];
    for (std::size_t v = 0; v < room.size(); ++v) {
        if (room[v] + kCapTol < sizes[item]) continue;
        // identical remaining capacity means an equivalent branch was already tried
        bool seen = false;
        for (std::size_t u = 0; u < v && !seen; ++u) seen = room[u] == room[v];
        if (seen) continue;
        room[v] -= sizes[item];
        assign[item] = v;
        if (pack_exact(sizes, order, pos + 1, room, assign, budget)) return true;
        room[v] += sizes[item];
    }
    return false;
}

/// Vehicle slot for each item; second is false when no packing within capacity was found.
std::pair<std::vector<std::size_t>, bool> pack(const std::vector<double>& sizes, std::size_t vehicles, double cap) {
    std::vector<std::size_t> assign(sizes.size(), 0);
    std::vector<double> room(vehicles, cap);
    bool ok = true;
    for (std::size_t i = 0; i < sizes.size() && ok; ++i) {
        ok = false;
        for (std::size_t v = 0; v < vehicles; ++v) {
            if (room[v] + kCapTol >= sizes[i]) {
                room[v] -= sizes[i];
                assign[i] = v;
                ok = true;
                break;
            }
        }
    }
    if (ok) return {assign, true};

    std::vector<std::size_t> order(sizes.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return sizes[a] > sizes[b]; });
    room.assign(vehicles, cap);
    long budget = 1'000'000;
    if (pack_exact(sizes, order, 0, room, assign, budget)) return {assign, true};

    // No packing within capacity: least-loaded placement, flagged by the caller.
    std::vector<double> load(vehicles, 0.0);
    for (auto i : order) {
        const auto v = static_cast<std::size_t>(std::min_element(load.begin(), load.end()) - load.begin());
        load[v] += sizes[i];
        assign[i] = v;
    }
    return {assign, false};
}

}  // namespace

std::vector<VehicleItinerary> decompose_vehicles(const MipSolution& solution, const MipModel& model) {
    if (!solution.has_incumbent()) throw ValidationError("decompose_vehicles: solution has no incumbent");
    if (const auto bad = verify_solution(model, solution.values); !bad.empty())
        throw ValidationError(fmt::format("decompose_vehicles: solution violates {} (activity {}, bound {})",
                                          bad.front().what, bad.front().activity, bad.front().bound));

    const auto& g = model.graph;
    const int H = g.horizon();
    std::vector<VehicleItinerary> out;

    for (CarrierId sid : model.carriers) {
        const auto& s = model.instance.carrier(sid);
        std::vector<long> remaining(g.arcs().size(), 0);
        for (ArcIndex a = 0; a < g.arcs().size(); ++a)
            if (auto v = model.find(VarKind::Y, sid, a)) remaining[a] = std::lround(solution.values[*v]);

        int vehicle = 0;
        for (const auto& [hub, count] : s.fleet_initial) {
            for (int c = 0; c < count; ++c) {
                VehicleItinerary it;
                it.carrier = sid;
                it.vehicle = vehicle++;
                it.domicile = hub;
                NodeIndex n = g.node_index(hub, 0);
                while (g.nodes()[n].t < H) {
                    bool moved = false;
                    for (auto a : g.out_arcs(n)) {
                        if (remaining[a] > 0) {
                            --remaining[a];
                            it.arcs.push_back(a);
                            n = g.arcs()[a].head;
                            moved = true;
                            break;
                        }
                    }
                    if (!moved)
                        throw InternalError(fmt::format("decompose_vehicles: carrier {} truck flow stops at ({}, {})",
                                                        sid, g.nodes()[n].hub, g.nodes()[n].t));
                }
                out.push_back(std::move(it));
            }
        }
        if (std::any_of(remaining.begin(), remaining.end(), [](long r) { return r != 0; }))
            throw InternalError(fmt::format("decompose_vehicles: carrier {} has truck flow not covered by its fleet", sid));
    }

    // Load assignment per moving arc.
    std::vector<std::vector<std::size_t>> users(g.arcs().size());
    for (std::size_t v = 0; v < out.size(); ++v)
        for (auto a : out[v].arcs)
            if (g.arcs()[a].is_move()) users[a].push_back(v);

    const bool weighted = model.scenario.capacity_form == CapacityForm::VolumeWeighted;
    for (ArcIndex a = 0; a < g.arcs().size(); ++a) {
        if (!g.arcs()[a].is_move()) continue;
        std::vector<CommodityId> ks;
        std::vector<double> sizes;
        for (CommodityId k : model.commodities) {
            auto x = model.find(VarKind::X, k, a);
            if (x && std::lround(solution.values[*x]) == 1) {
                ks.push_back(k);
                sizes.push_back(weighted ? model.instance.commodity(k).volume : 1.0);
            }
        }
        if (ks.empty()) continue;
        if (users[a].empty())
            throw InternalError(fmt::format("decompose_vehicles: commodity flow on arc {} without a truck", a));
        const auto [assign, ok] = pack(sizes, users[a].size(), model.instance.v_max);
        for (std::size_t i = 0; i < ks.size(); ++i) out[users[a][assign[i]]].loads[a].push_back(ks[i]);
        if (!ok)
            for (auto v : users[a]) out[v].overloaded.push_back(a);
    }
    return out;
}

std::vector<TruckTrip> extract_trips(const std::vector<VehicleItinerary>& itineraries, const MipModel& model) {
    const auto& g = model.graph;
    std::vector<TruckTrip> out;
    for (std::size_t idx = 0; idx < itineraries.size(); ++idx) {
        const auto& it = itineraries[idx];
        const auto& s = model.instance.carrier(it.carrier);
        TruckTrip cur;
        auto close = [&](bool round) {
            if (cur.moves.empty()) return;
            cur.carrier = it.carrier;
            cur.vehicle = it.vehicle;
            cur.itinerary = idx;
            cur.origin = g.arcs()[cur.moves.front()].tail_hub;
            cur.is_round_trip = round;
            cur.wall_span = g.arcs()[cur.moves.back()].head_t - g.arcs()[cur.moves.front()].tail_t;
            for (auto a : cur.moves) {
                const auto& arc = g.arcs()[a];
                cur.driving_hours += arc.transit;
                cur.crosses_region |= !s.in_region(arc.tail_hub) || !s.in_region(arc.head_hub);
            }
            out.push_back(std::move(cur));
            cur = TruckTrip{};
        };
        for (auto a : it.arcs) {
            const auto& arc = g.arcs()[a];
            if (!arc.is_move()) continue;
            cur.moves.push_back(a);
            if (arc.head_hub == it.domicile) close(true);
        }
        close(false);
    }
    return out;
}

std::vector<CommodityPath> commodity_paths(const MipSolution& solution, const MipModel& model,
                                           const std::vector<VehicleItinerary>& itineraries) {
    if (!solution.has_incumbent()) throw ValidationError("commodity_paths: solution has no incumbent");
    const auto& g = model.graph;

    std::map<std::pair<CommodityId, ArcIndex>, CarrierId> mover;
    for (const auto& it : itineraries)
        for (const auto& [a, ks] : it.loads)
            for (CommodityId k : ks) mover.try_emplace({k, a}, it.carrier);

    std::vector<CommodityPath> out;
    for (CommodityId kid : model.commodities) {
        const auto& k = model.instance.commodity(kid);
        CommodityPath p;
        p.commodity = kid;
        std::size_t used = 0;
        for (ArcIndex a = 0; a < g.arcs().size(); ++a)
            if (auto x = model.find(VarKind::X, kid, a); x && std::lround(solution.values[*x]) == 1) ++used;

        NodeIndex n = g.node_index(k.origin, k.release);
        const NodeIndex sink = g.node_index(k.destination, k.deadline);
        while (n != sink) {
            std::optional<ArcIndex> next;
            for (auto a : g.out_arcs(n)) {
                if (auto x = model.find(VarKind::X, kid, a); x && std::lround(solution.values[*x]) == 1) {
                    if (next) throw InternalError(fmt::format("commodity {}: flow splits at node {}", kid, n));
                    next = a;
                }
            }
            if (!next) throw InternalError(fmt::format("commodity {}: flow stops before its destination", kid));
            p.arcs.push_back(*next);
            n = g.arcs()[*next].head;
        }
        if (p.arcs.size() != used) throw InternalError(fmt::format("commodity {}: flow is not a single walk", kid));

        for (auto a : p.arcs) {
            if (!g.arcs()[a].is_move()) continue;
            auto it = mover.find({kid, a});
            if (it == mover.end()) throw InternalError(fmt::format("commodity {}: leg {} has no truck", kid, a));
            if (!p.leg_carriers.empty() && p.leg_carriers.back() != it->second)
                p.handoff_hubs.push_back(g.arcs()[a].tail_hub);
            p.leg_carriers.push_back(it->second);
        }
        out.push_back(std::move(p));
    }
    return out;
}

}  // namespace ltl
