#include "ltl/model.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <tuple>

#include <fmt/format.h>

#include "ltl/error.hpp"

namespace ltl {

std::string_view scenario_key(ScenarioMode mode) {
    switch (mode) {
        case ScenarioMode::EndToEnd: return "e2e";
        case ScenarioMode::InRegionRelay: return "relay";
        case ScenarioMode::HyperconnectedRelay: return "hyper";
    }
    return "?";
}

ScenarioMode parse_scenario_key(std::string_view key) {
    if (key == "e2e") return ScenarioMode::EndToEnd;
    if (key == "relay") return ScenarioMode::InRegionRelay;
    if (key == "hyper") return ScenarioMode::HyperconnectedRelay;
    throw ValidationError(fmt::format("unknown scenario '{}'", key));
}

std::string_view row_tag_name(RowTag tag) {
    switch (tag) {
        case RowTag::Eq2: return "EQ2";
        case RowTag::Eq3: return "EQ3";
        case RowTag::Eq4: return "EQ4";
        case RowTag::Eq5: return "EQ5";
        case RowTag::Eq6: return "EQ6";
    }
    return "?";
}

bool ArcPermission::allows(HubId from, HubId to) const {
    auto it = std::lower_bound(arcs.begin(), arcs.end(), std::pair{from, to},
                               [](const PermittedArc& a, const std::pair<HubId, HubId>& k) {
                                   return std::pair{a.from, a.to} < k;
                               });
    return it != arcs.end() && it->from == from && it->to == to;
}

ArcKey arc_key(const TimedArc& a) { return {a.kind, a.tail_hub, a.tail_t, a.head_hub}; }

PermittedArc direct_arc(const Instance& inst, const ScenarioConfig& sc, HubId from, HubId to) {
    const auto& net = inst.network;
    if (auto p = net.find_arc(from, to)) {
        const auto& a = net.arcs()[*p];
        return {from, to, a.transit_time, a.distance_miles, false};
    }
    const double d = great_circle_miles(net.hub(from).position, net.hub(to).position);
    if (!(d > 0.0))
        throw ValidationError(fmt::format("cannot synthesize direct arc {}->{}: hubs share a position", from, to));
    if (!(sc.long_haul_speed_mph > 0.0)) throw ValidationError("long_haul_speed_mph must be > 0");
    return {from, to, std::max(1, transit_instances(d / sc.long_haul_speed_mph)), d, true};
}

namespace {

void add_arc(std::map<std::pair<HubId, HubId>, PermittedArc>& out, const PermittedArc& a) {
    out.try_emplace({a.from, a.to}, a);
}

}  // namespace

HubId nearest_region_hub(const Instance& inst, const Carrier& s, HubId target) {
    const auto& net = inst.network;
    HubId best = *s.region.begin();
    double best_d = std::numeric_limits<double>::infinity();
    for (HubId h : s.region) {
        const double d = great_circle_miles(net.hub(h).position, net.hub(target).position);
        if (d < best_d) {
            best_d = d;
            best = h;
        }
    }
    return best;
}

ArcPermission allowed_arcs(const Instance& inst, const ScenarioConfig& sc, const Carrier& s) {
    if (sc.max_relay_transit < 1) throw ValidationError("max_relay_transit must be >= 1");
    ArcPermission perm;
    perm.carrier = s.id;
    std::map<std::pair<HubId, HubId>, PermittedArc> arcs;

    const auto assignment = assign_commodities(inst);
    const auto& mine = assignment.at(s.id);
    const auto& net = inst.network;

    auto in_region_relay_arcs = [&] {
        for (const auto& a : net.arcs()) {
            if (s.in_region(a.from) && s.in_region(a.to) && a.transit_time <= sc.max_relay_transit)
                add_arc(arcs, {a.from, a.to, a.transit_time, a.distance_miles, false});
        }
    };

    switch (sc.mode) {
        case ScenarioMode::EndToEnd:
            for (CommodityId id : mine) {
                const auto& k = inst.commodity(id);
                add_arc(arcs, direct_arc(inst, sc, k.origin, k.destination));
                add_arc(arcs, direct_arc(inst, sc, k.destination, k.origin));
            }
            perm.commodities.assign(mine.begin(), mine.end());
            break;
        case ScenarioMode::InRegionRelay:
            in_region_relay_arcs();
            for (CommodityId id : mine) {
                const auto& k = inst.commodity(id);
                if (s.in_region(k.destination)) continue;
                const HubId g = nearest_region_hub(inst, s, k.destination);
                add_arc(arcs, direct_arc(inst, sc, g, k.destination));
                add_arc(arcs, direct_arc(inst, sc, k.destination, g));
            }
            perm.commodities.assign(mine.begin(), mine.end());
            break;
        case ScenarioMode::HyperconnectedRelay:
            if (sc.gateway_restriction) {
                in_region_relay_arcs();
                for (const auto& a : net.arcs()) {
                    if (s.gateways.contains(a.from) && !s.in_region(a.to)) {
                        add_arc(arcs, {a.from, a.to, a.transit_time, a.distance_miles, false});
                        if (auto r = net.find_arc(a.to, a.from)) {
                            const auto& b = net.arcs()[*r];
                            add_arc(arcs, {b.from, b.to, b.transit_time, b.distance_miles, false});
                        }
                    }
                }
            } else {
                for (const auto& a : net.arcs()) add_arc(arcs, {a.from, a.to, a.transit_time, a.distance_miles, false});
            }
            for (const auto& k : inst.commodities) perm.commodities.push_back(k.id);
            break;
    }
    for (auto& [key, a] : arcs) perm.arcs.push_back(a);
    return perm;
}

double variable_cost(const CostParams& c, const Commodity& k, const TimedArc& a) {
    if (!a.is_move()) throw ValidationError("variable_cost: holding arcs carry no cost");
    return c.per_ton_mile_rate * k.weight_tons * a.distance_miles;
}

double fixed_cost(const CostParams& c, const Carrier& s, const TimedArc& a) {
    if (!a.is_move()) throw ValidationError("fixed_cost: holding arcs carry no cost");
    double f = c.base_per_mile * a.distance_miles;
    if (!s.in_region(a.tail_hub) || !s.in_region(a.head_hub)) f += c.dedicated_premium_per_mile * a.distance_miles;
    if (a.transit > c.surcharge_threshold) f += c.long_trip_surcharge;
    return f;
}

std::string model_name(const ScenarioConfig& scenario, std::optional<CarrierId> carrier) {
    if (carrier) return fmt::format("{}_{}", scenario_key(scenario.mode), *carrier);
    return std::string(scenario_key(scenario.mode));
}

std::optional<std::size_t> MipModel::find(VarKind kind, int entity, ArcIndex arc) const {
    auto it = index_.find({static_cast<int>(kind), entity, arc});
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

namespace {

/// Nodes reachable from the sources over arcs accepted by the filter.
std::vector<char> forward_reach(const TimeExpandedGraph& g, const std::vector<NodeIndex>& sources, auto&& accept) {
    std::vector<char> seen(g.nodes().size(), 0);
    std::deque<NodeIndex> queue;
    for (auto s : sources) {
        if (!seen[s]) queue.push_back(s);
        seen[s] = 1;
    }
    while (!queue.empty()) {
        const auto n = queue.front();
        queue.pop_front();
        for (auto ai : g.out_arcs(n)) {
            const auto& a = g.arcs()[ai];
            if (!accept(a) || seen[a.head]) continue;
            seen[a.head] = 1;
            queue.push_back(a.head);
        }
    }
    return seen;
}

std::vector<char> backward_reach(const TimeExpandedGraph& g, NodeIndex sink, auto&& accept) {
    std::vector<char> seen(g.nodes().size(), 0);
    std::deque<NodeIndex> queue{sink};
    seen[sink] = 1;
    while (!queue.empty()) {
        const auto n = queue.front();
        queue.pop_front();
        for (auto ai : g.in_arcs(n)) {
            const auto& a = g.arcs()[ai];
            if (!accept(a) || seen[a.tail]) continue;
            seen[a.tail] = 1;
            queue.push_back(a.tail);
        }
    }
    return seen;
}

}  // namespace

MipModel build_model(const Instance& inst, const ScenarioConfig& sc, const std::set<CarrierId>& carriers_in_scope) {
    if (carriers_in_scope.empty()) throw ValidationError("build_model: no carriers in scope");

    MipModel m;
    m.instance = inst;
    m.scenario = sc;
    m.carriers.assign(carriers_in_scope.begin(), carriers_in_scope.end());
    m.name = model_name(sc, m.carriers.size() == 1 && sc.separate() ? std::optional{m.carriers[0]} : std::nullopt);

    // Permissions and the model-specific network (union of permitted arcs).
    std::map<std::pair<HubId, HubId>, PermittedArc> union_arcs;
    std::map<CommodityId, std::vector<std::size_t>> eligible;  // commodity -> permission indices
    for (CarrierId cid : m.carriers) {
        m.permissions.push_back(allowed_arcs(inst, sc, inst.carrier(cid)));
        for (const auto& a : m.permissions.back().arcs) add_arc(union_arcs, a);
        for (CommodityId k : m.permissions.back().commodities) eligible[k].push_back(m.permissions.size() - 1);
    }
    for (const auto& [k, perms] : eligible) m.commodities.push_back(k);

    std::vector<PhysicalArc> arcs;
    for (const auto& [key, a] : union_arcs) arcs.push_back({a.from, a.to, a.transit_time, a.distance_miles});
    m.graph = expand(PhysicalNetwork(inst.network.hubs(), std::move(arcs)), inst.truck_horizon());
    const auto& g = m.graph;
    const int T = inst.horizon;
    const int H = inst.truck_horizon();
    const auto& cp = inst.cost_params;

    auto add_var = [&](VarKind kind, int entity, ArcIndex arc, double ub, double cost) {
        Variable v;
        v.kind = kind;
        v.entity = entity;
        v.arc = arc;
        v.upper = ub;
        v.cost = cost;
        v.name = fmt::format("{}_{}{}_a{}", kind == VarKind::X ? "X" : "Y", kind == VarKind::X ? "k" : "s", entity, arc);
        m.index_[{static_cast<int>(kind), entity, arc}] = m.variables.size();
        m.variables.push_back(std::move(v));
    };

    // X variables: arcs inside the commodity window, permitted to an eligible
    // carrier, on some timed path from (o, r) to (d, l).
    for (CommodityId kid : m.commodities) {
        const auto& k = inst.commodity(kid);
        const auto& perms = eligible[kid];
        auto accept = [&](const TimedArc& a) {
            if (a.tail_t < k.release || a.head_t > k.deadline) return false;
            if (!a.is_move()) return true;
            return std::any_of(perms.begin(), perms.end(),
                               [&](std::size_t p) { return m.permissions[p].allows(a.tail_hub, a.head_hub); });
        };
        const auto src = g.node_index(k.origin, k.release);
        const auto sink = g.node_index(k.destination, k.deadline);
        const auto fwd = forward_reach(g, {src}, accept);
        if (!fwd[sink])
            throw InfeasibleError(fmt::format("commodity {}: no timed path from ({}, {}) to ({}, {}) under scenario {}",
                                              kid, k.origin, k.release, k.destination, k.deadline,
                                              scenario_key(sc.mode)));
        const auto bwd = backward_reach(g, sink, accept);
        for (ArcIndex ai = 0; ai < g.arcs().size(); ++ai) {
            const auto& a = g.arcs()[ai];
            if (accept(a) && fwd[a.tail] && bwd[a.head])
                add_var(VarKind::X, kid, ai, 1.0, a.is_move() ? variable_cost(cp, k, a) : 0.0);
        }
    }
    m.num_x_ = m.variables.size();

    // Y variables: holds plus permitted moves reachable from the carrier's starting fleet.
    for (std::size_t p = 0; p < m.carriers.size(); ++p) {
        const auto& s = inst.carrier(m.carriers[p]);
        const auto& perm = m.permissions[p];
        std::vector<NodeIndex> starts;
        for (const auto& [hub, n] : s.fleet_initial)
            if (n > 0) starts.push_back(g.node_index(hub, 0));
        auto accept = [&](const TimedArc& a) { return !a.is_move() || perm.allows(a.tail_hub, a.head_hub); };
        const auto fwd = forward_reach(g, starts, accept);
        for (ArcIndex ai = 0; ai < g.arcs().size(); ++ai) {
            const auto& a = g.arcs()[ai];
            if (accept(a) && fwd[a.tail])
                add_var(VarKind::Y, s.id, ai, s.fleet_size(), a.is_move() ? fixed_cost(cp, s, a) : 0.0);
        }
    }

    auto node_name = [&](NodeIndex n) { return fmt::format("n{}", n); };

    // Eq2: commodity flow conservation on every timed node up to T.
    for (CommodityId kid : m.commodities) {
        const auto& k = inst.commodity(kid);
        const auto src = g.node_index(k.origin, k.release);
        const auto sink = g.node_index(k.destination, k.deadline);
        for (NodeIndex n = 0; n < g.nodes().size(); ++n) {
            if (g.nodes()[n].t > T) continue;
            Row r;
            r.tag = RowTag::Eq2;
            r.sense = Sense::Eq;
            r.rhs = n == src ? 1.0 : (n == sink ? -1.0 : 0.0);
            for (auto ai : g.out_arcs(n))
                if (auto v = m.find(VarKind::X, kid, ai)) r.coefs.emplace_back(*v, 1.0);
            for (auto ai : g.in_arcs(n))
                if (auto v = m.find(VarKind::X, kid, ai)) r.coefs.emplace_back(*v, -1.0);
            r.name = fmt::format("EQ2_k{}_{}", kid, node_name(n));
            m.rows.push_back(std::move(r));
        }
    }

    // Eq3: truck capacity on each moving arc that carries commodity flow.
    const bool weighted = sc.capacity_form == CapacityForm::VolumeWeighted;
    for (ArcIndex ai = 0; ai < g.arcs().size(); ++ai) {
        if (!g.arcs()[ai].is_move()) continue;
        Row r;
        r.tag = RowTag::Eq3;
        r.sense = Sense::Le;
        for (CommodityId kid : m.commodities) {
            if (auto v = m.find(VarKind::X, kid, ai)) {
                const double coef = weighted ? inst.commodity(kid).volume : 1.0;
                if (coef != 0.0) r.coefs.emplace_back(*v, coef);
            }
        }
        if (r.coefs.empty()) continue;
        for (CarrierId s : m.carriers)
            if (auto v = m.find(VarKind::Y, s, ai)) r.coefs.emplace_back(*v, -inst.v_max);
        r.name = fmt::format("EQ3_a{}", ai);
        m.rows.push_back(std::move(r));
    }

    // Eq4-Eq6: truck conservation per carrier.
    auto fleet_at = [](const std::map<HubId, int>& fleet, HubId h) {
        auto it = fleet.find(h);
        return it == fleet.end() ? 0 : it->second;
    };
    for (RowTag tag : {RowTag::Eq4, RowTag::Eq5, RowTag::Eq6}) {
        for (CarrierId sid : m.carriers) {
            const auto& s = inst.carrier(sid);
            for (NodeIndex n = 0; n < g.nodes().size(); ++n) {
                const auto& node = g.nodes()[n];
                Row r;
                r.tag = tag;
                if (tag == RowTag::Eq4) {
                    if (node.t != 0) continue;
                    r.sense = Sense::Eq;
                    r.rhs = fleet_at(s.fleet_initial, node.hub);
                    for (auto ai : g.out_arcs(n))
                        if (auto v = m.find(VarKind::Y, sid, ai)) r.coefs.emplace_back(*v, 1.0);
                } else if (tag == RowTag::Eq5) {
                    if (node.t != H) continue;
                    r.sense = Sense::Ge;
                    r.rhs = fleet_at(s.fleet_final_min, node.hub);
                    for (auto ai : g.in_arcs(n))
                        if (auto v = m.find(VarKind::Y, sid, ai)) r.coefs.emplace_back(*v, 1.0);
                } else {
                    if (node.t == 0 || node.t == H) continue;
                    r.sense = Sense::Eq;
                    for (auto ai : g.out_arcs(n))
                        if (auto v = m.find(VarKind::Y, sid, ai)) r.coefs.emplace_back(*v, 1.0);
                    for (auto ai : g.in_arcs(n))
                        if (auto v = m.find(VarKind::Y, sid, ai)) r.coefs.emplace_back(*v, -1.0);
                }
                r.name = fmt::format("{}_s{}_{}", row_tag_name(tag), sid, node_name(n));
                m.rows.push_back(std::move(r));
            }
        }
    }

    for (auto& r : m.rows)
        std::sort(r.coefs.begin(), r.coefs.end(), [](auto& a, auto& b) { return a.first < b.first; });
    return m;
}

}  // namespace ltl
