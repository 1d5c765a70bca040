#include <gtest/gtest.h>

#include <numeric>

#include "ltl/error.hpp"
#include "ltl/mip.hpp"
#include "ltl/trips.hpp"
#include "support.hpp"

using namespace ltl;
using namespace ltl::testing;

namespace {

ArcIndex arc_of(const TimeExpandedGraph& g, HubId from, int t, HubId to, ArcKind kind = ArcKind::Move) {
    for (ArcIndex a = 0; a < g.arcs().size(); ++a) {
        const auto& x = g.arcs()[a];
        if (x.kind == kind && x.tail_hub == from && x.tail_t == t && x.head_hub == to) return a;
    }
    ADD_FAILURE() << "no arc " << from << "@" << t << "->" << to;
    return 0;
}

struct Solved {
    MipModel model;
    MipSolution solution;
};

Solved solve(const Instance& inst, std::set<CarrierId> scope) {
    Solved s{build_model(inst, scenario(ScenarioMode::HyperconnectedRelay), scope), {}};
    s.solution = solve_mip(s.model);
    EXPECT_EQ(s.solution.status, MipStatus::Optimal);
    return s;
}

/// Hub 0 with spokes to 1 and 2, one truck at 0, no demand.
MipModel star() {
    Instance inst;
    inst.network = PhysicalNetwork({hub(0, 40, -80), hub(1, 40, -79.5), hub(2, 40, -80.5)},
                                   {{0, 1, 1, 30}, {1, 0, 1, 30}, {0, 2, 1, 30}, {2, 0, 1, 30}});
    inst.horizon = 4;
    inst.v_max = 20;
    inst.carriers = {carrier(0, {0, 1, 2}, {{0, 1}}, {})};
    validate(inst);
    return build_model(inst, scenario(ScenarioMode::HyperconnectedRelay), {0});
}

/// Carrier 0 owns {0,1}, carrier 1 owns {2} with gateway 2; commodity 0 -> 2 must change trucks at 1.
Instance relay_chain() {
    Instance inst;
    inst.network = PhysicalNetwork({hub(0, 40, -80), hub(1, 40, -79.5), hub(2, 40, -79)},
                                   {{0, 1, 1, 30}, {1, 0, 1, 30}, {1, 2, 1, 30}, {2, 1, 1, 30}});
    inst.horizon = 4;
    inst.v_max = 20;
    inst.carriers = {carrier(0, {0, 1}, {{0, 1}}, {{0, 1}}), carrier(1, {2}, {{2, 1}}, {{2, 1}}, {2})};
    inst.commodities = {commodity(0, 0, 2, 0, 4, 8, 3)};
    validate(inst);
    return inst;
}

}  // namespace

TEST(Decompose, TwoHubItinerary) {
    const auto s = solve(two_hub(), {0});
    const auto& g = s.model.graph;
    const auto its = decompose_vehicles(s.solution, s.model);
    ASSERT_EQ(its.size(), 1u);
    const auto& it = its[0];
    EXPECT_EQ(it.domicile, 0);
    std::vector<ArcIndex> moves;
    for (auto a : it.arcs)
        if (g.arcs()[a].is_move()) moves.push_back(a);
    EXPECT_EQ(moves, (std::vector<ArcIndex>{arc_of(g, 0, 0, 1), arc_of(g, 1, 1, 0)}));
    EXPECT_EQ(it.loads.at(moves[0]), std::vector<CommodityId>{0});
    EXPECT_FALSE(it.loads.contains(moves[1]));
    EXPECT_TRUE(it.overloaded.empty());
    EXPECT_EQ(g.arcs()[it.arcs.back()].head_t, g.horizon());
}

TEST(Decompose, IdleFleetHasNoTrips) {
    auto inst = two_hub();
    inst.commodities.clear();
    const auto s = solve(inst, {0});
    const auto its = decompose_vehicles(s.solution, s.model);
    ASSERT_EQ(its.size(), 1u);
    for (auto a : its[0].arcs) EXPECT_FALSE(s.model.graph.arcs()[a].is_move());
    EXPECT_TRUE(extract_trips(its, s.model).empty());
}

TEST(Decompose, GreedyPacking) {
    auto inst = two_hub();
    inst.carriers = {carrier(0, {0, 1}, {{0, 2}}, {})};
    inst.commodities = {commodity(0, 0, 1, 0, 1, 15, 1), commodity(1, 0, 1, 0, 1, 10, 1), commodity(2, 0, 1, 0, 1, 5, 1)};
    validate(inst);
    const auto s = solve(inst, {0});
    const auto arc = arc_of(s.model.graph, 0, 0, 1);
    const auto its = decompose_vehicles(s.solution, s.model);
    std::vector<std::vector<CommodityId>> loads;
    for (const auto& it : its) {
        if (!it.loads.contains(arc)) continue;
        loads.push_back(it.loads.at(arc));
        double vol = 0;
        for (auto k : it.loads.at(arc)) vol += inst.commodity(k).volume;
        EXPECT_LE(vol, inst.v_max);
    }
    EXPECT_EQ(loads, (std::vector<std::vector<CommodityId>>{{0, 2}, {1}}));
}

TEST(Decompose, RefusesUnverifiedSolutions) {
    const auto s = solve(two_hub(), {0});
    auto bad = s.solution;
    bad.values[0] = 0.5;
    EXPECT_THROW(decompose_vehicles(bad, s.model), ValidationError);
    MipSolution none;
    EXPECT_THROW(decompose_vehicles(none, s.model), ValidationError);
}

TEST(ExtractTrips, TwoDomicileReturns) {
    const auto m = star();
    const auto& g = m.graph;
    VehicleItinerary it;
    it.domicile = 0;
    it.arcs = {arc_of(g, 0, 0, 1), arc_of(g, 1, 1, 0), arc_of(g, 0, 2, 2), arc_of(g, 2, 3, 0)};
    const auto trips = extract_trips({it}, m);
    ASSERT_EQ(trips.size(), 2u);
    for (const auto& t : trips) {
        EXPECT_TRUE(t.is_round_trip);
        EXPECT_EQ(t.driving_hours, 2);
        EXPECT_EQ(t.wall_span, 2);
        EXPECT_EQ(t.origin, 0);
        EXPECT_FALSE(t.crosses_region);
    }
}

TEST(ExtractTrips, OpenEndedSegment) {
    const auto m = star();
    const auto& g = m.graph;
    VehicleItinerary it;
    it.domicile = 0;
    it.arcs = {arc_of(g, 0, 0, 1), arc_of(g, 1, 1, 1, ArcKind::Hold), arc_of(g, 1, 2, 1, ArcKind::Hold),
               arc_of(g, 1, 3, 1, ArcKind::Hold)};
    const auto trips = extract_trips({it}, m);
    ASSERT_EQ(trips.size(), 1u);
    EXPECT_FALSE(trips[0].is_round_trip);
    EXPECT_EQ(trips[0].driving_hours, 1);
}

TEST(ExtractTrips, HoldOnlyItinerary) {
    const auto m = star();
    const auto& g = m.graph;
    VehicleItinerary it;
    for (int t = 0; t < 4; ++t) it.arcs.push_back(arc_of(g, 0, t, 0, ArcKind::Hold));
    EXPECT_TRUE(extract_trips({it}, m).empty());
}

TEST(CommodityPaths, TwoHubPath) {
    const auto s = solve(two_hub(), {0});
    const auto& g = s.model.graph;
    const auto paths = commodity_paths(s.solution, s.model, decompose_vehicles(s.solution, s.model));
    ASSERT_EQ(paths.size(), 1u);
    EXPECT_EQ(paths[0].arcs, (std::vector<ArcIndex>{arc_of(g, 0, 0, 1), arc_of(g, 1, 1, 1, ArcKind::Hold)}));
    EXPECT_EQ(paths[0].leg_carriers, std::vector<CarrierId>{0});
    EXPECT_TRUE(paths[0].handoff_hubs.empty());
}

TEST(CommodityPaths, HandoffBetweenCarriers) {
    const auto inst = relay_chain();
    const auto s = solve(inst, {0, 1});
    const auto oracle = brute_force_oracle(s.model);
    EXPECT_NEAR(oracle.objective, s.solution.objective, 1e-6);
    const auto paths = commodity_paths(s.solution, s.model, decompose_vehicles(s.solution, s.model));
    ASSERT_EQ(paths.size(), 1u);
    EXPECT_EQ(paths[0].leg_carriers, (std::vector<CarrierId>{0, 1}));
    EXPECT_EQ(paths[0].handoff_hubs, std::vector<HubId>{1});
}

TEST(Conservation, ItinerariesAndTripsMatchTruckFlow) {
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        const auto inst = tiny_instance(seed);
        std::set<CarrierId> all;
        for (const auto& c : inst.carriers) all.insert(c.id);
        MipModel m;
        try {
            m = build_model(inst, scenario(ScenarioMode::HyperconnectedRelay), all);
        } catch (const InfeasibleError&) {
            continue;
        }
        const auto sol = solve_mip(m);
        if (sol.status != MipStatus::Optimal) continue;
        SCOPED_TRACE(seed);
        const auto its = decompose_vehicles(sol, m);
        std::map<std::pair<CarrierId, ArcIndex>, long> used;
        for (const auto& it : its)
            for (auto a : it.arcs) ++used[{it.carrier, a}];
        std::map<CarrierId, long> hours_y, hours_trips;
        for (std::size_t v = m.num_x(); v < m.variables.size(); ++v) {
            const auto& var = m.variables[v];
            const long y = std::lround(sol.values[v]);
            EXPECT_EQ((used[{var.entity, var.arc}]), y) << var.name;
            const auto& a = m.graph.arcs()[var.arc];
            if (a.is_move()) hours_y[var.entity] += a.transit * y;
        }
        for (const auto& t : extract_trips(its, m)) hours_trips[t.carrier] += t.driving_hours;
        for (auto [c, h] : hours_y) EXPECT_EQ(hours_trips[c], h);
    }
}
