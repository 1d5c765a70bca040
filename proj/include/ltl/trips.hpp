#pragma once

#include <map>
#include <vector>

#include "ltl/mip.hpp"
#include "ltl/model.hpp"

namespace ltl {

/// One truck's timed walk from instance 0 to the final instance.
struct VehicleItinerary {
    CarrierId carrier = 0;
    int vehicle = 0;  ///< index within the carrier
    HubId domicile = 0;
    std::vector<ArcIndex> arcs;  ///< Move and Hold, chained head-to-tail
    std::map<ArcIndex, std::vector<CommodityId>> loads;  ///< per Move arc, commodities on board
    std::vector<ArcIndex> overloaded;  ///< Move arcs where no packing within v_max existed
};

/// A maximal movement segment of an itinerary between domicile visits.
struct TruckTrip {
    CarrierId carrier = 0;
    int vehicle = 0;
    std::size_t itinerary = 0;  ///< index into the itinerary list
    std::vector<ArcIndex> moves;
    HubId origin = 0;
    int driving_hours = 0;
    int wall_span = 0;
    bool is_round_trip = false;
    bool crosses_region = false;
};

struct CommodityPath {
    CommodityId commodity = 0;
    std::vector<ArcIndex> arcs;           ///< from (o, r) to (d, l)
    std::vector<CarrierId> leg_carriers;  ///< carrier moving each Move arc, in order
    std::vector<HubId> handoff_hubs;      ///< hubs where the moving carrier changes
};

/// Driving-hour cap for a round trip under hours-of-service rules.
inline constexpr int kRoundTripHourLimit = 11;

/**
 * Splits each carrier's integral truck flow into one itinerary per truck
 * (greedy walk in arc order) and packs commodities onto trucks per arc:
 * first-fit in commodity order, falling back to an exact packing search.
 */
std::vector<VehicleItinerary> decompose_vehicles(const MipSolution& solution, const MipModel& model);

/// Cuts every itinerary at each visit to its domicile.
std::vector<TruckTrip> extract_trips(const std::vector<VehicleItinerary>& itineraries, const MipModel& model);

/// Traces each commodity's timed walk and the carriers that move it.
std::vector<CommodityPath> commodity_paths(const MipSolution& solution, const MipModel& model,
                                           const std::vector<VehicleItinerary>& itineraries);

}  // namespace ltl
