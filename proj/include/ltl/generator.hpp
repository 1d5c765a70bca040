#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "ltl/instance.hpp"

namespace ltl {

/**
 * @brief Shape of a synthetic instance.
 *
 * Hubs sit on a jittered grid and are split into contiguous longitude bands,
 * one per carrier. Physical arcs are bidirectional and never longer than
 * `max_transit` instances at `speed_mph`.
 */
struct GeneratorParams {
    int hubs = 18;
    int carriers = 3;
    int arcs = 120;  ///< directed physical arcs; must be even
    int max_transit = 5;
    double speed_mph = 50.0;
    double grid_spacing_miles = 80.0;
    double jitter_miles = 20.0;
    double origin_lat = 35.0;
    double origin_lon = -85.0;

    int horizon = 48;
    int winding_down = 6;
    int commodities = 82;
    double cross_region_fraction = 0.4;
    double v_max = 100.0;
    double volume_min = 10.0;
    double volume_max = 60.0;
    double weight_min_tons = 2.0;
    double weight_max_tons = 12.0;
    int slack_min = 2;  ///< spare instances added to the fastest delivery time
    int slack_max = 8;

    int trucks_per_hub = 0;  ///< 0 derives each hub's fleet from its outbound volume
    bool return_home = true; ///< require every starting truck to be back at its hub at the end

    bool operator==(const GeneratorParams&) const = default;
};

GeneratorParams load_generator_params(const std::string& json_text);
GeneratorParams load_generator_params_file(const std::filesystem::path& path);
std::string serialize_generator_params(const GeneratorParams& params);

/// Deterministic for a fixed seed and params. Throws GenerationError when no valid instance fits the params.
Instance generate_instance(std::uint64_t seed, const GeneratorParams& params);

}  // namespace ltl
