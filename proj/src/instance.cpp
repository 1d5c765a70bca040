#include "ltl/instance.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "ltl/error.hpp"

namespace ltl {

using nlohmann::json;

int Carrier::fleet_size() const {
    int n = 0;
    for (const auto& [hub, count] : fleet_initial) n += count;
    return n;
}

const Carrier& Instance::carrier(CarrierId id) const {
    auto it = std::find_if(carriers.begin(), carriers.end(), [&](const Carrier& c) { return c.id == id; });
    if (it == carriers.end()) throw ValidationError(fmt::format("unknown carrier id {}", id));
    return *it;
}

const Commodity& Instance::commodity(CommodityId id) const {
    auto it = std::find_if(commodities.begin(), commodities.end(), [&](const Commodity& c) { return c.id == id; });
    if (it == commodities.end()) throw ValidationError(fmt::format("unknown commodity id {}", id));
    return *it;
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(fmt::format("cannot read '{}'", path.string()));
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError(fmt::format("error reading '{}'", path.string()));
    return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(fmt::format("cannot write '{}'", path.string()));
    out << text;
    if (!out) throw IoError(fmt::format("error writing '{}'", path.string()));
}

void validate(Instance& inst) {
    if (inst.horizon < 0) throw ValidationError("horizon must be >= 0");
    if (inst.winding_down < 0) throw ValidationError("winding_down must be >= 0");
    if (!(inst.v_max > 0.0)) throw ValidationError("v_max must be > 0");

    const auto& cp = inst.cost_params;
    for (double v : {cp.per_ton_mile_rate, cp.base_per_mile, cp.dedicated_premium_per_mile, cp.long_trip_surcharge,
                     cp.emission_factor, cp.empty_truck_tare_tons}) {
        if (!(v >= 0.0)) throw ValidationError("cost_params: all values must be nonnegative");
    }
    if (cp.surcharge_threshold < 0) throw ValidationError("cost_params: surcharge_threshold must be >= 0");

    std::sort(inst.carriers.begin(), inst.carriers.end(), [](auto& a, auto& b) { return a.id < b.id; });
    std::sort(inst.commodities.begin(), inst.commodities.end(), [](auto& a, auto& b) { return a.id < b.id; });

    const auto& net = inst.network;
    std::map<HubId, std::vector<CarrierId>> owners;
    std::map<HubId, bool> gateway;
    for (std::size_t i = 0; i < inst.carriers.size(); ++i) {
        const auto& c = inst.carriers[i];
        if (i > 0 && inst.carriers[i - 1].id == c.id)
            throw ValidationError(fmt::format("carrier {}: duplicate carrier id", c.id));
        for (HubId h : c.region) {
            if (!net.has_hub(h)) throw ValidationError(fmt::format("carrier {}: region references unknown hub {}", c.id, h));
            owners[h].push_back(c.id);
        }
        for (HubId h : c.gateways) {
            if (!c.region.contains(h))
                throw ValidationError(fmt::format("carrier {}: gateway hub {} is not in its region", c.id, h));
            gateway[h] = true;
        }
        auto check_fleet = [&](const std::map<HubId, int>& fleet, const char* what) {
            for (const auto& [h, n] : fleet) {
                if (!net.has_hub(h))
                    throw ValidationError(fmt::format("carrier {}: {} references unknown hub {}", c.id, what, h));
                if (n < 0) throw ValidationError(fmt::format("carrier {}: {} count at hub {} is negative", c.id, what, h));
            }
        };
        check_fleet(c.fleet_initial, "fleet_initial");
        check_fleet(c.fleet_final_min, "fleet_final_min");
        int final_total = 0;
        for (const auto& [h, n] : c.fleet_final_min) final_total += n;
        if (final_total > c.fleet_size())
            throw ValidationError(fmt::format("carrier {}: fleet_final_min total {} exceeds fleet_initial total {}", c.id,
                                              final_total, c.fleet_size()));
    }

    std::vector<Hub> hubs = net.hubs();
    for (auto& h : hubs) {
        auto derived = owners[h.id];
        if (derived.empty()) throw ValidationError(fmt::format("hub {}: not in any carrier region", h.id));
        if (!h.owner_carriers.empty() && h.owner_carriers != derived)
            throw ValidationError(fmt::format("hub {}: owner_carriers disagrees with carrier regions", h.id));
        h.owner_carriers = derived;
        h.is_gateway = gateway[h.id];
    }
    inst.network = PhysicalNetwork(std::move(hubs), net.arcs());

    for (std::size_t i = 0; i < inst.commodities.size(); ++i) {
        const auto& k = inst.commodities[i];
        if (i > 0 && inst.commodities[i - 1].id == k.id)
            throw ValidationError(fmt::format("commodity {}: duplicate commodity id", k.id));
        if (!net.has_hub(k.origin))
            throw ValidationError(fmt::format("commodity {}: dangling reference to origin hub {}", k.id, k.origin));
        if (!net.has_hub(k.destination))
            throw ValidationError(
                fmt::format("commodity {}: dangling reference to destination hub {}", k.id, k.destination));
        if (k.origin == k.destination)
            throw ValidationError(fmt::format("commodity {}: origin equals destination", k.id));
        if (k.release < 0) throw ValidationError(fmt::format("commodity {}: release must be >= 0", k.id));
        if (k.release >= k.deadline)
            throw ValidationError(fmt::format("commodity {}: release {} must be before deadline {}", k.id, k.release,
                                              k.deadline));
        if (k.deadline > inst.horizon)
            throw ValidationError(
                fmt::format("commodity {}: deadline {} exceeds horizon {}", k.id, k.deadline, inst.horizon));
        if (!(k.volume >= 0.0)) throw ValidationError(fmt::format("commodity {}: volume must be >= 0", k.id));
        if (k.volume > inst.v_max)
            throw ValidationError(fmt::format("commodity {}: volume {} exceeds v_max {}", k.id, k.volume, inst.v_max));
        if (!(k.weight_tons >= 0.0)) throw ValidationError(fmt::format("commodity {}: weight_tons must be >= 0", k.id));
    }
}

namespace {

json cost_params_to_json(const CostParams& c) {
    return json{{"per_ton_mile_rate", c.per_ton_mile_rate},
                {"base_per_mile", c.base_per_mile},
                {"dedicated_premium_per_mile", c.dedicated_premium_per_mile},
                {"long_trip_surcharge", c.long_trip_surcharge},
                {"surcharge_threshold", c.surcharge_threshold},
                {"emission_factor", c.emission_factor},
                {"empty_truck_tare_tons", c.empty_truck_tare_tons}};
}

CostParams cost_params_from_json(const json& j) {
    if (!j.is_object()) throw ValidationError("cost_params: expected an object");
    CostParams c;
    auto take = [&](const char* key, auto& field) {
        if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
    };
    take("per_ton_mile_rate", c.per_ton_mile_rate);
    take("base_per_mile", c.base_per_mile);
    take("dedicated_premium_per_mile", c.dedicated_premium_per_mile);
    take("long_trip_surcharge", c.long_trip_surcharge);
    take("surcharge_threshold", c.surcharge_threshold);
    take("emission_factor", c.emission_factor);
    take("empty_truck_tare_tons", c.empty_truck_tare_tons);
    return c;
}

std::map<HubId, int> fleet_from_json(const json& j, const char* what) {
    std::map<HubId, int> m;
    if (!j.is_object()) throw ValidationError(fmt::format("{}: expected an object keyed by hub id", what));
    for (auto it = j.begin(); it != j.end(); ++it) {
        std::size_t pos = 0;
        HubId hub = 0;
        try {
            hub = std::stoi(it.key(), &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (pos != it.key().size()) throw ValidationError(fmt::format("{}: key '{}' is not a hub id", what, it.key()));
        m[hub] = it.value().get<int>();
    }
    return m;
}

json fleet_to_json(const std::map<HubId, int>& m) {
    json j = json::object();
    for (const auto& [h, n] : m) j[std::to_string(h)] = n;
    return j;
}

Instance instance_from_json(const json& doc) {
    for (const char* key : {"network", "carriers", "commodities", "horizon", "winding_down", "v_max"}) {
        if (!doc.contains(key)) throw ValidationError(fmt::format("schema: missing top-level key '{}'", key));
    }
    Instance inst;
    inst.horizon = doc.at("horizon").get<int>();
    inst.winding_down = doc.at("winding_down").get<int>();
    inst.v_max = doc.at("v_max").get<double>();
    if (doc.contains("cost_params")) inst.cost_params = cost_params_from_json(doc.at("cost_params"));

    const json& net = doc.at("network");
    std::vector<Hub> hubs;
    for (const auto& jh : net.at("hubs")) {
        Hub h;
        h.id = jh.at("id").get<int>();
        h.name = jh.value("name", fmt::format("H{}", h.id));
        if (jh.contains("position")) {
            h.position.lat = jh.at("position").at("lat").get<double>();
            h.position.lon = jh.at("position").at("lon").get<double>();
        }
        if (jh.contains("owner_carriers")) {
            h.owner_carriers = jh.at("owner_carriers").get<std::vector<CarrierId>>();
            std::sort(h.owner_carriers.begin(), h.owner_carriers.end());
        }
        h.is_gateway = jh.value("is_gateway", false);
        hubs.push_back(std::move(h));
    }
    std::vector<PhysicalArc> arcs;
    for (const auto& ja : net.at("arcs")) {
        PhysicalArc a;
        a.from = ja.at("from").get<int>();
        a.to = ja.at("to").get<int>();
        a.transit_time = transit_instances(ja.at("transit_time").get<double>());
        a.distance_miles = ja.at("distance_miles").get<double>();
        arcs.push_back(a);
    }
    inst.network = PhysicalNetwork(std::move(hubs), std::move(arcs));

    for (const auto& jc : doc.at("carriers")) {
        Carrier c;
        c.id = jc.at("id").get<int>();
        c.name = jc.value("name", fmt::format("C{}", c.id));
        for (int h : jc.at("region")) c.region.insert(h);
        if (jc.contains("gateways"))
            for (int h : jc.at("gateways")) c.gateways.insert(h);
        c.fleet_initial = fleet_from_json(jc.at("fleet_initial"), "fleet_initial");
        if (jc.contains("fleet_final_min")) c.fleet_final_min = fleet_from_json(jc.at("fleet_final_min"), "fleet_final_min");
        inst.carriers.push_back(std::move(c));
    }
    for (const auto& jk : doc.at("commodities")) {
        Commodity k;
        k.id = jk.at("id").get<int>();
        k.origin = jk.at("origin").get<int>();
        k.destination = jk.at("destination").get<int>();
        k.release = jk.at("release").get<int>();
        k.deadline = jk.at("deadline").get<int>();
        k.volume = jk.at("volume").get<double>();
        k.weight_tons = jk.value("weight_tons", 0.0);
        inst.commodities.push_back(k);
    }
    validate(inst);
    return inst;
}

template <class F>
auto schema_guard(F&& f) {
    try {
        return f();
    } catch (const json::exception& e) {
        throw ValidationError(fmt::format("schema: {}", e.what()));
    }
}

}  // namespace

Instance load_instance(const std::string& json_text) {
    return schema_guard([&] { return instance_from_json(json::parse(json_text)); });
}

Instance load_instance_file(const std::filesystem::path& path) { return load_instance(read_text_file(path)); }

std::string serialize_instance(const Instance& inst) {
    json hubs = json::array();
    for (const auto& h : inst.network.hubs()) {
        hubs.push_back({{"id", h.id},
                        {"name", h.name},
                        {"position", {{"lat", h.position.lat}, {"lon", h.position.lon}}},
                        {"owner_carriers", h.owner_carriers},
                        {"is_gateway", h.is_gateway}});
    }
    json arcs = json::array();
    for (const auto& a : inst.network.arcs()) {
        arcs.push_back(
            {{"from", a.from}, {"to", a.to}, {"transit_time", a.transit_time}, {"distance_miles", a.distance_miles}});
    }
    json carriers = json::array();
    for (const auto& c : inst.carriers) {
        carriers.push_back({{"id", c.id},
                            {"name", c.name},
                            {"region", c.region},
                            {"gateways", c.gateways},
                            {"fleet_initial", fleet_to_json(c.fleet_initial)},
                            {"fleet_final_min", fleet_to_json(c.fleet_final_min)}});
    }
    json commodities = json::array();
    for (const auto& k : inst.commodities) {
        commodities.push_back({{"id", k.id},
                               {"origin", k.origin},
                               {"destination", k.destination},
                               {"release", k.release},
                               {"deadline", k.deadline},
                               {"volume", k.volume},
                               {"weight_tons", k.weight_tons}});
    }
    json doc = {{"network", {{"hubs", hubs}, {"arcs", arcs}}},
                {"carriers", carriers},
                {"commodities", commodities},
                {"horizon", inst.horizon},
                {"winding_down", inst.winding_down},
                {"v_max", inst.v_max},
                {"cost_params", cost_params_to_json(inst.cost_params)}};
    return doc.dump(2) + "\n";
}

CostParams load_cost_params(const std::string& json_text) {
    return schema_guard([&] { return cost_params_from_json(json::parse(json_text)); });
}

CostParams load_cost_params_file(const std::filesystem::path& path) {
    return load_cost_params(read_text_file(path));
}

std::string serialize_cost_params(const CostParams& params) { return cost_params_to_json(params).dump(2) + "\n"; }

CarrierId owning_carrier(const Instance& instance, HubId hub) {
    for (const auto& c : instance.carriers)  // sorted by id
        if (c.in_region(hub)) return c.id;
    throw ValidationError(fmt::format("hub {}: not in any carrier region", hub));
}

std::map<CarrierId, std::set<CommodityId>> assign_commodities(const Instance& instance) {
    std::map<CarrierId, std::set<CommodityId>> out;
    for (const auto& c : instance.carriers) out[c.id];
    for (const auto& k : instance.commodities) out[owning_carrier(instance, k.origin)].insert(k.id);
    return out;
}

}  // namespace ltl
