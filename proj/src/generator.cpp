#include "ltl/generator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <queue>
#include <random>

#include <fmt/format.h>
#include <json.hpp>

#include "ltl/error.hpp"
#include "ltl/model.hpp"

namespace ltl {

using nlohmann::json;

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(GeneratorParams, hubs, carriers, arcs, max_transit, speed_mph,
                                                grid_spacing_miles, jitter_miles, origin_lat, origin_lon, horizon,
                                                winding_down, commodities, cross_region_fraction, v_max, volume_min,
                                                volume_max, weight_min_tons, weight_max_tons, slack_min, slack_max,
                                                trucks_per_hub, return_home)

GeneratorParams load_generator_params(const std::string& json_text) {
    try {
        const json doc = json::parse(json_text);
        if (!doc.is_object()) throw ValidationError("generator params: expected an object");
        const json known = GeneratorParams{};
        for (const auto& [key, value] : doc.items())
            if (!known.contains(key)) throw ValidationError(fmt::format("generator params: unknown key '{}'", key));
        return doc.get<GeneratorParams>();
    } catch (const json::exception& e) {
        throw ValidationError(fmt::format("schema: {}", e.what()));
    }
}

GeneratorParams load_generator_params_file(const std::filesystem::path& path) {
    return load_generator_params(read_text_file(path));
}

std::string serialize_generator_params(const GeneratorParams& params) { return json(params).dump(2) + "\n"; }

namespace {

constexpr int kInf = std::numeric_limits<int>::max() / 4;

/// Draws built directly on the engine output so results do not depend on the standard library's distributions.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }
    int integer(int lo, int hi) {
        const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<int>(engine_() % span);
    }
    template <class T>
    const T& pick(const std::vector<T>& v) { return v[static_cast<std::size_t>(integer(0, static_cast<int>(v.size()) - 1))]; }

private:
    std::mt19937_64 engine_;
};

void check_params(const GeneratorParams& p) {
    auto fail = [](const std::string& what) { throw GenerationError("generator params: " + what); };
    if (p.hubs < 2) fail("hubs must be >= 2");
    if (p.carriers < 1 || p.carriers > p.hubs) fail("carriers must be in [1, hubs]");
    if (p.arcs < 0 || p.arcs % 2 != 0) fail("arcs must be a non-negative even count (arcs come in pairs)");
    if (p.max_transit < 1) fail("max_transit must be >= 1");
    if (!(p.speed_mph > 0.0)) fail("speed_mph must be > 0");
    if (!(p.grid_spacing_miles > 0.0) || p.jitter_miles < 0.0 || p.jitter_miles * 2.0 >= p.grid_spacing_miles)
        fail("need grid_spacing_miles > 0 and 0 <= jitter_miles < grid_spacing_miles / 2");
    if (p.horizon < 1 || p.winding_down < 0) fail("horizon must be >= 1 and winding_down >= 0");
    if (p.commodities < 0) fail("commodities must be >= 0");
    if (p.cross_region_fraction < 0.0 || p.cross_region_fraction > 1.0) fail("cross_region_fraction must be in [0, 1]");
    if (!(p.volume_min > 0.0) || p.volume_min > p.volume_max || p.volume_max > p.v_max)
        fail("need 0 < volume_min <= volume_max <= v_max");
    if (p.weight_min_tons < 0.0 || p.weight_min_tons > p.weight_max_tons) fail("need 0 <= weight_min_tons <= weight_max_tons");
    if (p.slack_min < 0 || p.slack_min > p.slack_max) fail("need 0 <= slack_min <= slack_max");
    if (p.trucks_per_hub < 0) fail("trucks_per_hub must be >= 0");
}

struct Pair {
    int a;
    int b;
    double miles;
};

struct DisjointSets {
    std::vector<int> parent;
    explicit DisjointSets(int n) : parent(static_cast<std::size_t>(n)) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); }
    bool join(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent[std::max(a, b)] = std::min(a, b);
        return true;
    }
};

struct Edge {
    int to;
    int transit;
    int ready;  ///< earliest departure, counted from time zero
};
using Adjacency = std::vector<std::vector<Edge>>;

/// Earliest arrival at `to` leaving `from` at time zero; kInf when unreachable.
int earliest_arrival(const Adjacency& adj, int from, int to) {
    std::vector<int> best(adj.size(), kInf);
    using Item = std::pair<int, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    best[from] = 0;
    pq.push({0, from});
    while (!pq.empty()) {
        auto [t, u] = pq.top();
        pq.pop();
        if (t != best[u]) continue;
        if (u == to) return t;
        for (const auto& e : adj[u]) {
            const int arrive = std::max(t, e.ready) + e.transit;
            if (arrive < best[e.to]) {
                best[e.to] = arrive;
                pq.push({arrive, e.to});
            }
        }
    }
    return kInf;
}

Adjacency region_adjacency(const Instance& inst, const Carrier& c) {
    Adjacency adj(inst.network.hubs().size());
    for (const auto& a : inst.network.arcs())
        if (c.in_region(a.from) && c.in_region(a.to)) adj[a.from].push_back({a.to, a.transit_time, 0});
    return adj;
}

/**
 * Union of every carrier's hyperconnected arcs. An arc whose tail has no truck
 * of a permitted carrier gets a ready time equal to the fastest empty
 * positioning leg from that carrier's region.
 */
std::pair<Adjacency, Adjacency> hyper_adjacency(const Instance& inst) {
    const auto n = inst.network.hubs().size();
    const ScenarioConfig sc{};
    std::map<std::pair<HubId, HubId>, int> ready;
    std::map<std::pair<HubId, HubId>, int> transit;
    for (const auto& c : inst.carriers) {
        const auto perm = allowed_arcs(inst, sc, c);
        for (const auto& a : perm.arcs) {
            int r = kInf;
            if (c.in_region(a.from)) {
                r = 0;
            } else {
                for (const auto& b : perm.arcs)
                    if (b.to == a.from && c.in_region(b.from)) r = std::min(r, b.transit_time);
            }
            auto [it, fresh] = ready.try_emplace({a.from, a.to}, r);
            if (!fresh) it->second = std::min(it->second, r);
            transit[{a.from, a.to}] = a.transit_time;
        }
    }
    Adjacency timed(n), plain(n);
    for (const auto& [key, r] : ready) {
        plain[key.first].push_back({key.second, transit.at(key), 0});
        if (r < kInf) timed[key.first].push_back({key.second, transit.at(key), r});
    }
    return {timed, plain};
}

std::vector<Hub> place_hubs(const GeneratorParams& p, Rng& rng) {
    const int rows = std::max(1, static_cast<int>(std::lround(std::sqrt(p.hubs / 2.0))));
    const double miles_per_lat = 69.0;
    const double miles_per_lon = 69.0 * std::cos(p.origin_lat * std::numbers::pi / 180.0);
    std::vector<Hub> hubs;
    for (int i = 0; i < p.hubs; ++i) {
        const double x = (i / rows) * p.grid_spacing_miles + rng.uniform(-p.jitter_miles, p.jitter_miles);
        const double y = (i % rows) * p.grid_spacing_miles + rng.uniform(-p.jitter_miles, p.jitter_miles);
        Hub h;
        h.id = i;
        h.name = fmt::format("H{:02d}", i);
        h.position = {p.origin_lat + y / miles_per_lat, p.origin_lon + x / miles_per_lon};
        hubs.push_back(std::move(h));
    }
    return hubs;
}

std::string carrier_name(int c) {
    return c < 26 ? std::string(1, static_cast<char>('A' + c)) : fmt::format("C{}", c);
}

/// Picks the undirected hub pairs: a spanning tree per region, one gateway link per carrier pair, then the shortest rest.
std::vector<Pair> choose_links(const GeneratorParams& p, const std::vector<Hub>& hubs, const std::vector<int>& region_of,
                               std::vector<char>& gateway) {
    std::vector<Pair> candidates;
    for (int a = 0; a < p.hubs; ++a)
        for (int b = a + 1; b < p.hubs; ++b) {
            const double d = great_circle_miles(hubs[a].position, hubs[b].position);
            if (transit_instances(d / p.speed_mph) <= p.max_transit) candidates.push_back({a, b, d});
        }
    std::stable_sort(candidates.begin(), candidates.end(), [](const Pair& x, const Pair& y) { return x.miles < y.miles; });

    std::vector<char> chosen(candidates.size(), 0);
    DisjointSets tree(p.hubs);
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        const auto& c = candidates[i];
        if (region_of[c.a] == region_of[c.b] && tree.join(c.a, c.b)) chosen[i] = 1;
    }
    for (int r = 0; r < p.carriers; ++r) {
        int root = -1;
        for (int h = 0; h < p.hubs; ++h) {
            if (region_of[h] != r) continue;
            if (root < 0) root = tree.find(h);
            else if (tree.find(h) != root)
                throw GenerationError(fmt::format("region of carrier {} is not connected within max_transit", r));
        }
    }

    DisjointSets regions(p.carriers);
    for (int r = 0; r < p.carriers; ++r)
        for (int q = r + 1; q < p.carriers; ++q)
            for (std::size_t i = 0; i < candidates.size(); ++i) {
                const auto& c = candidates[i];
                const int ra = region_of[c.a], rb = region_of[c.b];
                if ((ra == r && rb == q) || (ra == q && rb == r)) {
                    chosen[i] = 1;
                    gateway[c.a] = gateway[c.b] = 1;
                    regions.join(r, q);
                    break;
                }
            }
    for (int r = 1; r < p.carriers; ++r)
        if (regions.find(r) != regions.find(0))
            throw GenerationError("carrier regions cannot be linked within max_transit");

    const auto need = static_cast<std::size_t>(p.arcs / 2);
    std::size_t have = static_cast<std::size_t>(std::count(chosen.begin(), chosen.end(), 1));
    if (have > need)
        throw GenerationError(fmt::format("arcs={} is below the {} needed to connect every region", p.arcs, 2 * have));
    for (std::size_t i = 0; i < candidates.size() && have < need; ++i)
        if (!chosen[i]) {
            chosen[i] = 1;
            ++have;
        }
    if (have < need)
        throw GenerationError(fmt::format("only {} arcs fit within max_transit, {} requested", 2 * have, p.arcs));

    std::vector<Pair> out;
    for (std::size_t i = 0; i < candidates.size(); ++i)
        if (chosen[i]) out.push_back(candidates[i]);
    return out;
}

}  // namespace

Instance generate_instance(std::uint64_t seed, const GeneratorParams& p) {
    check_params(p);
    Rng rng(seed);

    auto hubs = place_hubs(p, rng);
    std::vector<int> region_of(static_cast<std::size_t>(p.hubs));
    for (int i = 0; i < p.hubs; ++i) region_of[i] = static_cast<int>(static_cast<long long>(i) * p.carriers / p.hubs);
    std::vector<char> gateway(static_cast<std::size_t>(p.hubs), 0);
    const auto links = choose_links(p, hubs, region_of, gateway);

    std::vector<PhysicalArc> arcs;
    for (const auto& l : links) {
        const int tau = std::max(1, transit_instances(l.miles / p.speed_mph));
        arcs.push_back({l.a, l.b, tau, l.miles});
        arcs.push_back({l.b, l.a, tau, l.miles});
    }
    std::sort(arcs.begin(), arcs.end(), [](const auto& x, const auto& y) { return std::pair{x.from, x.to} < std::pair{y.from, y.to}; });
    for (int i = 0; i < p.hubs; ++i) {
        hubs[i].owner_carriers = {region_of[i]};
        hubs[i].is_gateway = gateway[i] != 0;
    }

    Instance inst;
    inst.network = PhysicalNetwork(std::move(hubs), std::move(arcs));
    inst.horizon = p.horizon;
    inst.winding_down = p.winding_down;
    inst.v_max = p.v_max;
    for (int c = 0; c < p.carriers; ++c) {
        Carrier s;
        s.id = c;
        s.name = carrier_name(c);
        for (int h = 0; h < p.hubs; ++h)
            if (region_of[h] == c) {
                s.region.insert(h);
                if (gateway[h]) s.gateways.insert(h);
            }
        inst.carriers.push_back(std::move(s));
    }

    const auto [hyper_go, hyper_back] = hyper_adjacency(inst);
    std::vector<Adjacency> in_region;
    for (const auto& s : inst.carriers) in_region.push_back(region_adjacency(inst, s));
    const ScenarioConfig direct{};

    auto e2e_times = [&](HubId o, HubId d) {
        return std::pair{direct_arc(inst, direct, o, d).transit_time, direct_arc(inst, direct, d, o).transit_time};
    };
    auto relay_times = [&](HubId o, HubId d) {
        const auto& s = inst.carriers[region_of[o]];
        const auto& adj = in_region[s.id];
        if (s.in_region(d)) return std::pair{earliest_arrival(adj, o, d), earliest_arrival(adj, d, o)};
        const HubId g = nearest_region_hub(inst, s, d);
        return std::pair{earliest_arrival(adj, o, g) + direct_arc(inst, direct, g, d).transit_time,
                         direct_arc(inst, direct, d, g).transit_time + earliest_arrival(adj, g, o)};
    };

    const int T = p.horizon;
    const int TW = p.horizon + p.winding_down;
    constexpr int kAttempts = 1000;
    for (int id = 0; id < p.commodities; ++id) {
        bool placed = false;
        for (int attempt = 0; attempt < kAttempts && !placed; ++attempt) {
            const bool cross = p.carriers > 1 && rng.unit() < p.cross_region_fraction;
            const HubId o = rng.integer(0, p.hubs - 1);
            std::vector<HubId> same, other;
            for (HubId h = 0; h < p.hubs; ++h) {
                if (h == o) continue;
                (region_of[h] == region_of[o] ? same : other).push_back(h);
            }
            const auto& pool = (cross && !other.empty()) || same.empty() ? other : same;
            const HubId d = rng.pick(pool);

            const auto [e_go, e_back] = e2e_times(o, d);
            const auto [r_go, r_back] = relay_times(o, d);
            const int h_go = earliest_arrival(hyper_go, o, d);
            const int h_back = earliest_arrival(hyper_back, d, o);
            const int go = std::max({e_go, r_go, h_go});
            const int back = std::max({e_back, r_back, h_back});
            const int slack_draw = rng.integer(p.slack_min, p.slack_max);
            if (go >= kInf || back >= kInf) continue;

            int release_max = -1;
            int slack = slack_draw;
            for (int s : {slack_draw, p.slack_min}) {
                release_max = std::min(T - go - s, TW - go - back);
                slack = s;
                if (release_max >= 0) break;
            }
            if (release_max < 0) continue;

            Commodity k;
            k.id = id;
            k.origin = o;
            k.destination = d;
            k.release = rng.integer(0, release_max);
            k.deadline = std::min(T, k.release + go + slack);
            k.volume = std::min(p.v_max, std::round(rng.uniform(p.volume_min, p.volume_max) * 10.0) / 10.0);
            k.weight_tons = std::round(rng.uniform(p.weight_min_tons, p.weight_max_tons) * 100.0) / 100.0;
            inst.commodities.push_back(k);
            placed = true;
        }
        if (!placed)
            throw GenerationError(fmt::format(
                "commodity {}: no origin/destination fits a time window within horizon {}; the horizon may be shorter "
                "than the network diameter",
                id, p.horizon));
    }

    std::vector<double> out_volume(static_cast<std::size_t>(p.hubs), 0.0);
    for (const auto& k : inst.commodities) out_volume[k.origin] += k.volume;
    for (int h = 0; h < p.hubs; ++h) {
        const int n = p.trucks_per_hub > 0
                          ? p.trucks_per_hub
                          : std::max(1, static_cast<int>(std::ceil(out_volume[h] / p.v_max - 1e-9)));
        auto& s = inst.carriers[region_of[h]];
        s.fleet_initial[h] = n;
        if (p.return_home) s.fleet_final_min[h] = n;
    }

    validate(inst);
    return inst;
}

}  // namespace ltl
