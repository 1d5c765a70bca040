#include "ltl/kpi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include <fmt/format.h>

#include "ltl/error.hpp"

namespace ltl {

double average_trip_hour(double total_hours, int total_trips) {
    return total_trips > 0 ? total_hours / total_trips : 0.0;
}

std::map<CarrierId, double> allocate_shared(double quantity, const std::vector<double>& weights,
                                            const std::vector<CarrierId>& owners, CarrierId truck_carrier) {
    if (weights.size() != owners.size()) throw ValidationError("allocate_shared: weights and owners differ in length");
    for (double w : weights)
        if (w < 0.0) throw ValidationError("allocate_shared: negative weight");
    const double total_w = std::accumulate(weights.begin(), weights.end(), 0.0);
    std::map<CarrierId, double> out;
    if (weights.empty() || !(total_w > 0.0)) {
        out[truck_carrier] = quantity;
        return out;
    }

    constexpr double unit = 1e-6;
    const long long total_units = std::llround(quantity / unit);
    std::vector<long long> base(weights.size());
    std::vector<double> frac(weights.size());
    long long assigned = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        const double exact = static_cast<double>(total_units) * weights[i] / total_w;
        base[i] = static_cast<long long>(std::floor(exact));
        frac[i] = exact - static_cast<double>(base[i]);
        assigned += base[i];
    }
    std::vector<std::size_t> order(weights.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return frac[a] > frac[b]; });
    for (long long r = total_units - assigned, i = 0; r > 0; --r, ++i) ++base[order[i % order.size()]];

    std::map<CarrierId, long long> units;
    for (std::size_t i = 0; i < weights.size(); ++i) units[owners[i]] += base[i];
    for (const auto& [c, u] : units) out[c] = static_cast<double>(u) * unit;
    return out;
}

CarrierId responsible_carrier(const Instance& instance, CommodityId k) {
    return owning_carrier(instance, instance.commodity(k).origin);
}

KpiReport compute_kpis(const Instance& instance, ScenarioMode scenario, const std::vector<SolvedModel>& models,
                       const CostParams& params) {
    KpiReport rep;
    rep.scenario = scenario;
    std::map<CarrierId, KpiRow> rows;
    for (const auto& c : instance.carriers) {
        KpiRow r;
        r.carrier = c.id;
        r.name = c.name;
        rows[c.id] = r;
    }
    std::set<CommodityId> ids;

    for (const auto& sm : models) {
        if (!sm.model || !sm.solution || !sm.vehicles || !sm.trips || !sm.paths)
            throw ValidationError("compute_kpis: missing decomposition");
        const auto& m = *sm.model;
        const auto& g = m.graph;
        rep.objective += sm.solution->objective;
        ids.insert(m.commodities.begin(), m.commodities.end());

        for (const auto& p : *sm.paths) {
            const auto& k = instance.commodity(p.commodity);
            const CarrierId owner = responsible_carrier(instance, k.id);
            for (auto a : p.arcs)
                if (g.arcs()[a].is_move()) rows[owner].cost += variable_cost(params, k, g.arcs()[a]);
        }

        for (const auto& it : *sm.vehicles) {
            const auto& s = instance.carrier(it.carrier);
            for (auto a : it.arcs) {
                const auto& arc = g.arcs()[a];
                if (!arc.is_move()) continue;
                std::vector<double> weights;
                std::vector<CarrierId> owners;
                double ton_miles = 0.0;
                if (auto l = it.loads.find(a); l != it.loads.end()) {
                    for (CommodityId k : l->second) {
                        weights.push_back(instance.commodity(k).weight_tons);
                        owners.push_back(responsible_carrier(instance, k));
                        ton_miles += weights.back() * arc.distance_miles;
                    }
                }
                for (const auto& [c, share] : allocate_shared(fixed_cost(params, s, arc), weights, owners, s.id))
                    rows[c].cost += share;
                if (weights.empty()) {
                    rows[s.id].empty_miles += arc.distance_miles;
                    rows[s.id].empty_emission_metric_tons +=
                        params.emission_factor * params.empty_truck_tare_tons * arc.distance_miles / 1e6;
                } else if (ton_miles > 0.0) {
                    const double tons = params.emission_factor * ton_miles / 1e6;
                    for (const auto& [c, share] : allocate_shared(tons, weights, owners, s.id))
                        rows[c].emission_metric_tons += share;
                }
            }
        }

        for (const auto& t : *sm.trips) {
            rows[t.carrier].total_hours += t.driving_hours;
            rows[t.carrier].total_trips += 1;
        }
    }

    rep.total.name = "total";
    for (auto& [id, r] : rows) {
        r.avg_trip_hour = average_trip_hour(r.total_hours, r.total_trips);
        rep.total.cost += r.cost;
        rep.total.total_hours += r.total_hours;
        rep.total.total_trips += r.total_trips;
        rep.total.emission_metric_tons += r.emission_metric_tons;
        rep.total.empty_miles += r.empty_miles;
        rep.total.empty_emission_metric_tons += r.empty_emission_metric_tons;
        rep.carriers.push_back(r);
    }
    rep.total.avg_trip_hour = average_trip_hour(rep.total.total_hours, rep.total.total_trips);
    rep.commodity_ids.assign(ids.begin(), ids.end());
    return rep;
}

namespace {

struct KpiField {
    const char* name;
    double (*get)(const KpiRow&);
};

constexpr KpiField kFields[] = {
    {"cost", [](const KpiRow& r) { return r.cost; }},
    {"total_hours", [](const KpiRow& r) { return r.total_hours; }},
    {"total_trips", [](const KpiRow& r) { return static_cast<double>(r.total_trips); }},
    {"avg_trip_hour", [](const KpiRow& r) { return r.avg_trip_hour; }},
    {"emission_metric_tons", [](const KpiRow& r) { return r.emission_metric_tons; }},
};

}  // namespace

Comparison compare_scenarios(const std::array<KpiReport, 3>& reports) {
    for (const auto& r : reports) {
        if (r.commodity_ids != reports[0].commodity_ids)
            throw ValidationError("compare_scenarios: reports cover different commodity sets");
        if (r.carriers.size() != reports[0].carriers.size())
            throw ValidationError("compare_scenarios: reports cover different carriers");
    }
    Comparison out;
    constexpr std::pair<int, int> pairs[] = {{0, 1}, {0, 2}, {1, 2}};
    for (auto [b, t] : pairs) {
        const auto& base = reports[b];
        const auto& target = reports[t];
        for (const auto& f : kFields) {
            auto add = [&](const KpiRow& br, const KpiRow& tr) {
                ComparisonRow row;
                row.kpi = f.name;
                row.carrier = br.name;
                row.base = base.scenario;
                row.target = target.scenario;
                row.base_value = f.get(br);
                row.value = f.get(tr);
                row.abs_delta = row.value - row.base_value;
                if (row.base_value != 0.0) row.pct_delta = 100.0 * row.abs_delta / row.base_value;
                else row.pct_delta = row.value == 0.0 ? 0.0 : std::numeric_limits<double>::quiet_NaN();
                out.rows.push_back(std::move(row));
            };
            for (std::size_t i = 0; i < base.carriers.size(); ++i) add(base.carriers[i], target.carriers[i]);
            add(base.total, target.total);
        }
    }
    out.nesting_anomaly = reports[2].objective > reports[1].objective + 1e-6 * std::max(1.0, reports[1].objective);
    return out;
}

}  // namespace ltl
