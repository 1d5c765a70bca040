// Command-line front end: validate, generate, solve, export and compare.

#include <array>
#include <chrono>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "ltl/error.hpp"
#include "ltl/generator.hpp"
#include "ltl/mps.hpp"
#include "ltl/pipeline.hpp"

namespace fs = std::filesystem;
using namespace ltl;

namespace {

enum Exit { kOk = 0, kIo = 1, kValidation = 2, kInfeasible = 3, kLimits = 4, kInternal = 5 };

struct Options {
    std::string instance;
    std::optional<std::uint64_t> seed;
    std::string params;
    GeneratorParams gen;
    std::string scenario = "all";
    std::string out = ".";
    std::string cost_params;
    long max_nodes = MipLimits{}.max_nodes;
    double time_budget = 0.0;
    std::string capacity_form = "volume";
    int max_relay_transit = ScenarioConfig{}.max_relay_transit;
    double long_haul_speed = ScenarioConfig{}.long_haul_speed_mph;
    bool no_gateway_restriction = false;
};

void add_source_flags(CLI::App* cmd, Options& o) {
    cmd->add_option("--instance", o.instance, "Instance JSON file");
    cmd->add_option("--seed", o.seed, "Generate the instance from this seed instead of reading one");
    cmd->add_option("--params", o.params, "Generator parameters JSON (with --seed)");
}

void add_generator_flags(CLI::App* cmd, Options& o) {
    cmd->add_option("--hubs", o.gen.hubs);
    cmd->add_option("--carriers", o.gen.carriers);
    cmd->add_option("--arcs", o.gen.arcs, "Directed physical arcs (even)");
    cmd->add_option("--commodities", o.gen.commodities);
    cmd->add_option("--horizon", o.gen.horizon);
    cmd->add_option("--winding-down", o.gen.winding_down);
    cmd->add_option("--cross-fraction", o.gen.cross_region_fraction);
    cmd->add_option("--trucks-per-hub", o.gen.trucks_per_hub, "0 derives fleets from outbound volume");
}

void add_model_flags(CLI::App* cmd, Options& o) {
    cmd->add_option("--scenario", o.scenario)->check(CLI::IsMember({"e2e", "relay", "hyper", "all"}));
    cmd->add_option("--out", o.out, "Output directory");
    cmd->add_option("--cost-params", o.cost_params, "Cost parameter JSON overriding the instance's");
    cmd->add_option("--capacity-form", o.capacity_form)->check(CLI::IsMember({"volume", "literal"}));
    cmd->add_option("--max-relay-transit", o.max_relay_transit);
    cmd->add_option("--long-haul-speed", o.long_haul_speed, "mph for synthesized direct arcs");
    cmd->add_flag("--no-gateway-restriction", o.no_gateway_restriction);
}

/// Generator params from file, then individual flags that were given explicitly.
GeneratorParams generator_params(const CLI::App* cmd, const Options& o) {
    GeneratorParams p = o.params.empty() ? GeneratorParams{} : load_generator_params_file(o.params);
    auto given = [&](const char* flag) { return cmd->count(flag) > 0; };
    if (given("--hubs")) p.hubs = o.gen.hubs;
    if (given("--carriers")) p.carriers = o.gen.carriers;
    if (given("--arcs")) p.arcs = o.gen.arcs;
    if (given("--commodities")) p.commodities = o.gen.commodities;
    if (given("--horizon")) p.horizon = o.gen.horizon;
    if (given("--winding-down")) p.winding_down = o.gen.winding_down;
    if (given("--cross-fraction")) p.cross_region_fraction = o.gen.cross_region_fraction;
    if (given("--trucks-per-hub")) p.trucks_per_hub = o.gen.trucks_per_hub;
    return p;
}

Instance load_source(const CLI::App* cmd, const Options& o) {
    if (!o.instance.empty() && o.seed) throw ValidationError("give either --instance or --seed, not both");
    Instance inst;
    if (!o.instance.empty()) inst = load_instance_file(o.instance);
    else if (o.seed) inst = generate_instance(*o.seed, generator_params(cmd, o));
    else throw ValidationError("an instance is required: --instance <file> or --seed <n>");
    if (!o.cost_params.empty()) inst.cost_params = load_cost_params_file(o.cost_params);
    return inst;
}

std::vector<ScenarioConfig> scenarios(const Options& o) {
    std::vector<ScenarioMode> modes;
    if (o.scenario == "all") modes = {ScenarioMode::EndToEnd, ScenarioMode::InRegionRelay, ScenarioMode::HyperconnectedRelay};
    else modes = {parse_scenario_key(o.scenario)};
    std::vector<ScenarioConfig> out;
    for (auto m : modes) {
        ScenarioConfig sc;
        sc.mode = m;
        sc.max_relay_transit = o.max_relay_transit;
        sc.long_haul_speed_mph = o.long_haul_speed;
        sc.gateway_restriction = !o.no_gateway_restriction;
        sc.capacity_form = o.capacity_form == "literal" ? CapacityForm::LiteralUnit : CapacityForm::VolumeWeighted;
        out.push_back(sc);
    }
    return out;
}

fs::path out_dir(const Options& o) {
    const fs::path dir = o.out;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw IoError(fmt::format("cannot create output directory {}", dir.string()));
    return dir;
}

int cmd_validate(const CLI::App* cmd, const Options& o) {
    const Instance inst = load_source(cmd, o);
    fmt::print("hubs={} arcs={} commodities={}\n", inst.network.hubs().size(), inst.network.arcs().size(),
               inst.commodities.size());
    return kOk;
}

int cmd_generate(const CLI::App* cmd, const Options& o) {
    if (!o.seed) throw ValidationError("generate needs --seed");
    const Instance inst = generate_instance(*o.seed, generator_params(cmd, o));
    const std::string text = serialize_instance(inst);
    if (o.out.empty() || o.out == "-") fmt::print("{}", text);
    else write_text_file(o.out, text);
    return kOk;
}

int cmd_export(const CLI::App* cmd, const Options& o) {
    const Instance inst = load_source(cmd, o);
    const fs::path dir = out_dir(o);
    for (const auto& sc : scenarios(o)) {
        const auto models = build_scenario_models(inst, sc);
        for (const auto& m : models) {
            const fs::path file = dir / fmt::format("model_{}.mps", m.name);
            write_text_file(file, export_model(m));
            fmt::print("{} variables={} rows={}\n", file.string(), m.variables.size(), m.rows.size());
        }
    }
    return kOk;
}

/// Reports as the CSV stores them, so in-process and file-based comparisons agree.
KpiReport as_written(const KpiReport& r) {
    KpiReport out = parse_kpis_csv(kpis_csv(r), r.scenario);
    out.objective = r.objective;
    out.commodity_ids = r.commodity_ids;
    return out;
}

int cmd_solve(const CLI::App* cmd, const Options& o) {
    const Instance inst = load_source(cmd, o);
    const fs::path dir = out_dir(o);
    MipLimits limits;
    limits.max_nodes = o.max_nodes;
    limits.time_budget_seconds = o.time_budget;

    int code = kOk;
    std::vector<KpiReport> reports;
    for (const auto& sc : scenarios(o)) {
        const auto key = scenario_key(sc.mode);
        const auto started = std::chrono::steady_clock::now();
        const ScenarioRun run = run_scenario(inst, sc, limits);
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

        write_text_file(dir / fmt::format("solution_{}.json", key), solution_json(run));
        if (run.kpis) {
            write_text_file(dir / fmt::format("kpis_{}.csv", key), kpis_csv(*run.kpis));
            write_text_file(dir / fmt::format("trips_{}.csv", key), trips_csv(run));
            write_text_file(dir / fmt::format("truckflow_{}.csv", key), truckflow_csv(run));
            reports.push_back(as_written(*run.kpis));
            fmt::print("{}: {} objective={:.2f} models={} ({:.2f}s)\n", key, run_status_name(run.status),
                       run.kpis->objective, run.models.size(), secs);
        } else {
            fmt::print("{}: {} {}\n", key, run_status_name(run.status), run.failure);
            if (run.status == RunStatus::Infeasible) code = kInfeasible;
            else if (code == kOk) code = kLimits;
        }
    }
    if (reports.size() == 3) {
        const auto cmp = compare_scenarios({reports[0], reports[1], reports[2]});
        write_text_file(dir / "comparison.csv", comparison_csv(cmp));
        if (cmp.nesting_anomaly) fmt::print("warning: hyper objective exceeds relay objective\n");
    }
    return code;
}

int cmd_compare(const Options& o) {
    const fs::path dir = o.out;
    std::array<KpiReport, 3> reports;
    const ScenarioMode modes[] = {ScenarioMode::EndToEnd, ScenarioMode::InRegionRelay, ScenarioMode::HyperconnectedRelay};
    for (int i = 0; i < 3; ++i) {
        const auto key = scenario_key(modes[i]);
        reports[i] = parse_kpis_csv(read_text_file(dir / fmt::format("kpis_{}.csv", key)), modes[i]);
        try {
            const auto sol = nlohmann::json::parse(read_text_file(dir / fmt::format("solution_{}.json", key)));
            reports[i].objective = sol.at("objective").get<double>();
            reports[i].commodity_ids = sol.at("commodities").get<std::vector<CommodityId>>();
        } catch (const nlohmann::json::exception& e) {
            throw ValidationError(fmt::format("solution_{}.json: {}", key, e.what()));
        }
    }
    const auto cmp = compare_scenarios(reports);
    write_text_file(dir / "comparison.csv", comparison_csv(cmp));
    fmt::print("{} rows written to {}\n", cmp.rows.size(), (dir / "comparison.csv").string());
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-carrier LTL relay planner"};
    app.require_subcommand(1);
    Options o;

    auto* validate = app.add_subcommand("validate", "Check an instance and print its size");
    add_source_flags(validate, o);
    add_generator_flags(validate, o);
    validate->add_option("--cost-params", o.cost_params);

    auto* generate = app.add_subcommand("generate", "Write a seeded synthetic instance");
    generate->add_option("--seed", o.seed)->required();
    generate->add_option("--params", o.params, "Generator parameters JSON");
    generate->add_option("--out", o.out, "Output file, '-' for stdout")->default_str("-");
    add_generator_flags(generate, o);

    auto* solve = app.add_subcommand("solve", "Solve scenarios and write reports");
    add_source_flags(solve, o);
    add_generator_flags(solve, o);
    add_model_flags(solve, o);
    solve->add_option("--max-nodes", o.max_nodes, "Branch-and-bound node limit per model");
    solve->add_option("--time-budget", o.time_budget, "Seconds per model, 0 for none");

    auto* exp = app.add_subcommand("export", "Write scenario models as MPS");
    add_source_flags(exp, o);
    add_generator_flags(exp, o);
    add_model_flags(exp, o);

    auto* compare = app.add_subcommand("compare", "Rebuild comparison.csv from the reports in --out");
    compare->add_option("--out", o.out, "Directory holding kpis_*.csv and solution_*.json");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kValidation;
    }
    if (generate->parsed() && generate->count("--out") == 0) o.out = "-";

    try {
        if (validate->parsed()) return cmd_validate(validate, o);
        if (generate->parsed()) return cmd_generate(generate, o);
        if (solve->parsed()) return cmd_solve(solve, o);
        if (exp->parsed()) return cmd_export(exp, o);
        if (compare->parsed()) return cmd_compare(o);
    } catch (const IoError& e) {
        fmt::print(stderr, "io error: {}\n", e.what());
        return kIo;
    } catch (const ValidationError& e) {
        fmt::print(stderr, "validation error: {}\n", e.what());
        return kValidation;
    } catch (const GenerationError& e) {
        fmt::print(stderr, "generation error: {}\n", e.what());
        return kValidation;
    } catch (const InfeasibleError& e) {
        fmt::print(stderr, "infeasible: {}\n", e.what());
        return kInfeasible;
    } catch (const Error& e) {
        fmt::print(stderr, "internal error: {}\n", e.what());
        return kInternal;
    }
    return kOk;
}
