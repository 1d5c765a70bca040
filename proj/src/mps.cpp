#include "ltl/mps.hpp"

#include <sstream>
#include <unordered_map>

#include <fmt/format.h>
#include <json.hpp>

#include "ltl/error.hpp"

namespace ltl {

namespace {

constexpr const char* kObjRow = "COST";

/// Shortest representation that round-trips through strtod, capped at 12 characters where possible.
std::string mps_number(double v) {
    if (v == 0.0) return "0";
    std::string s = fmt::format("{:.12g}", v);
    if (std::stod(s) != v) s = fmt::format("{:.17g}", v);
    return s;
}

void field_line(std::string& out, std::string_view code, std::string_view name1, std::string_view name2,
                std::string_view number) {
    // Fixed-format columns: 2-3 code, 5-12 name, 15-22 name, 25-36 number.
    fmt::format_to(std::back_inserter(out), " {:<2} {:<8}  {:<8}  {}\n", code, name1, name2, number);
}

}  // namespace

std::string export_model(const MipModel& model) {
    std::string out;
    fmt::format_to(std::back_inserter(out), "NAME          {}\n", model.name.empty() ? "LTLRELAY" : model.name);

    out += "ROWS\n";
    fmt::format_to(std::back_inserter(out), " N  {}\n", kObjRow);
    for (const auto& r : model.rows) {
        const char* code = r.sense == Sense::Eq ? "E" : (r.sense == Sense::Le ? "L" : "G");
        fmt::format_to(std::back_inserter(out), " {}  {}\n", code, r.name);
    }

    // Column-major entries.
    std::vector<std::vector<std::pair<std::size_t, double>>> cols(model.variables.size());
    for (std::size_t i = 0; i < model.rows.size(); ++i)
        for (auto [j, a] : model.rows[i].coefs) cols[j].emplace_back(i, a);

    out += "COLUMNS\n";
    if (!model.variables.empty()) out += "    MARKER                 'MARKER'                 'INTORG'\n";
    for (std::size_t j = 0; j < model.variables.size(); ++j) {
        const auto& v = model.variables[j];
        if (v.cost != 0.0 || cols[j].empty()) field_line(out, "", v.name, kObjRow, mps_number(v.cost));
        for (auto [i, a] : cols[j]) field_line(out, "", v.name, model.rows[i].name, mps_number(a));
    }
    if (!model.variables.empty()) out += "    MARKER                 'MARKER'                 'INTEND'\n";

    out += "RHS\n";
    for (const auto& r : model.rows)
        if (r.rhs != 0.0) field_line(out, "", "RHS", r.name, mps_number(r.rhs));

    out += "BOUNDS\n";
    for (const auto& v : model.variables) {
        if (v.lower == v.upper) {
            field_line(out, "FX", "BND", v.name, mps_number(v.lower));
            continue;
        }
        if (v.lower != 0.0) field_line(out, "LO", "BND", v.name, mps_number(v.lower));
        field_line(out, "UP", "BND", v.name, mps_number(v.upper));
    }
    out += "ENDATA\n";
    return out;
}

std::vector<double> import_solution_text(const MipModel& model, const std::string& text) {
    std::unordered_map<std::string, std::size_t> by_name;
    for (std::size_t j = 0; j < model.variables.size(); ++j) by_name.emplace(model.variables[j].name, j);
    std::vector<double> values(model.variables.size(), 0.0);
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string name;
        if (!(ls >> name)) continue;
        double value = 0.0;
        if (!(ls >> value)) throw ValidationError(fmt::format("solution line {}: expected 'name value'", lineno));
        auto it = by_name.find(name);
        if (it == by_name.end())
            throw ValidationError(fmt::format("solution line {}: unknown variable '{}'", lineno, name));
        values[it->second] = value;
    }
    return values;
}

std::string solution_values_json(const MipModel& model, const std::vector<double>& values) {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (std::size_t k = 0; k < values.size(); ++k)
        if (values[k] != 0.0) j[model.variables[k].name] = values[k];
    return j.dump();
}

}  // namespace ltl
