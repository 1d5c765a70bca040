#pragma once

#include <map>
#include <string>
#include <vector>

#include "ltl/mip.hpp"
#include "ltl/model.hpp"

namespace ltl {

/**
 * Writes the model as MPS text with fixed-format column positions.
 *
 * Names longer than eight characters are written in place and push later
 * fields right, so readers must accept free-format MPS (all mainstream
 * solvers do). All columns sit inside one INTORG/INTEND marker pair.
 */
std::string export_model(const MipModel& model);

/// Reads "name value" lines (blank lines and '#' comments ignored) into a dense vector.
std::vector<double> import_solution_text(const MipModel& model, const std::string& text);

/// JSON object mapping variable names to values, nonzero entries only, in variable order.
std::string solution_values_json(const MipModel& model, const std::vector<double>& values);

}  // namespace ltl
