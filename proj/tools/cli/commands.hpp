#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "repsale/infinite_horizon.hpp"

namespace repsale::cli {

inline constexpr int kSchemaVersion = 1;

// "start:end:step" (both ends included when step divides the span) or a single value.
std::vector<double> parse_mu_grid(const std::string& spec);

infinite::DiscreteModel parse_model(const nlohmann::json& j);
infinite::DiscreteModel load_model(const std::string& path);

// Writes to a sibling temporary file and renames it into place.
void write_atomic(const std::string& path, const std::string& content);

// Entry point shared by the executable and the tests; returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace repsale::cli
