#pragma once

// JSON container for spinor fields and solutions. Samples are stored as
// interleaved (re, im) pairs, row-major over the grid with j major.

#include <filesystem>
#include <vector>

#include "json.hpp"

#include "spindirac/nonlinear.hpp"

namespace spindirac {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

Json field_to_json(const SpinorField& phi);
SpinorField field_from_json(const Json& j);

Json solution_to_json(const Solution& sol, const std::vector<TraceEntry>& trace = {});
Solution solution_from_json(const Json& j);

/// Throws Error with the path on I/O failure, ValidationError on bad content.
void save_solution(const Solution& sol, const std::filesystem::path& path,
                   const std::vector<TraceEntry>& trace = {});
Solution load_solution(const std::filesystem::path& path);

void write_json(const Json& j, const std::filesystem::path& path);
Json read_json(const std::filesystem::path& path);

}  // namespace spindirac
