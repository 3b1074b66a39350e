#pragma once

#include <filesystem>
#include <nlohmann/json_fwd.hpp>
#include <string>

#include "langford/models.hpp"
#include "langford/ode.hpp"

namespace langford {

/// System description schema:
/// {
///   "family": "base" | "eq5" | "eq6" | "eq7",
///   "params": {"a": "-3", "b": "-8", "c": "8", "d": "-3", "e": "6"},
///   "signals": [[{"amp": 1.0, "freq": 1.0}], ...]   // one array per alpha_i
/// }
/// Rationals are strings; signal terms are sine records by default,
/// {"type": "cos"} for cosine, {"type": "const"} for a constant.
/// Unknown keys are rejected.
PerturbedSystem system_from_json(const nlohmann::json& j, const std::string& context);
nlohmann::json system_to_json(const PerturbedSystem& sys);
PerturbedSystem load_system(const std::filesystem::path& file);

Params params_from_json(const nlohmann::json& j, const std::string& context);
nlohmann::json params_to_json(const Params& p);
Params load_params(const std::filesystem::path& file);

Signal signal_from_json(const nlohmann::json& j, const std::string& context);
nlohmann::json signal_to_json(const Signal& s);

/// Strict JSON file read with filename context on errors.
nlohmann::json read_json_file(const std::filesystem::path& file);
void write_json_file(const std::filesystem::path& file, const nlohmann::json& j);

/// Shortest round-trip text for a double (deterministic, locale-free).
std::string format_double(double v);

void write_trajectory_csv(const std::filesystem::path& file, const Trajectory& tr);

}  // namespace langford
