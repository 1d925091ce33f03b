#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>
#include "mfg/bilevel.hpp"
#include "mfg/equilibrium.hpp"
#include "mfg/scenario.hpp"

namespace mfg {

/// Reads and validates a scenario document. Unknown keys are rejected.
/// Errors: ParseError (malformed JSON), SchemaError (missing, unknown or mistyped key),
/// ValidationError and module errors for rule violations.
[[nodiscard]] Scenario parse_scenario(const std::filesystem::path& path);
[[nodiscard]] Scenario scenario_from_json(const nlohmann::json& doc);

[[nodiscard]] ParamBox parse_param_box(const std::filesystem::path& path);
[[nodiscard]] ParamBox param_box_from_json(const nlohmann::json& doc);

/// Fixed 17-significant-digit rendering used by every exported number.
[[nodiscard]] std::string format_number(double v);

/// Columns: t, rho_e1..rho_e5, z_p1..z_p3, lambda, V0; one row per grid node.
void write_equilibrium_csv(const std::filesystem::path& path, const EquilibriumResult& result,
                           const Scenario& scenario);
[[nodiscard]] std::string equilibrium_csv(const EquilibriumResult& result, const Scenario& scenario);

/// Reads the rho columns of an equilibrium CSV as a reference trajectory on `grid`.
[[nodiscard]] MassTrajectory read_reference_csv(const std::filesystem::path& path, const TimeGrid& grid);

[[nodiscard]] nlohmann::json summary_json(const EquilibriumResult& result, const Scenario& scenario);
[[nodiscard]] nlohmann::json bilevel_json(const BilevelResult& result, SearchMethod method);

}  // namespace mfg
