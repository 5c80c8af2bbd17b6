#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "becphase/scenarios.hpp"

namespace becphase {

/// CSV renderings of the run reports. Column headers are documented in
/// docs/report_schema.json; all numbers use 17 significant digits so the
/// files serve as byte-stable regression fixtures.
std::string interference_csv(const RunReport& report);
std::string posterior_csv(const RunReport& report);
std::string epr_csv(const EprReport& report);
std::string singlet_csv(const SingletReport& report);
std::string macroscopic_singlet_csv(const MacroscopicSingletReport& report);
std::string weighing_csv(const WeighingReport& report);
std::string compare_csv(const std::vector<CompareRow>& rows);

/// JSON renderings (full report contents). Non-finite values (e.g. the
/// circular std of a flat posterior) serialize as null.
nlohmann::json interference_json(const RunReport& report);
nlohmann::json epr_json(const EprReport& report);
nlohmann::json singlet_json(const SingletReport& report);
nlohmann::json macroscopic_singlet_json(const MacroscopicSingletReport& report);
nlohmann::json weighing_json(const WeighingReport& report);
nlohmann::json compare_json(const std::vector<CompareRow>& rows,
                            const ScenarioConfig& cfg);

/// "<scenario>_seed<seed>": deterministic artifact naming.
std::string artifact_basename(const std::string& scenario, std::uint64_t seed);

/// Writes content to path, creating parent directories; throws IoFailure.
void write_text_file(const std::string& path, const std::string& content);

}  // namespace becphase
