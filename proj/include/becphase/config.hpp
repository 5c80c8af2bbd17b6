#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "becphase/model.hpp"
#include "becphase/scenarios.hpp"

namespace becphase {

struct SingletSection {
    double phi_1 = 0.0;
    double phi_2 = 0.0;
    std::int64_t samples = 100000;
};

struct MacroscopicSingletSection {
    std::int64_t block_size = 1;
    std::int64_t samples = 100000;
};

struct WeighingSection {
    std::int64_t particles = 0;
    std::complex<double> amp_left{1.0, 0.0};
    std::complex<double> amp_right{1.0, 0.0};
    std::int64_t samples = 100000;
};

/// A parsed, validated scenario definition. Detection plans are resolved to
/// explicit specs at parse time, so the document is self-describing.
struct ConfigDocument {
    std::string schema_version = "1";
    std::string scenario;  // interference | epr | singlet | macroscopic_singlet | weighing | compare
    ScenarioConfig core;   // populated for interference and compare
    std::optional<EprConfig> epr;
    std::optional<SingletSection> singlet;
    std::optional<MacroscopicSingletSection> macroscopic_singlet;
    std::optional<WeighingSection> weighing;
    std::uint64_t seed = 0;
    std::int64_t ensemble = 1;
};

/// Strict JSON parsing: unknown fields are rejected with their path, the
/// schema version must be known, and every model invariant is re-validated.
/// Throws ConfigError.
ConfigDocument parse_config(const std::string& text);

/// Canonical JSON serialization; parse(emit(doc)) reproduces doc and
/// emit(parse(emit(doc))) is byte-identical to emit(doc).
std::string emit_config(const ConfigDocument& doc);

/// CLI entry: args are main()'s argv[1..]. Returns the process exit code:
/// 0 success, 1 config error, 2 runtime error. Writes one-line diagnostics
/// to stderr on failure and artifacts (<scenario>_seed<seed>.{csv,json}) to
/// the --out directory (default: $BECPHASE_OUT_DIR, else ".").
int run_command(const std::vector<std::string>& args);

}  // namespace becphase
