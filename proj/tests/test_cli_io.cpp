#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "becphase/config.hpp"
#include "becphase/numeric.hpp"
#include "becphase/report_io.hpp"
#include "becphase/scenarios.hpp"

using namespace becphase;
using nlohmann::json;

namespace {

namespace fs = std::filesystem;

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "becphase_cli_io" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct CliResult {
    int code = -1;
    std::string out;
    std::string err;
};

CliResult run_cli(const std::vector<std::string>& args) {
    std::ostringstream out;
    std::ostringstream err;
    std::streambuf* old_out = std::cout.rdbuf(out.rdbuf());
    std::streambuf* old_err = std::cerr.rdbuf(err.rdbuf());
    CliResult result;
    try {
        result.code = run_command(args);
    } catch (...) {
        std::cout.rdbuf(old_out);
        std::cerr.rdbuf(old_err);
        throw;
    }
    std::cout.rdbuf(old_out);
    std::cerr.rdbuf(old_err);
    result.out = out.str();
    result.err = err.str();
    return result;
}

/// Records the dotted path of every leaf and every array in a JSON value;
/// array elements appear under "prefix[]".
void flatten(const json& v, const std::string& prefix, std::set<std::string>& out) {
    if (v.is_object()) {
        for (auto it = v.begin(); it != v.end(); ++it)
            flatten(*it, prefix.empty() ? it.key() : prefix + "." + it.key(), out);
    } else if (v.is_array()) {
        if (!prefix.empty()) out.insert(prefix);
        for (const json& e : v) flatten(e, prefix + "[]", out);
    } else if (!prefix.empty()) {
        out.insert(prefix);
    }
}

std::set<std::string> documented_fields(const std::string& schema_file) {
    const json schema = json::parse(slurp(fs::path(BECPHASE_SOURCE_DIR) / "docs" / schema_file));
    std::set<std::string> fields;
    for (auto it = schema.at("fields").begin(); it != schema.at("fields").end(); ++it)
        fields.insert(it.key());
    return fields;
}

void check_documented(const json& report, const std::set<std::string>& fields) {
    std::set<std::string> paths;
    flatten(report, "", paths);
    for (const std::string& p : paths)
        CHECK_MESSAGE(fields.count(p) == 1, "undocumented field: " << p);
}

const char* kMinimalInterference = R"json({
  "schema_version": "1",
  "scenario": "interference",
  "seed": 1,
  "state": {"n_a": 100, "n_b": 100},
  "plan": {"grid": {"count": 10, "region": {"lo": -1.0, "hi": 1.0}}}
})json";

}  // namespace

TEST_CASE("a minimal config parses and the grid plan is resolved") {
    const ConfigDocument doc = parse_config(kMinimalInterference);
    CHECK(doc.scenario == "interference");
    CHECK(doc.seed == 1);
    CHECK(doc.core.n_a == 100);
    CHECK(doc.core.n_b == 100);
    CHECK(doc.core.engine == Engine::Exact);
    CHECK(doc.core.ensemble_size == 1);
    REQUIRE(doc.core.detections.size() == 10);
    for (int i = 0; i < 10; ++i) {
        const DetectionSpec& s = doc.core.detections[static_cast<std::size_t>(i)];
        CHECK(s.position == doctest::Approx(-1.0 + (i + 0.5) * 0.2).epsilon(1e-15));
        CHECK(s.width == doctest::Approx(0.1));
    }
    CHECK(doc.core.detections[0].angle == doctest::Approx(0.0));
    CHECK(doc.core.detections[1].angle == doctest::Approx(pi / 4.0));
    CHECK(doc.core.detections[4].angle == doctest::Approx(0.0));
}

TEST_CASE("emitted configs parse back and re-emit byte-identically") {
    const std::vector<std::string> fixtures = {
        kMinimalInterference,
        R"json({
          "scenario": "interference",
          "seed": 7,
          "engine": "phase",
          "ensemble": 3,
          "state": {"kind": "phase", "lambda": 1.25, "n_a": 50, "n_b": 70,
                    "mode_a": {"kind": "plane_wave", "wavenumber": 0.5, "amplitude_scale": 1.2},
                    "mode_b": {"kind": "gaussian", "center": 0.0, "width": 30.0}},
          "plan": {"detections": [{"position": 0.0, "angle": 0.0, "width": 0.05},
                                   {"position": 1.0, "angle": 0.785, "width": 0.05}],
                   "forced": [1, null],
                   "grid_size": 64}
        })json",
        R"json({
          "scenario": "epr",
          "seed": 3,
          "engine": "lambda",
          "epr": {"n_a": 400, "n_b": 500, "m_a": 6, "probe_count": 12,
                  "detection_width": 0.1, "angle_cycle": [0.0, 1.5707963267948966],
                  "forced": [1, -1, null, 1, 1, -1], "probe_width": 0.04, "grid_size": 64,
                  "region_a": {"lo": -3.0, "hi": -1.0}, "region_b": {"lo": 2.0, "hi": 3.0},
                  "amplitude_scale": 0.5}
        })json",
        R"json({"scenario": "singlet", "seed": 5,
                "singlet": {"phi_1": 0.4, "phi_2": 1.7, "samples": 5000}})json",
        R"json({"scenario": "macroscopic_singlet", "seed": 6,
                "macroscopic_singlet": {"block_size": 10, "samples": 2000}})json",
        R"json({"scenario": "weighing", "seed": 9,
                "weighing": {"particles": 1000, "amp_left": 0.6,
                              "amp_right": [0.0, 0.8], "samples": 2000}})json",
        R"json({"scenario": "compare", "seed": 2,
                "state": {"n_a": 4000, "n_b": 4000},
                "plan": {"grid": {"count": 2, "region": {"lo": 0.0, "hi": 1.0}}}})json",
    };
    for (const std::string& text : fixtures) {
        const ConfigDocument doc = parse_config(text);
        const std::string emitted = emit_config(doc);
        const ConfigDocument reparsed = parse_config(emitted);
        CHECK(emit_config(reparsed) == emitted);
        CHECK(reparsed.scenario == doc.scenario);
        CHECK(reparsed.seed == doc.seed);
    }

    // Spot-check the phase-state fixture survived the trip intact.
    const ConfigDocument doc = parse_config(fixtures[1]);
    const ConfigDocument round = parse_config(emit_config(doc));
    CHECK(round.core.use_phase_state);
    CHECK(round.core.lambda == doctest::Approx(1.25));
    CHECK(round.core.engine == Engine::Phase);
    CHECK(round.ensemble == 3);
    CHECK(round.core.grid_size == 64);
    REQUIRE(round.core.forced.size() == 2);
    CHECK(round.core.forced[0] == +1);
    CHECK(!round.core.forced[1].has_value());
    CHECK(round.core.modes.u_a.kind() == SpatialMode::Kind::PlaneWave);
    CHECK(round.core.modes.v_b.kind() == SpatialMode::Kind::Gaussian);
}

TEST_CASE("strict parsing rejects anything off-schema with its path") {
    {
        const std::string text = R"json({"scenario": "interference", "sead": 1,
            "state": {"n_a": 10, "n_b": 10},
            "plan": {"grid": {"count": 2, "region": {"lo": 0.0, "hi": 1.0}}}})json";
        try {
            parse_config(text);
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            CHECK(e.kind() == ConfigError::Kind::UnknownField);
            CHECK(e.path() == "sead");
        }
    }
    {
        const std::string text = R"json({"scenario": "interference",
            "state": {"n_a": 10, "n_b": 10, "typo": 4},
            "plan": {"grid": {"count": 2, "region": {"lo": 0.0, "hi": 1.0}}}})json";
        try {
            parse_config(text);
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            CHECK(e.kind() == ConfigError::Kind::UnknownField);
            CHECK(e.path() == "state.typo");
        }
    }
    {
        const std::string text = R"json({"schema_version": "2", "scenario": "interference",
            "state": {"n_a": 10, "n_b": 10},
            "plan": {"grid": {"count": 2, "region": {"lo": 0.0, "hi": 1.0}}}})json";
        try {
            parse_config(text);
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            CHECK(e.kind() == ConfigError::Kind::SchemaVersionUnsupported);
        }
    }
    {
        // Overlapping detection windows are named by the offending pair.
        const std::string text = R"json({"scenario": "interference",
            "state": {"n_a": 10, "n_b": 10},
            "plan": {"detections": [{"position": 0.0, "angle": 0.0, "width": 0.2},
                                     {"position": 0.1, "angle": 0.5, "width": 0.2}]}})json";
        try {
            parse_config(text);
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            CHECK(e.kind() == ConfigError::Kind::InvariantViolation);
            CHECK(e.path() == "plan.detections[1]");
            CHECK(std::string(e.what()).find("overlap") != std::string::npos);
        }
    }
    CHECK_THROWS_AS(parse_config("not json at all"), ConfigError);
    CHECK_THROWS_AS(parse_config("[1, 2, 3]"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"json({"scenario": "interference"})json"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"json({"scenario": "mystery"})json"), ConfigError);
    CHECK_THROWS_AS(
        parse_config(R"json({"scenario": "interference", "seed": -4,
            "state": {"n_a": 1, "n_b": 1},
            "plan": {"grid": {"count": 1, "region": {"lo": 0.0, "hi": 1.0}}}})json"),
        ConfigError);
}

TEST_CASE("scenarios own their sections") {
    {
        const std::string text = R"json({"scenario": "interference",
            "state": {"n_a": 10, "n_b": 10},
            "plan": {"grid": {"count": 2, "region": {"lo": 0.0, "hi": 1.0}}},
            "weighing": {"particles": 5}})json";
        try {
            parse_config(text);
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            CHECK(e.path() == "weighing");
            CHECK(std::string(e.what()).find("not used") != std::string::npos);
        }
    }
    CHECK_THROWS_AS(
        parse_config(R"json({"scenario": "singlet", "engine": "exact",
                             "singlet": {"phi_1": 0.0, "phi_2": 0.0}})json"),
        ConfigError);
    CHECK_THROWS_AS(
        parse_config(R"json({"scenario": "compare", "engine": "exact",
            "state": {"n_a": 100, "n_b": 100},
            "plan": {"grid": {"count": 2, "region": {"lo": 0.0, "hi": 1.0}}}})json"),
        ConfigError);
    CHECK_THROWS_AS(
        parse_config(R"json({"scenario": "epr", "ensemble": 2,
                             "epr": {"n_a": 10, "n_b": 10, "m_a": 2}})json"),
        ConfigError);
}

TEST_CASE("plan and state shapes are vetted at parse time") {
    // Exactly one of detections and grid.
    CHECK_THROWS_AS(
        parse_config(R"json({"scenario": "interference",
            "state": {"n_a": 10, "n_b": 10},
            "plan": {"detections": [{"position": 0.0, "angle": 0.0, "width": 0.1}],
                     "grid": {"count": 1, "region": {"lo": 0.0, "hi": 1.0}}}})json"),
        ConfigError);
    CHECK_THROWS_AS(parse_config(R"json({"scenario": "interference",
            "state": {"n_a": 10, "n_b": 10}, "plan": {}})json"),
                    ConfigError);
    // Forced array must align with the plan.
    CHECK_THROWS_AS(
        parse_config(R"json({"scenario": "interference",
            "state": {"n_a": 10, "n_b": 10},
            "plan": {"grid": {"count": 3, "region": {"lo": 0.0, "hi": 1.0}},
                     "forced": [1, -1]}})json"),
        ConfigError);
    // Forced entries are 1, -1, or null.
    CHECK_THROWS_AS(
        parse_config(R"json({"scenario": "interference",
            "state": {"n_a": 10, "n_b": 10},
            "plan": {"grid": {"count": 1, "region": {"lo": 0.0, "hi": 1.0}},
                     "forced": [2]}})json"),
        ConfigError);
    // A fock state has no lambda; a phase state requires one.
    CHECK_THROWS_AS(
        parse_config(R"json({"scenario": "interference",
            "state": {"kind": "fock", "lambda": 0.4, "n_a": 10, "n_b": 10},
            "plan": {"grid": {"count": 1, "region": {"lo": 0.0, "hi": 1.0}}}})json"),
        ConfigError);
    CHECK_THROWS_AS(
        parse_config(R"json({"scenario": "interference",
            "state": {"kind": "phase", "n_a": 10, "n_b": 10},
            "plan": {"grid": {"count": 1, "region": {"lo": 0.0, "hi": 1.0}}}})json"),
        ConfigError);
    // Unknown mode kinds and bad mode parameters surface with paths.
    CHECK_THROWS_AS(
        parse_config(R"json({"scenario": "interference",
            "state": {"n_a": 10, "n_b": 10, "mode_a": {"kind": "vortex"}},
            "plan": {"grid": {"count": 1, "region": {"lo": 0.0, "hi": 1.0}}}})json"),
        ConfigError);
    CHECK_THROWS_AS(
        parse_config(R"json({"scenario": "interference",
            "state": {"n_a": 10, "n_b": 10,
                      "mode_a": {"kind": "gaussian", "center": 0.0, "width": -1.0}},
            "plan": {"grid": {"count": 1, "region": {"lo": 0.0, "hi": 1.0}}}})json"),
        ConfigError);
}

TEST_CASE("compare configs take the extra enumeration guards") {
    CHECK_THROWS_AS(
        parse_config(R"json({"scenario": "compare",
            "state": {"kind": "phase", "lambda": 0.0, "n_a": 1000, "n_b": 1000},
            "plan": {"grid": {"count": 2, "region": {"lo": 0.0, "hi": 1.0}}}})json"),
        ConfigError);
    CHECK_THROWS_AS(
        parse_config(R"json({"scenario": "compare",
            "state": {"n_a": 100000, "n_b": 100000},
            "plan": {"grid": {"count": 13, "region": {"lo": 0.0, "hi": 13.0}}}})json"),
        ConfigError);
    CHECK_THROWS_AS(
        parse_config(R"json({"scenario": "compare",
            "state": {"n_a": 50, "n_b": 50},
            "plan": {"grid": {"count": 8, "region": {"lo": 0.0, "hi": 8.0}}}})json"),
        ConfigError);
}

TEST_CASE("the cli writes deterministic artifacts") {
    const fs::path dir1 = fresh_dir("run1");
    const fs::path dir2 = fresh_dir("run2");
    const fs::path cfg = dir1 / "c.json";
    write_file(cfg, kMinimalInterference);

    const CliResult r1 = run_cli({"simulate", "--config", cfg.string(), "--out", dir1.string()});
    CHECK(r1.code == 0);
    CHECK(r1.out.find("wrote") != std::string::npos);
    REQUIRE(fs::exists(dir1 / "interference_seed1.csv"));
    REQUIRE(fs::exists(dir1 / "interference_seed1.json"));

    const CliResult r2 = run_cli({"simulate", "--config", cfg.string(), "--out", dir2.string()});
    CHECK(r2.code == 0);
    CHECK(slurp(dir1 / "interference_seed1.csv") == slurp(dir2 / "interference_seed1.csv"));
    CHECK(slurp(dir1 / "interference_seed1.json") == slurp(dir2 / "interference_seed1.json"));

    const std::string csv = slurp(dir1 / "interference_seed1.csv");
    CHECK(csv.rfind("m,R,circular_std,conditional_p\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 11);  // header + 10 steps

    const json report = json::parse(slurp(dir1 / "interference_seed1.json"));
    CHECK(report.at("scenario") == "interference");
    CHECK(report.at("master_seed") == 1);
    CHECK(report.at("steps").size() == 10);

    // Seed override renames the artifacts and changes the stream.
    const CliResult r3 = run_cli({"simulate", "--config", cfg.string(), "--out", dir1.string(),
                                  "--seed", "9"});
    CHECK(r3.code == 0);
    REQUIRE(fs::exists(dir1 / "interference_seed9.json"));
    const json report9 = json::parse(slurp(dir1 / "interference_seed9.json"));
    CHECK(report9.at("master_seed") == 9);

    // Format restriction writes exactly one artifact.
    const fs::path dir3 = fresh_dir("run3");
    const CliResult r4 = run_cli({"simulate", "--config", cfg.string(), "--out", dir3.string(),
                                  "--format", "csv"});
    CHECK(r4.code == 0);
    CHECK(fs::exists(dir3 / "interference_seed1.csv"));
    CHECK(!fs::exists(dir3 / "interference_seed1.json"));
    const CliResult r5 = run_cli({"simulate", "--config", cfg.string(), "--out", dir3.string(),
                                  "--format", "json"});
    CHECK(r5.code == 0);
    CHECK(fs::exists(dir3 / "interference_seed1.json"));
    CHECK(slurp(dir3 / "interference_seed1.csv") == csv);
}

TEST_CASE("every subcommand produces its artifacts") {
    const fs::path dir = fresh_dir("subcommands");

    write_file(dir / "posterior.json", kMinimalInterference);
    const CliResult rp = run_cli({"posterior", "--config", (dir / "posterior.json").string(),
                                  "--out", dir.string()});
    CHECK(rp.code == 0);
    const std::string pcsv = slurp(dir / "posterior_seed1.csv");
    CHECK(pcsv.rfind("lambda,weight\n", 0) == 0);
    CHECK(std::count(pcsv.begin(), pcsv.end(), '\n') == 257);  // header + 256 nodes
    CHECK(json::parse(slurp(dir / "posterior_seed1.json")).at("scenario") == "posterior");

    write_file(dir / "epr.json", R"json({"scenario": "epr", "seed": 4,
        "epr": {"n_a": 300, "n_b": 300, "m_a": 8, "probe_count": 20}})json");
    const CliResult re = run_cli({"epr", "--config", (dir / "epr.json").string(),
                                  "--out", dir.string()});
    CHECK(re.code == 0);
    CHECK(slurp(dir / "epr_seed4.csv")
              .rfind("m_A,phi_lambda,B_polarization,summed_spin_expectation\n", 0) == 0);
    CHECK(json::parse(slurp(dir / "epr_seed4.json")).at("steps").size() == 8);

    write_file(dir / "singlet.json", R"json({"scenario": "singlet", "seed": 5,
        "singlet": {"phi_1": 0.4, "phi_2": 1.7, "samples": 5000}})json");
    CHECK(run_cli({"singlet", "--config", (dir / "singlet.json").string(),
                   "--out", dir.string()})
              .code == 0);
    CHECK(slurp(dir / "singlet_seed5.csv")
              .rfind("phi_1,phi_2,samples,E_closed_form,E_sampled\n", 0) == 0);

    write_file(dir / "macro.json", R"json({"scenario": "macroscopic_singlet", "seed": 6,
        "macroscopic_singlet": {"block_size": 10, "samples": 2000}})json");
    CHECK(run_cli({"singlet", "--config", (dir / "macro.json").string(),
                   "--out", dir.string()})
              .code == 0);
    CHECK(fs::exists(dir / "macroscopic_singlet_seed6.json"));

    write_file(dir / "weigh.json", R"json({"scenario": "weighing", "seed": 9,
        "weighing": {"particles": 1000, "amp_left": 0.6, "amp_right": [0.0, 0.8],
                      "samples": 2000}})json");
    CHECK(run_cli({"weigh", "--config", (dir / "weigh.json").string(),
                   "--out", dir.string()})
              .code == 0);
    CHECK(slurp(dir / "weighing_seed9.csv")
              .rfind("D,count,frequency,mean_theory,variance_theory\n", 0) == 0);

    write_file(dir / "compare.json", R"json({"scenario": "compare", "seed": 2,
        "state": {"n_a": 4000, "n_b": 4000},
        "plan": {"grid": {"count": 2, "region": {"lo": 0.0, "hi": 1.0}}}})json");
    CHECK(run_cli({"compare", "--config", (dir / "compare.json").string(),
                   "--out", dir.string()})
              .code == 0);
    const std::string ccsv = slurp(dir / "compare_seed2.csv");
    CHECK(ccsv.rfind("outcomes,p_exact,p_lambda,relative_error\n", 0) == 0);
    CHECK(std::count(ccsv.begin(), ccsv.end(), '\n') == 5);  // header + 4 strings
}

TEST_CASE("exit codes separate config problems from runtime failures") {
    const fs::path dir = fresh_dir("codes");

    // Missing file and malformed config: 1.
    CHECK(run_cli({"simulate", "--config", (dir / "absent.json").string()}).code == 1);
    write_file(dir / "bad.json", "{ not json");
    CHECK(run_cli({"simulate", "--config", (dir / "bad.json").string()}).code == 1);
    write_file(dir / "sead.json", R"json({"scenario": "interference", "sead": 1,
        "state": {"n_a": 10, "n_b": 10},
        "plan": {"grid": {"count": 2, "region": {"lo": 0.0, "hi": 1.0}}}})json");
    const CliResult rs = run_cli({"simulate", "--config", (dir / "sead.json").string()});
    CHECK(rs.code == 1);
    CHECK(rs.err.find("sead") != std::string::npos);

    // Subcommand and scenario must agree: 1.
    write_file(dir / "weigh.json", R"json({"scenario": "weighing",
        "weighing": {"particles": 10, "samples": 10}})json");
    const CliResult rw = run_cli({"simulate", "--config", (dir / "weigh.json").string(),
                                  "--out", dir.string()});
    CHECK(rw.code == 1);
    CHECK(rw.err.find("expects scenario") != std::string::npos);

    // A forced outcome that cannot occur is a runtime failure: 2.
    write_file(dir / "impossible.json", R"json({"scenario": "interference", "seed": 1,
        "state": {"n_a": 1, "n_b": 1},
        "plan": {"detections": [{"position": 0.0, "angle": 0.0, "width": 0.05},
                                 {"position": 1.0, "angle": 0.0, "width": 0.05}],
                 "forced": [1, -1]}})json");
    const CliResult ri = run_cli({"simulate", "--config", (dir / "impossible.json").string(),
                                  "--out", dir.string()});
    CHECK(ri.code == 2);
    CHECK(!ri.err.empty());

    // Unwritable output directory: runtime failure 2.
    write_file(dir / "ok.json", kMinimalInterference);
    CHECK(run_cli({"simulate", "--config", (dir / "ok.json").string(),
                   "--out", "/proc/becphase_denied"})
              .code == 2);

    // Argument errors from the parser: 1.
    CHECK(run_cli({"simulate"}).code == 1);                       // missing --config
    CHECK(run_cli({"mystery", "--config", "x"}).code == 1);       // unknown subcommand
    CHECK(run_cli({}).code == 1);                                 // no subcommand
    CHECK(run_cli({"simulate", "--config", (dir / "ok.json").string(), "--format", "xml"}).code ==
          1);
}

TEST_CASE("the output directory falls back to the environment") {
    const fs::path dir = fresh_dir("envdir");
    const fs::path cfg = dir / "c.json";
    write_file(cfg, kMinimalInterference);

    REQUIRE(::setenv("BECPHASE_OUT_DIR", (dir / "from_env").c_str(), 1) == 0);
    const CliResult r = run_cli({"simulate", "--config", cfg.string()});
    ::unsetenv("BECPHASE_OUT_DIR");
    CHECK(r.code == 0);
    CHECK(fs::exists(dir / "from_env" / "interference_seed1.csv"));
}

TEST_CASE("every emitted report field is documented in the shipped schema") {
    const std::set<std::string> fields = documented_fields("report_schema.json");

    {
        ScenarioConfig cfg = parse_config(kMinimalInterference).core;
        cfg.master_seed = 1;
        check_documented(interference_json(run_interference(cfg, 0)), fields);
    }
    {
        // Phase state, forced plan, explicit grid size, ensemble summary, and
        // the remaining mode families.
        const ConfigDocument doc = parse_config(R"json({
          "scenario": "interference", "seed": 7, "engine": "phase", "ensemble": 3,
          "state": {"kind": "phase", "lambda": 1.25, "n_a": 50, "n_b": 70,
                    "mode_a": {"kind": "plane_wave", "wavenumber": 0.5},
                    "mode_b": {"kind": "region_indicator",
                                "intervals": [{"lo": -4.0, "hi": 4.0}]}},
          "plan": {"detections": [{"position": 0.0, "angle": 0.0, "width": 0.05},
                                   {"position": 1.0, "angle": 0.785, "width": 0.05}],
                   "forced": [1, null], "grid_size": 64}
        })json");
        check_documented(interference_json(run_interference_ensemble(doc.core)), fields);
    }
    {
        const ConfigDocument doc = parse_config(R"json({
          "scenario": "interference", "seed": 2,
          "state": {"n_a": 40, "n_b": 40,
                    "mode_a": {"kind": "gaussian", "center": 0.0, "width": 20.0}},
          "plan": {"grid": {"count": 3, "region": {"lo": -1.0, "hi": 1.0}}}
        })json");
        check_documented(interference_json(run_interference(doc.core, 0)), fields);
    }
    {
        EprConfig cfg;
        cfg.n_a = 200;
        cfg.n_b = 200;
        cfg.m_a = 4;
        cfg.detection_width = 0.2;
        cfg.angle_cycle = {0.3, 1.1};
        cfg.forced = {+1, -1, +1, std::nullopt};
        cfg.probe_count = 10;
        cfg.probe_width = 0.05;
        cfg.grid_size = 64;
        check_documented(epr_json(run_epr(cfg, 11)), fields);
    }
    check_documented(singlet_json(run_singlet(0.4, 1.7, 2000, 5)), fields);
    check_documented(macroscopic_singlet_json(run_macroscopic_singlet(10, 500, 6)), fields);
    check_documented(
        weighing_json(weighing_distribution(200, {0.6, 0.0}, {0.0, 0.8}, 500, 9)), fields);
    {
        const ConfigDocument doc = parse_config(R"json({"scenario": "compare", "seed": 2,
            "state": {"n_a": 4000, "n_b": 4000},
            "plan": {"grid": {"count": 2, "region": {"lo": 0.0, "hi": 1.0}}}})json");
        check_documented(compare_json(compare_engines(doc.core), doc.core), fields);
    }
}

TEST_CASE("every emitted config field is documented in the shipped schema") {
    const std::set<std::string> fields = documented_fields("config_schema.json");
    const std::vector<std::string> fixtures = {
        kMinimalInterference,
        R"json({
          "scenario": "interference", "seed": 7, "engine": "phase", "ensemble": 3,
          "state": {"kind": "phase", "lambda": 1.25, "n_a": 50, "n_b": 70,
                    "mode_a": {"kind": "plane_wave", "wavenumber": 0.5},
                    "mode_b": {"kind": "gaussian", "center": 0.0, "width": 30.0}},
          "plan": {"detections": [{"position": 0.0, "angle": 0.0, "width": 0.05},
                                   {"position": 1.0, "angle": 0.785, "width": 0.05}],
                   "forced": [1, null], "grid_size": 64}
        })json",
        R"json({
          "scenario": "epr", "seed": 3, "engine": "lambda",
          "epr": {"n_a": 400, "n_b": 500, "m_a": 6, "probe_count": 12,
                  "detection_width": 0.1, "angle_cycle": [0.0, 1.57],
                  "forced": [1, -1, null, 1, 1, -1], "probe_width": 0.04, "grid_size": 64,
                  "region_a": {"lo": -3.0, "hi": -1.0}, "region_b": {"lo": 2.0, "hi": 3.0},
                  "amplitude_scale": 0.5}
        })json",
        R"json({"scenario": "singlet", "seed": 5,
                "singlet": {"phi_1": 0.4, "phi_2": 1.7, "samples": 5000}})json",
        R"json({"scenario": "macroscopic_singlet", "seed": 6,
                "macroscopic_singlet": {"block_size": 10, "samples": 2000}})json",
        R"json({"scenario": "weighing", "seed": 9,
                "weighing": {"particles": 1000, "amp_left": 0.6,
                              "amp_right": [0.0, 0.8], "samples": 2000}})json",
        R"json({"scenario": "compare", "seed": 2,
                "state": {"n_a": 4000, "n_b": 4000},
                "plan": {"grid": {"count": 2, "region": {"lo": 0.0, "hi": 1.0}}}})json",
    };
    for (const std::string& text : fixtures) {
        // Both the accepted input form and the canonical emitted form.
        check_documented(json::parse(text), fields);
        check_documented(json::parse(emit_config(parse_config(text))), fields);
    }
    // The region-indicator mode and grid plan keys on the input side.
    check_documented(json::parse(R"json({
        "scenario": "interference", "seed": 1,
        "state": {"n_a": 10, "n_b": 10,
                  "mode_a": {"kind": "region_indicator", "amplitude_scale": 0.5,
                              "intervals": [{"lo": -1.0, "hi": 1.0}]},
                  "mode_b": {"kind": "uniform"}},
        "plan": {"grid": {"count": 2, "region": {"lo": -0.5, "hi": 0.5},
                           "angles": [0.0, 1.2], "width": 0.1}}})json"),
                     fields);
}
