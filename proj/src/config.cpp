#include "becphase/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "becphase/numeric.hpp"
#include "becphase/report_io.hpp"
#include "json_detail.hpp"

namespace becphase {

namespace {

using nlohmann::json;
using Kind = ConfigError::Kind;

std::string join_path(const std::string& base, const std::string& key) {
    return base.empty() ? key : base + "." + key;
}

[[noreturn]] void bad(const std::string& path, const std::string& message) {
    throw ConfigError(Kind::InvariantViolation, path, message);
}

void check_object(const json& v, const std::string& path) {
    if (!v.is_object()) bad(path, "expected an object");
}

void check_keys(const json& obj, const std::string& path,
                std::initializer_list<const char*> allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        const bool known = std::any_of(allowed.begin(), allowed.end(),
                                       [&](const char* k) { return it.key() == k; });
        if (!known)
            throw ConfigError(Kind::UnknownField, join_path(path, it.key()), "unknown field");
    }
}

const json& require(const json& obj, const std::string& path, const char* key) {
    const auto it = obj.find(key);
    if (it == obj.end()) bad(join_path(path, key), "required field is missing");
    return *it;
}

double get_double(const json& v, const std::string& path) {
    if (!v.is_number()) bad(path, "expected a number");
    return v.get<double>();
}

std::int64_t get_int(const json& v, const std::string& path) {
    if (!v.is_number_integer() && !v.is_number_unsigned()) bad(path, "expected an integer");
    return v.get<std::int64_t>();
}

std::uint64_t get_u64(const json& v, const std::string& path) {
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return v.get<std::uint64_t>();
    bad(path, "expected a nonnegative integer");
}

std::string get_string(const json& v, const std::string& path) {
    if (!v.is_string()) bad(path, "expected a string");
    return v.get<std::string>();
}

double field_double(const json& obj, const std::string& path, const char* key,
                    double fallback) {
    const auto it = obj.find(key);
    return it == obj.end() ? fallback : get_double(*it, join_path(path, key));
}

std::int64_t field_int(const json& obj, const std::string& path, const char* key,
                       std::int64_t fallback) {
    const auto it = obj.find(key);
    return it == obj.end() ? fallback : get_int(*it, join_path(path, key));
}

Interval parse_interval(const json& v, const std::string& path) {
    check_object(v, path);
    check_keys(v, path, {"lo", "hi"});
    return Interval{get_double(require(v, path, "lo"), path + ".lo"),
                    get_double(require(v, path, "hi"), path + ".hi")};
}

SpatialMode parse_mode(const json& v, const std::string& path) {
    check_object(v, path);
    const std::string kind = get_string(require(v, path, "kind"), path + ".kind");
    const double scale = field_double(v, path, "amplitude_scale", 1.0);
    try {
        if (kind == "uniform") {
            check_keys(v, path, {"kind", "amplitude_scale"});
            return SpatialMode::uniform(scale);
        }
        if (kind == "gaussian") {
            check_keys(v, path, {"kind", "amplitude_scale", "center", "width"});
            return SpatialMode::gaussian(
                get_double(require(v, path, "center"), path + ".center"),
                get_double(require(v, path, "width"), path + ".width"), scale);
        }
        if (kind == "plane_wave") {
            check_keys(v, path, {"kind", "amplitude_scale", "wavenumber"});
            return SpatialMode::plane_wave(
                get_double(require(v, path, "wavenumber"), path + ".wavenumber"), scale);
        }
        if (kind == "region_indicator") {
            check_keys(v, path, {"kind", "amplitude_scale", "intervals"});
            const json& arr = require(v, path, "intervals");
            if (!arr.is_array()) bad(path + ".intervals", "expected an array");
            std::vector<Interval> ivs;
            for (std::size_t i = 0; i < arr.size(); ++i)
                ivs.push_back(
                    parse_interval(arr[i], path + ".intervals[" + std::to_string(i) + "]"));
            return SpatialMode::region_indicator(std::move(ivs), scale);
        }
    } catch (const std::invalid_argument& e) {
        bad(path, e.what());
    }
    bad(path + ".kind", "unknown mode kind '" + kind + "'");
}

std::vector<std::optional<int>> parse_forced(const json& v, const std::string& path,
                                             std::size_t plan_size) {
    if (!v.is_array()) bad(path, "expected an array");
    if (v.size() != plan_size)
        bad(path, "forced outcomes must align one-to-one with the detections");
    std::vector<std::optional<int>> forced;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const std::string entry_path = path + "[" + std::to_string(i) + "]";
        if (v[i].is_null()) {
            forced.emplace_back(std::nullopt);
            continue;
        }
        const std::int64_t e = get_int(v[i], entry_path);
        if (e != 1 && e != -1) bad(entry_path, "forced outcomes are 1, -1, or null");
        forced.emplace_back(static_cast<int>(e));
    }
    return forced;
}

void parse_state(const json& v, ScenarioConfig& core) {
    const std::string path = "state";
    check_object(v, path);
    check_keys(v, path, {"kind", "lambda", "n_a", "n_b", "mode_a", "mode_b"});
    const std::string kind = v.contains("kind") ? get_string(v["kind"], "state.kind") : "fock";
    if (kind == "phase") {
        core.use_phase_state = true;
        core.lambda = get_double(require(v, path, "lambda"), "state.lambda");
    } else if (kind == "fock") {
        core.use_phase_state = false;
        if (v.contains("lambda"))
            bad("state.lambda", "only a phase state carries a definite lambda");
    } else {
        bad("state.kind", "expected 'fock' or 'phase'");
    }
    core.n_a = get_int(require(v, path, "n_a"), "state.n_a");
    core.n_b = get_int(require(v, path, "n_b"), "state.n_b");
    core.modes.u_a =
        v.contains("mode_a") ? parse_mode(v["mode_a"], "state.mode_a") : SpatialMode::uniform();
    core.modes.v_b =
        v.contains("mode_b") ? parse_mode(v["mode_b"], "state.mode_b") : SpatialMode::uniform();
}

void parse_plan(const json& v, ScenarioConfig& core) {
    const std::string path = "plan";
    check_object(v, path);
    check_keys(v, path, {"detections", "grid", "forced", "grid_size"});
    const bool has_detections = v.contains("detections");
    const bool has_grid = v.contains("grid");
    if (has_detections == has_grid)
        bad(path, "give exactly one of 'detections' or 'grid'");

    if (has_detections) {
        const json& arr = v["detections"];
        if (!arr.is_array()) bad("plan.detections", "expected an array");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const std::string sp = "plan.detections[" + std::to_string(i) + "]";
            check_object(arr[i], sp);
            check_keys(arr[i], sp, {"position", "angle", "width"});
            DetectionSpec spec;
            spec.position = get_double(require(arr[i], sp, "position"), sp + ".position");
            spec.angle = get_double(require(arr[i], sp, "angle"), sp + ".angle");
            spec.width = get_double(require(arr[i], sp, "width"), sp + ".width");
            core.detections.push_back(spec);
        }
    } else {
        const json& g = v["grid"];
        const std::string gp = "plan.grid";
        check_object(g, gp);
        check_keys(g, gp, {"count", "region", "angles", "width"});
        const std::int64_t count = get_int(require(g, gp, "count"), gp + ".count");
        if (count < 1) bad(gp + ".count", "need at least one detection");
        const Interval region = parse_interval(require(g, gp, "region"), gp + ".region");
        if (!(region.hi > region.lo)) bad(gp + ".region", "empty region");
        std::vector<double> angles{0.0, pi / 4.0, pi / 2.0, 3.0 * pi / 4.0};
        if (g.contains("angles")) {
            if (!g["angles"].is_array() || g["angles"].empty())
                bad(gp + ".angles", "expected a nonempty array of angles");
            angles.clear();
            for (std::size_t i = 0; i < g["angles"].size(); ++i)
                angles.push_back(get_double(g["angles"][i],
                                            gp + ".angles[" + std::to_string(i) + "]"));
        }
        const double spacing = region.length() / static_cast<double>(count);
        const double width = field_double(g, gp, "width", spacing / 2.0);
        for (std::int64_t i = 0; i < count; ++i) {
            DetectionSpec spec;
            spec.position = region.lo + (static_cast<double>(i) + 0.5) * spacing;
            spec.angle = angles[static_cast<std::size_t>(i) % angles.size()];
            spec.width = width;
            core.detections.push_back(spec);
        }
    }

    if (v.contains("forced"))
        core.forced = parse_forced(v["forced"], "plan.forced", core.detections.size());
    const std::int64_t grid_size = field_int(v, path, "grid_size", 0);
    if (grid_size < 0) bad("plan.grid_size", "expected a nonnegative integer");
    core.grid_size = static_cast<int>(grid_size);
}

Engine parse_engine(const json& v, const std::string& path) {
    const std::string name = get_string(v, path);
    if (name == "exact") return Engine::Exact;
    if (name == "lambda") return Engine::LambdaIntegral;
    if (name == "phase") return Engine::Phase;
    bad(path, "expected 'exact', 'lambda', or 'phase'");
}

EprConfig parse_epr_section(const json& v) {
    const std::string path = "epr";
    check_object(v, path);
    check_keys(v, path,
               {"n_a", "n_b", "region_a", "region_b", "amplitude_scale", "m_a",
                "detection_width", "angle_cycle", "forced", "probe_count", "probe_width",
                "grid_size"});
    EprConfig cfg;
    cfg.n_a = get_int(require(v, path, "n_a"), "epr.n_a");
    cfg.n_b = get_int(require(v, path, "n_b"), "epr.n_b");
    if (v.contains("region_a")) cfg.geometry.region_a = parse_interval(v["region_a"], "epr.region_a");
    if (v.contains("region_b")) cfg.geometry.region_b = parse_interval(v["region_b"], "epr.region_b");
    cfg.geometry.amplitude_scale = field_double(v, path, "amplitude_scale", 1.0);
    if (!(cfg.geometry.amplitude_scale > 0.0))
        bad("epr.amplitude_scale", "expected a positive amplitude");
    cfg.m_a = static_cast<int>(get_int(require(v, path, "m_a"), "epr.m_a"));
    cfg.detection_width = field_double(v, path, "detection_width", 0.0);
    if (v.contains("angle_cycle")) {
        if (!v["angle_cycle"].is_array() || v["angle_cycle"].empty())
            bad("epr.angle_cycle", "expected a nonempty array of angles");
        for (std::size_t i = 0; i < v["angle_cycle"].size(); ++i)
            cfg.angle_cycle.push_back(get_double(
                v["angle_cycle"][i], "epr.angle_cycle[" + std::to_string(i) + "]"));
    }
    if (v.contains("forced"))
        cfg.forced = parse_forced(v["forced"], "epr.forced",
                                  static_cast<std::size_t>(std::max(cfg.m_a, 0)));
    cfg.probe_count = static_cast<int>(field_int(v, path, "probe_count", 1000));
    cfg.probe_width = field_double(v, path, "probe_width", 0.0);
    cfg.grid_size = static_cast<int>(field_int(v, path, "grid_size", 0));

    if (cfg.n_a < 1 || cfg.n_b < 1) bad("epr.n_a", "both condensates must be occupied");
    if (cfg.m_a < 1) bad("epr.m_a", "need at least one A detection");
    if (cfg.probe_count < 1) bad("epr.probe_count", "need at least one probe");
    if (!(cfg.geometry.region_a.hi > cfg.geometry.region_a.lo))
        bad("epr.region_a", "empty region");
    if (!(cfg.geometry.region_b.hi > cfg.geometry.region_b.lo))
        bad("epr.region_b", "empty region");
    if (cfg.geometry.region_a.overlaps(cfg.geometry.region_b))
        bad("epr.region_b", "regions A and B must be disjoint");
    return cfg;
}

SingletSection parse_singlet_section(const json& v) {
    const std::string path = "singlet";
    check_object(v, path);
    check_keys(v, path, {"phi_1", "phi_2", "samples"});
    SingletSection s;
    s.phi_1 = get_double(require(v, path, "phi_1"), "singlet.phi_1");
    s.phi_2 = get_double(require(v, path, "phi_2"), "singlet.phi_2");
    s.samples = field_int(v, path, "samples", s.samples);
    if (s.samples < 1) bad("singlet.samples", "need at least one sample");
    return s;
}

MacroscopicSingletSection parse_macroscopic_section(const json& v) {
    const std::string path = "macroscopic_singlet";
    check_object(v, path);
    check_keys(v, path, {"block_size", "samples"});
    MacroscopicSingletSection s;
    s.block_size = get_int(require(v, path, "block_size"), "macroscopic_singlet.block_size");
    s.samples = field_int(v, path, "samples", s.samples);
    if (s.block_size < 1) bad("macroscopic_singlet.block_size", "need at least one pair");
    if (s.samples < 1) bad("macroscopic_singlet.samples", "need at least one sample");
    return s;
}

std::complex<double> parse_amp(const json& v, const std::string& path) {
    if (v.is_number()) return {v.get<double>(), 0.0};
    if (v.is_array() && v.size() == 2)
        return {get_double(v[0], path + "[0]"), get_double(v[1], path + "[1]")};
    bad(path, "expected a number or a [re, im] pair");
}

WeighingSection parse_weighing_section(const json& v) {
    const std::string path = "weighing";
    check_object(v, path);
    check_keys(v, path, {"particles", "amp_left", "amp_right", "samples"});
    WeighingSection s;
    s.particles = get_int(require(v, path, "particles"), "weighing.particles");
    if (v.contains("amp_left")) s.amp_left = parse_amp(v["amp_left"], "weighing.amp_left");
    if (v.contains("amp_right")) s.amp_right = parse_amp(v["amp_right"], "weighing.amp_right");
    s.samples = field_int(v, path, "samples", s.samples);
    if (s.particles < 1) bad("weighing.particles", "need at least one particle");
    if (s.samples < 1) bad("weighing.samples", "need at least one sample");
    if (!(std::norm(s.amp_left) + std::norm(s.amp_right) > 0.0))
        bad("weighing.amp_left", "amplitudes must not both vanish");
    return s;
}

void forbid(const json& root, const std::string& scenario,
            std::initializer_list<const char*> keys) {
    for (const char* k : keys) {
        if (root.contains(k))
            bad(k, std::string("not used by scenario '") + scenario + "'");
    }
}

}  // namespace

ConfigDocument parse_config(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(Kind::InvariantViolation, "", std::string("not valid JSON: ") + e.what());
    }
    check_object(root, "");
    check_keys(root, "",
               {"schema_version", "scenario", "engine", "seed", "ensemble", "state", "plan",
                "epr", "singlet", "macroscopic_singlet", "weighing"});

    ConfigDocument doc;
    if (root.contains("schema_version")) {
        if (!root["schema_version"].is_string() || root["schema_version"] != "1")
            throw ConfigError(Kind::SchemaVersionUnsupported, "schema_version",
                              "this reader understands schema_version \"1\"");
        doc.schema_version = "1";
    }
    doc.scenario = get_string(require(root, "", "scenario"), "scenario");
    static const char* kScenarios[] = {"interference", "epr",     "singlet",
                                       "macroscopic_singlet",     "weighing", "compare"};
    if (std::none_of(std::begin(kScenarios), std::end(kScenarios),
                     [&](const char* s) { return doc.scenario == s; }))
        bad("scenario",
            "expected one of interference, epr, singlet, macroscopic_singlet, weighing, compare");

    if (root.contains("seed")) doc.seed = get_u64(root["seed"], "seed");

    if (doc.scenario == "interference" || doc.scenario == "compare") {
        forbid(root, doc.scenario, {"epr", "singlet", "macroscopic_singlet", "weighing"});
        parse_state(require(root, "", "state"), doc.core);
        parse_plan(require(root, "", "plan"), doc.core);
        doc.core.master_seed = doc.seed;

        if (doc.scenario == "compare") {
            forbid(root, doc.scenario, {"engine", "ensemble"});
            if (doc.core.use_phase_state)
                bad("state.kind", "comparison needs a fock state (no definite lambda)");
            doc.core.engine = Engine::Exact;
            const std::int64_t m = static_cast<std::int64_t>(doc.core.detections.size());
            if (m > 12)
                bad("plan.detections", "comparison enumerates 2^m outcome strings; keep m <= 12");
            if (m > std::min(doc.core.n_a, doc.core.n_b) / 10)
                bad("plan.detections",
                    "the lambda side of the comparison needs m <= min(n_a, n_b)/10");
        } else {
            if (root.contains("ensemble")) {
                doc.ensemble = get_int(root["ensemble"], "ensemble");
                if (doc.ensemble < 1) bad("ensemble", "need at least one run");
            }
            doc.core.ensemble_size = doc.ensemble;
            doc.core.engine = doc.core.use_phase_state ? Engine::Phase : Engine::Exact;
            if (root.contains("engine"))
                doc.core.engine = parse_engine(root["engine"], "engine");
        }

        ensure_valid(doc.core);
        return doc;
    }

    if (doc.scenario == "epr") {
        forbid(root, doc.scenario,
               {"state", "plan", "ensemble", "singlet", "macroscopic_singlet", "weighing"});
        doc.epr = parse_epr_section(require(root, "", "epr"));
        if (root.contains("engine")) doc.epr->engine = parse_engine(root["engine"], "engine");
        if (doc.epr->engine == Engine::Phase)
            bad("engine", "the EPR scenario studies Fock-state emergence; use exact or lambda");
        if (doc.epr->engine == Engine::Exact && doc.epr->m_a > doc.epr->n_a + doc.epr->n_b)
            bad("epr.m_a", "more detections than particles");
        if (doc.epr->engine == Engine::LambdaIntegral &&
            static_cast<std::int64_t>(doc.epr->m_a) + 1 >
                std::min(doc.epr->n_a, doc.epr->n_b) / 10)
            bad("epr.m_a", "the lambda engine needs m_a + 1 <= min(n_a, n_b)/10");
        return doc;
    }

    if (doc.scenario == "singlet") {
        forbid(root, doc.scenario,
               {"engine", "ensemble", "state", "plan", "epr", "macroscopic_singlet", "weighing"});
        doc.singlet = parse_singlet_section(require(root, "", "singlet"));
        return doc;
    }
    if (doc.scenario == "macroscopic_singlet") {
        forbid(root, doc.scenario,
               {"engine", "ensemble", "state", "plan", "epr", "singlet", "weighing"});
        doc.macroscopic_singlet = parse_macroscopic_section(require(root, "", "macroscopic_singlet"));
        return doc;
    }
    forbid(root, doc.scenario,
           {"engine", "ensemble", "state", "plan", "epr", "singlet", "macroscopic_singlet"});
    doc.weighing = parse_weighing_section(require(root, "", "weighing"));
    return doc;
}

std::string emit_config(const ConfigDocument& doc) {
    json j;
    j["schema_version"] = doc.schema_version;
    j["scenario"] = doc.scenario;
    j["seed"] = doc.seed;
    if (doc.scenario == "interference") {
        j["engine"] = engine_name(doc.core.engine);
        j["ensemble"] = doc.ensemble;
        j["state"] = detail::state_json(doc.core);
        j["plan"] = detail::plan_json(doc.core);
    } else if (doc.scenario == "compare") {
        j["state"] = detail::state_json(doc.core);
        j["plan"] = detail::plan_json(doc.core);
    } else if (doc.scenario == "epr") {
        j["engine"] = engine_name(doc.epr->engine);
        j["epr"] = detail::epr_section_json(*doc.epr);
    } else if (doc.scenario == "singlet") {
        j["singlet"] = json{{"phi_1", doc.singlet->phi_1},
                            {"phi_2", doc.singlet->phi_2},
                            {"samples", doc.singlet->samples}};
    } else if (doc.scenario == "macroscopic_singlet") {
        j["macroscopic_singlet"] = json{{"block_size", doc.macroscopic_singlet->block_size},
                                        {"samples", doc.macroscopic_singlet->samples}};
    } else {
        j["weighing"] =
            json{{"particles", doc.weighing->particles},
                 {"amp_left", json::array({doc.weighing->amp_left.real(),
                                           doc.weighing->amp_left.imag()})},
                 {"amp_right", json::array({doc.weighing->amp_right.real(),
                                            doc.weighing->amp_right.imag()})},
                 {"samples", doc.weighing->samples}};
    }
    return j.dump(2) + "\n";
}

namespace {

struct CliOptions {
    std::string subcommand;
    std::string config_path;
    std::string out_dir;
    std::string format;  // "", "csv", "json"
    std::uint64_t seed = 0;
    bool seed_given = false;
};

std::string expected_scenarios(const std::string& subcommand) {
    if (subcommand == "simulate" || subcommand == "posterior") return "interference";
    if (subcommand == "weigh") return "weighing";
    if (subcommand == "singlet") return "singlet or macroscopic_singlet";
    return subcommand;
}

bool subcommand_accepts(const std::string& subcommand, const std::string& scenario) {
    if (subcommand == "simulate" || subcommand == "posterior")
        return scenario == "interference";
    if (subcommand == "weigh") return scenario == "weighing";
    if (subcommand == "singlet")
        return scenario == "singlet" || scenario == "macroscopic_singlet";
    return subcommand == scenario;
}

int execute(const CliOptions& opt) {
    std::ifstream in(opt.config_path, std::ios::binary);
    if (!in) {
        std::cerr << "error: cannot read config file " << opt.config_path << "\n";
        return 1;
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();

    ConfigDocument doc = parse_config(buffer.str());
    if (opt.seed_given) {
        doc.seed = opt.seed;
        doc.core.master_seed = opt.seed;
    }
    if (!subcommand_accepts(opt.subcommand, doc.scenario))
        throw ConfigError(Kind::InvariantViolation, "scenario",
                          "subcommand '" + opt.subcommand + "' expects scenario " +
                              expected_scenarios(opt.subcommand) + ", got '" + doc.scenario +
                              "'");

    std::string out_dir = opt.out_dir;
    if (out_dir.empty()) {
        const char* env = std::getenv("BECPHASE_OUT_DIR");
        out_dir = env && *env ? env : ".";
    }

    std::string base;
    std::string csv;
    nlohmann::json report;
    if (opt.subcommand == "simulate") {
        const RunReport r = doc.core.ensemble_size > 1 ? run_interference_ensemble(doc.core)
                                                       : run_interference(doc.core, 0);
        base = artifact_basename("interference", doc.seed);
        csv = interference_csv(r);
        report = interference_json(r);
    } else if (opt.subcommand == "posterior") {
        RunReport r = run_interference(doc.core, 0);
        r.scenario = "posterior";
        base = artifact_basename("posterior", doc.seed);
        csv = posterior_csv(r);
        report = interference_json(r);
    } else if (opt.subcommand == "compare") {
        const std::vector<CompareRow> rows = compare_engines(doc.core);
        base = artifact_basename("compare", doc.seed);
        csv = compare_csv(rows);
        report = compare_json(rows, doc.core);
    } else if (opt.subcommand == "epr") {
        const EprReport r = run_epr(*doc.epr, doc.seed, 0);
        base = artifact_basename("epr", doc.seed);
        csv = epr_csv(r);
        report = epr_json(r);
    } else if (opt.subcommand == "singlet") {
        if (doc.scenario == "singlet") {
            const SingletReport r =
                run_singlet(doc.singlet->phi_1, doc.singlet->phi_2, doc.singlet->samples, doc.seed);
            base = artifact_basename("singlet", doc.seed);
            csv = singlet_csv(r);
            report = singlet_json(r);
        } else {
            const MacroscopicSingletReport r = run_macroscopic_singlet(
                doc.macroscopic_singlet->block_size, doc.macroscopic_singlet->samples, doc.seed);
            base = artifact_basename("macroscopic_singlet", doc.seed);
            csv = macroscopic_singlet_csv(r);
            report = macroscopic_singlet_json(r);
        }
    } else {  // weigh
        const WeighingReport r =
            weighing_distribution(doc.weighing->particles, doc.weighing->amp_left,
                                  doc.weighing->amp_right, doc.weighing->samples, doc.seed);
        base = artifact_basename("weighing", doc.seed);
        csv = weighing_csv(r);
        report = weighing_json(r);
    }

    if (opt.format != "json") {
        const std::string path = out_dir + "/" + base + ".csv";
        write_text_file(path, csv);
        std::cout << "wrote " << path << "\n";
    }
    if (opt.format != "csv") {
        const std::string path = out_dir + "/" + base + ".json";
        write_text_file(path, report.dump(2) + "\n");
        std::cout << "wrote " << path << "\n";
    }
    return 0;
}

}  // namespace

int run_command(const std::vector<std::string>& args) {
    CLI::App app{"two-condensate relative phase simulator"};
    app.require_subcommand(1);

    CliOptions opt;
    static const struct {
        const char* name;
        const char* help;
    } kSubcommands[] = {
        {"simulate", "sample a detection sequence and its posterior trajectory"},
        {"epr", "A-side detections with remote B-side conditionals"},
        {"singlet", "two-spin or macroscopic singlet correlations"},
        {"weigh", "left/right imbalance distribution of a weighed superposition"},
        {"compare", "exact vs large-N joint probabilities per outcome string"},
        {"posterior", "posterior density over the relative phase"},
    };
    for (const auto& sub : kSubcommands) {
        CLI::App* s = app.add_subcommand(sub.name, sub.help);
        s->add_option("--config", opt.config_path, "path to a JSON scenario config")
            ->required();
        s->add_option("--seed", opt.seed, "override the config seed");
        s->add_option("--out", opt.out_dir, "output directory (default $BECPHASE_OUT_DIR or .)");
        s->add_option("--format", opt.format, "restrict output to one format")
            ->check(CLI::IsMember({"csv", "json"}));
    }

    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("becphase");
    for (const std::string& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    CLI::App* active = app.get_subcommands().front();
    opt.subcommand = active->get_name();
    opt.seed_given = active->count("--seed") > 0;

    try {
        return execute(opt);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const SpecOutsideRegion& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const SequenceTooLongForApproxEngine& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace becphase
