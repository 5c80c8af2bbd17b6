#include "becphase/report_io.hpp"

#include <filesystem>
#include <fstream>
#include <map>

#include "becphase/numeric.hpp"
#include "json_detail.hpp"

namespace becphase {

using nlohmann::json;
using detail::num_or_null;
using detail::opt_or_null;

namespace {

std::string row(std::initializer_list<std::string> cells) {
    std::string out;
    bool first = true;
    for (const std::string& c : cells) {
        if (!first) out += ',';
        out += c;
        first = false;
    }
    out += '\n';
    return out;
}

std::map<std::int64_t, std::int64_t> histogram(const std::vector<std::int64_t>& samples) {
    std::map<std::int64_t, std::int64_t> h;
    for (std::int64_t s : samples) ++h[s];
    return h;
}

}  // namespace

std::string interference_csv(const RunReport& report) {
    std::string out = "m,R,circular_std,conditional_p\n";
    int m = 0;
    for (const StepRecord& step : report.steps) {
        ++m;
        out += row({std::to_string(m), g17(step.posterior_resultant),
                    g17(step.posterior_std), g17(step.conditional_p)});
    }
    return out;
}

std::string posterior_csv(const RunReport& report) {
    std::string out = "lambda,weight\n";
    for (std::size_t k = 0; k < report.posterior_grid.size(); ++k)
        out += row({g17(report.posterior_grid[k]), g17(report.posterior_weights[k])});
    return out;
}

std::string epr_csv(const EprReport& report) {
    std::string out = "m_A,phi_lambda,B_polarization,summed_spin_expectation\n";
    for (const EprStep& step : report.steps)
        out += row({std::to_string(step.m_a), g17(step.phi_lambda),
                    g17(step.b_polarization), g17(step.summed_spin)});
    return out;
}

std::string singlet_csv(const SingletReport& report) {
    std::string out = "phi_1,phi_2,samples,E_closed_form,E_sampled\n";
    out += row({g17(report.phi_1), g17(report.phi_2), std::to_string(report.samples),
                g17(report.correlation_closed_form), g17(report.correlation_sampled)});
    return out;
}

std::string macroscopic_singlet_csv(const MacroscopicSingletReport& report) {
    std::string out =
        "block_size,samples,correlation_closed_form,correlation_sampled,"
        "plus_frequency_a,anticorrelated_fraction\n";
    out += row({std::to_string(report.block_size), std::to_string(report.samples),
                g17(report.correlation_closed_form), g17(report.correlation_sampled),
                g17(report.plus_frequency_a), g17(report.anticorrelated_fraction)});
    return out;
}

std::string weighing_csv(const WeighingReport& report) {
    std::string out = "D,count,frequency,mean_theory,variance_theory\n";
    const double total = static_cast<double>(report.sample_count);
    for (const auto& [d, count] : histogram(report.samples))
        out += row({std::to_string(d), std::to_string(count),
                    g17(static_cast<double>(count) / total), g17(report.mean_theory),
                    g17(report.variance_theory)});
    return out;
}

std::string compare_csv(const std::vector<CompareRow>& rows) {
    std::string out = "outcomes,p_exact,p_lambda,relative_error\n";
    for (const CompareRow& r : rows)
        out += row({r.outcomes, g17(r.p_exact), g17(r.p_lambda), g17(r.relative_error)});
    return out;
}

json interference_json(const RunReport& report) {
    json j;
    j["schema_version"] = "1";
    j["scenario"] = report.scenario;
    j["engine"] = engine_name(report.engine);
    j["master_seed"] = report.master_seed;
    j["run_index"] = report.run_index;
    j["config"] = json{{"engine", engine_name(report.config.engine)},
                       {"ensemble", report.config.ensemble_size},
                       {"seed", report.config.master_seed},
                       {"state", detail::state_json(report.config)},
                       {"plan", detail::plan_json(report.config)}};
    j["log_weight"] = report.log_weight;
    json steps = json::array();
    for (const StepRecord& s : report.steps) {
        steps.push_back(json{{"position", s.spec.position},
                             {"angle", s.spec.angle},
                             {"width", s.spec.width},
                             {"eta", s.eta},
                             {"conditional_p", s.conditional_p},
                             {"posterior_mean", opt_or_null(s.posterior_mean)},
                             {"posterior_resultant", s.posterior_resultant},
                             {"posterior_std", num_or_null(s.posterior_std)}});
    }
    j["steps"] = std::move(steps);
    j["final"] = json{{"mean_direction", opt_or_null(report.final_stats.mean_direction)},
                      {"resultant_length", report.final_stats.resultant_length},
                      {"circular_std", num_or_null(report.final_stats.circular_std)}};
    j["posterior"] =
        json{{"grid", report.posterior_grid}, {"weights", report.posterior_weights}};
    if (report.ensemble) {
        j["ensemble"] = json{
            {"runs", report.ensemble->runs},
            {"median_final_resultant", report.ensemble->median_final_resultant},
            {"median_final_circular_std",
             num_or_null(report.ensemble->median_final_circular_std)},
            {"final_resultants", report.ensemble->final_resultants},
            {"final_circular_stds", json::array()}};
        json& stds = j["ensemble"]["final_circular_stds"];
        for (double s : report.ensemble->final_circular_stds) stds.push_back(num_or_null(s));
    } else {
        j["ensemble"] = nullptr;
    }
    j["conventions"] = report.conventions;
    j["notes"] = report.notes;
    return j;
}

json epr_json(const EprReport& report) {
    json j;
    j["schema_version"] = "1";
    j["scenario"] = "epr";
    j["engine"] = engine_name(report.config.engine);
    j["master_seed"] = report.master_seed;
    j["run_index"] = report.run_index;
    j["config"] = json{{"engine", engine_name(report.config.engine)},
                       {"epr", detail::epr_section_json(report.config)}};
    json specs = json::array();
    for (const DetectionSpec& s : report.a_specs)
        specs.push_back(detail::detection_spec_json(s));
    j["a_specs"] = std::move(specs);
    j["probe_positions"] = report.probe_positions;
    j["probe_width"] = report.probe_width;
    json steps = json::array();
    for (const EprStep& s : report.steps) {
        steps.push_back(json{{"m_a", s.m_a},
                             {"position", s.spec.position},
                             {"angle", s.spec.angle},
                             {"width", s.spec.width},
                             {"eta", s.eta},
                             {"conditional_p", s.conditional_p},
                             {"posterior_resultant", s.posterior_resultant},
                             {"phi_lambda", s.phi_lambda},
                             {"b_polarization", s.b_polarization},
                             {"summed_spin", s.summed_spin}});
    }
    j["steps"] = std::move(steps);
    j["posterior"] =
        json{{"grid", report.posterior_grid}, {"weights", report.posterior_weights}};
    j["conventions"] = report.conventions;
    j["notes"] = report.notes;
    return j;
}

json singlet_json(const SingletReport& report) {
    return json{{"schema_version", "1"},
                {"scenario", "singlet"},
                {"master_seed", report.master_seed},
                {"phi_1", report.phi_1},
                {"phi_2", report.phi_2},
                {"samples", report.samples},
                {"correlation_closed_form", report.correlation_closed_form},
                {"correlation_sampled", report.correlation_sampled}};
}

json macroscopic_singlet_json(const MacroscopicSingletReport& report) {
    return json{{"schema_version", "1"},
                {"scenario", "macroscopic_singlet"},
                {"master_seed", report.master_seed},
                {"block_size", report.block_size},
                {"samples", report.samples},
                {"correlation_closed_form", report.correlation_closed_form},
                {"correlation_sampled", report.correlation_sampled},
                {"plus_frequency_a", report.plus_frequency_a},
                {"anticorrelated_fraction", report.anticorrelated_fraction}};
}

json weighing_json(const WeighingReport& report) {
    json hist = json::array();
    for (const auto& [d, count] : histogram(report.samples))
        hist.push_back(json{{"imbalance", d}, {"count", count}});
    return json{{"schema_version", "1"},
                {"scenario", "weighing"},
                {"master_seed", report.master_seed},
                {"particles", report.particles},
                {"amp_left", json::array({report.amp_left.real(), report.amp_left.imag()})},
                {"amp_right", json::array({report.amp_right.real(), report.amp_right.imag()})},
                {"p_left", report.p_left},
                {"mean_theory", report.mean_theory},
                {"variance_theory", report.variance_theory},
                {"sample_count", report.sample_count},
                {"sample_mean", report.sample_mean},
                {"sample_variance", report.sample_variance},
                {"histogram", std::move(hist)}};
}

json compare_json(const std::vector<CompareRow>& rows, const ScenarioConfig& cfg) {
    json out_rows = json::array();
    double max_rel = 0.0;
    double total = 0.0;
    for (const CompareRow& r : rows) {
        out_rows.push_back(json{{"outcomes", r.outcomes},
                                {"p_exact", r.p_exact},
                                {"p_lambda", r.p_lambda},
                                {"relative_error", r.relative_error}});
        max_rel = std::max(max_rel, r.relative_error);
        total += r.p_exact;
    }
    return json{{"schema_version", "1"},
                {"scenario", "compare"},
                {"config", json{{"seed", cfg.master_seed},
                                {"state", detail::state_json(cfg)},
                                {"plan", detail::plan_json(cfg)}}},
                {"rows", std::move(out_rows)},
                {"max_relative_error", max_rel},
                {"exact_total", total}};
}

std::string artifact_basename(const std::string& scenario, std::uint64_t seed) {
    return scenario + "_seed" + std::to_string(seed);
}

void write_text_file(const std::string& path, const std::string& content) {
    const std::filesystem::path p(path);
    std::error_code ec;
    if (p.has_parent_path()) {
        std::filesystem::create_directories(p.parent_path(), ec);
        if (ec) throw IoFailure("cannot create directory " + p.parent_path().string() +
                                ": " + ec.message());
    }
    std::ofstream out(p, std::ios::binary);
    if (!out) throw IoFailure("cannot open " + path + " for writing");
    out << content;
    out.flush();
    if (!out) throw IoFailure("write to " + path + " failed");
}

}  // namespace becphase
