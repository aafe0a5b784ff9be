#include "triax/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

#include "triax/errors.hpp"

namespace triax {

namespace {

using nlohmann::json;

json config_json(const AuditReport& report) {
    const AuditConfig& c = report.config;
    json cfg;
    cfg["algorithm"] = to_string(c.algorithm);
    if (c.algorithm == Algorithm::Hosvd)
        cfg["dims"] = {c.dims.m1, c.dims.m2, c.dims.m3};
    else
        cfg["rank"] = c.rank;
    cfg["tests"] = c.tests;
    cfg["iterations"] = c.iterations;
    cfg["epsilon"] = c.epsilon;
    cfg["master_seed"] = c.master_seed;
    // The audit runs on the raw tensor; spectra center separately.
    cfg["centering"] = "none";
    cfg["starts"] = {"R1", "R2a", "R2b", "R2c", "R3a", "R3b", "R3c"};
    if (c.force_identical_starts) cfg["force_identical_starts"] = true;
    if (report.r1_padded) cfg["r1_padded"] = true;
    return cfg;
}

std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

} // namespace

json audit_report_to_json(const AuditReport& report, const json& input_provenance) {
    json doc;
    doc["schema_version"] = 1;
    doc["kind"] = "audit";
    doc["config"] = config_json(report);
    if (!input_provenance.is_null() && !input_provenance.empty())
        doc["config"]["input_provenance"] = input_provenance;
    doc["tensor"] = {{"dims", {report.dims_n1, report.dims_n2, report.dims_n3}},
                     {"frobenius_norm", report.tensor_norm}};
    doc["scale"] = report.scale;
    doc["threshold"] = report.threshold();

    json tests = json::array();
    json timings = json::array();
    for (const TestResult& t : report.per_test) {
        json entry;
        entry["seed"] = t.bundle_seed;
        if (t.failed) {
            entry["status"] = "failed";
            entry["failure"] = t.failure;
        } else {
            entry["status"] = "ok";
            entry["d_series"] = t.d_series;
            entry["final_d"] = t.final_d;
            entry["objective_traces"] = t.objective_traces;
        }
        tests.push_back(std::move(entry));
        timings.push_back(t.wall_seconds);
    }
    doc["per_test"] = std::move(tests);
    doc["verdict"] = to_string(report.verdict);
    doc["timing"] = {{"jobs", report.config.jobs},
                     {"per_test_seconds", std::move(timings)},
                     {"total_seconds", report.total_seconds}};
    return doc;
}

json spectrum_report_to_json(const SpectrumReport& report, const json& input_provenance) {
    json doc;
    doc["schema_version"] = 1;
    doc["kind"] = "spectrum";
    json cfg;
    cfg["dims"] = {report.dims.m1, report.dims.m2, report.dims.m3};
    cfg["tau"] = report.tau;
    cfg["centering"] = to_string(report.centering);
    if (!input_provenance.is_null() && !input_provenance.empty())
        cfg["input_provenance"] = input_provenance;
    doc["config"] = std::move(cfg);
    doc["spectra"] = {{"mode1", report.spectra[0]},
                      {"mode2", report.spectra[1]},
                      {"mode3", report.spectra[2]}};
    json gaps = json::array();
    json votes = json::array();
    for (int m = 0; m < 3; ++m) {
        const double g = report.gaps[static_cast<std::size_t>(m)];
        if (std::isnan(g))
            gaps.push_back(nullptr);
        else
            gaps.push_back(g);
        votes.push_back(to_string(report.mode_votes[static_cast<std::size_t>(m)]));
    }
    doc["gaps"] = std::move(gaps);
    doc["mode_votes"] = std::move(votes);
    doc["prediction"] = to_string(report.prediction);
    doc["exact_decomposition"] = report.exact_decomposition;
    if (!report.note.empty()) doc["note"] = report.note;
    return doc;
}

void write_json(const json& doc, const std::filesystem::path& path) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw DataError("write_json: cannot open " + path.string());
    f << doc.dump(2) << '\n';
    if (!f) throw DataError("write_json: write failed for " + path.string());
}

json read_json(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw DataError("read_json: cannot open " + path.string());
    json doc;
    try {
        f >> doc;
    } catch (const json::parse_error& e) {
        throw FormatError("read_json: " + path.string() + ": " + e.what());
    }
    return doc;
}

std::vector<std::filesystem::path> write_report_csvs(const json& report,
                                                     const std::filesystem::path& csv_dir) {
    std::filesystem::create_directories(csv_dir);
    std::vector<std::filesystem::path> written;

    const std::string kind = report.value("kind", "");
    if (kind == "audit") {
        const json& tests = report.at("per_test");
        std::size_t iterations = 0;
        for (const json& t : tests)
            if (t.contains("d_series"))
                iterations = std::max(iterations, t.at("d_series").size());

        const std::filesystem::path out = csv_dir / "d_series.csv";
        std::ofstream f(out, std::ios::binary | std::ios::trunc);
        if (!f) throw DataError("write_report_csvs: cannot open " + out.string());
        f << "iteration";
        for (std::size_t i = 0; i < tests.size(); ++i) f << ",test_" << (i + 1);
        f << '\n';
        for (std::size_t t = 0; t < iterations; ++t) {
            f << (t + 1);
            for (const json& test : tests) {
                f << ',';
                if (test.contains("d_series") && t < test.at("d_series").size())
                    f << format_double(test.at("d_series")[t].get<double>());
            }
            f << '\n';
        }
        if (!f) throw DataError("write_report_csvs: write failed for " + out.string());
        written.push_back(out);
        return written;
    }

    if (kind == "spectrum") {
        static constexpr const char* kModes[3] = {"mode1", "mode2", "mode3"};
        for (int m = 0; m < 3; ++m) {
            const json& values = report.at("spectra").at(kModes[m]);
            const std::filesystem::path out =
                csv_dir / ("spectrum_" + std::string(kModes[m]) + ".csv");
            std::ofstream f(out, std::ios::binary | std::ios::trunc);
            if (!f) throw DataError("write_report_csvs: cannot open " + out.string());
            f << "rank,value\n";
            for (std::size_t i = 0; i < values.size(); ++i)
                f << (i + 1) << ',' << format_double(values[i].get<double>()) << '\n';
            if (!f) throw DataError("write_report_csvs: write failed for " + out.string());
            written.push_back(out);
        }
        return written;
    }

    throw DataError("write_report_csvs: unknown report kind '" + kind + "'");
}

} // namespace triax
