// triax CLI: generate, ingest, scramble, decompose, audit, and predict
// on dense order-3 tensors. Every subcommand prints its resolved
// configuration (seeds included) so runs can be reproduced exactly.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "triax/audit.hpp"
#include "triax/errors.hpp"
#include "triax/hosvd.hpp"
#include "triax/io.hpp"
#include "triax/parafac.hpp"
#include "triax/report.hpp"
#include "triax/scramble.hpp"
#include "triax/spectrum.hpp"
#include "triax/t1.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace triax;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumerical = 3;

void print_config(const json& config) { std::cout << "config " << config.dump() << "\n"; }

void machine_error(int code, const std::string& kind, const std::string& message) {
    json err;
    err["error"] = {{"exit", code}, {"kind", kind}, {"message", message}};
    std::cerr << err.dump() << "\n";
}

std::vector<index_t> parse_dims(const std::string& text, std::size_t count, const char* flag) {
    std::vector<index_t> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t comma = text.find(',', pos);
        const std::string tok =
            text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        try {
            out.push_back(static_cast<index_t>(std::stoll(tok)));
        } catch (const std::exception&) {
            throw ArgumentError(std::string(flag) + ": cannot parse '" + text + "'");
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (out.size() != count)
        throw ArgumentError(std::string(flag) + ": expected " + std::to_string(count) +
                            " comma-separated integers, got '" + text + "'");
    return out;
}

// Provenance sidecar: scramble writes <out>.json describing the
// transform; audit/spectrum echo it when present next to their input.
json load_provenance(const fs::path& input) {
    const fs::path sidecar = input.string() + ".json";
    if (!fs::exists(sidecar)) return {};
    try {
        return read_json(sidecar);
    } catch (const std::exception&) {
        return {};
    }
}

Centering parse_centering(const std::string& name) {
    if (name == "all-modes") return Centering::AllModes;
    if (name == "grand") return Centering::Grand;
    if (name == "none") return Centering::None;
    throw ArgumentError("--centering must be all-modes, grand or none");
}

int run(int argc, char** argv) {
    CLI::App app{"dense order-3 tensor decompositions and multi-start uniqueness audits"};
    app.require_subcommand(1);

    // ---- gen ----
    auto* gen = app.add_subcommand("gen", "generate a uniform(0,1) random tensor");
    std::string gen_dims;
    std::uint64_t gen_seed = 0;
    std::string gen_out;
    gen->add_option("--dims", gen_dims, "tensor dims n1,n2,n3")->required();
    gen->add_option("--seed", gen_seed, "master seed");
    gen->add_option("--out", gen_out, "output .tns3 path")->required();

    // ---- ingest ----
    auto* ingest = app.add_subcommand("ingest", "stack a directory of PGM images into a tensor");
    std::string ingest_dir, ingest_size, ingest_out;
    ingest->add_option("--dir", ingest_dir, "directory of .pgm images")->required();
    ingest->add_option("--size", ingest_size, "target size h,w")->required();
    ingest->add_option("--out", ingest_out, "output .tns3 path")->required();

    // ---- scramble ----
    auto* scramble = app.add_subcommand("scramble", "randomize the slices of a tensor");
    std::string scr_in, scr_out, scr_occlude;
    std::uint64_t scr_seed = 0;
    index_t scr_block = 0;
    double scr_pixel = 0.0;
    double scr_fill = 0.0;
    bool scr_shared = false;
    bool scr_per_image_position = false;
    scramble->add_option("--in", scr_in, "input .tns3 path")->required();
    scramble->add_option("--out", scr_out, "output .tns3 path")->required();
    scramble->add_option("--seed", scr_seed, "scramble seed");
    auto* opt_block = scramble->add_option("--block", scr_block, "block grid n (n x n cells)");
    auto* opt_pixel = scramble->add_option("--pixel", scr_pixel, "pixel fraction alpha in (0,1]");
    auto* opt_occl =
        scramble->add_option("--occlude", scr_occlude, "occlusion rectangle x,y,w,h");
    scramble->add_option("--fill", scr_fill, "occlusion fill value (default 0)");
    scramble->add_flag("--shared", scr_shared,
                       "share one permutation across slices instead of per-image draws");
    scramble->add_flag("--per-image-position", scr_per_image_position,
                       "redraw the occlusion position per slice");

    // ---- decompose ----
    auto* decompose = app.add_subcommand("decompose", "run one decomposition and save the model");
    std::string dec_algo = "hosvd", dec_dims, dec_preset, dec_init = "r1", dec_in, dec_out;
    index_t dec_rank = 0;
    int dec_iters = 0;
    std::uint64_t dec_seed = 0;
    decompose->add_option("--algo", dec_algo, "hosvd or parafac")
        ->check(CLI::IsMember({"hosvd", "parafac"}));
    decompose->add_option("--dims", dec_dims, "HOSVD target dims m1,m2,m3");
    decompose->add_option("--rank", dec_rank, "ParaFac factor count R");
    decompose->add_option("--preset", dec_preset, "dims preset m5 or m10")
        ->check(CLI::IsMember({"m5", "m10"}));
    decompose->add_option("--iters", dec_iters, "iterations (default 100 hosvd, 2000 parafac)");
    decompose->add_option("--init", dec_init, "start r1 (PCA), r2 (random) or r3 (rank-deficient)")
        ->check(CLI::IsMember({"r1", "r2", "r3"}));
    decompose->add_option("--seed", dec_seed, "seed for r2/r3 starts");
    decompose->add_option("--in", dec_in, "input .tns3 path")->required();
    decompose->add_option("--out", dec_out, "output model directory")->required();

    // ---- audit ----
    auto* audit = app.add_subcommand("audit", "multi-start uniqueness audit");
    std::string aud_algo = "hosvd", aud_dims, aud_preset, aud_in, aud_out;
    index_t aud_rank = 0;
    int aud_tests = 10;
    int aud_iters = 0;
    double aud_eps = 1e-8;
    std::uint64_t aud_seed = 0;
    int aud_jobs = static_cast<int>(std::thread::hardware_concurrency());
    if (aud_jobs < 1) aud_jobs = 1;
    audit->add_option("--algo", aud_algo, "hosvd or parafac")
        ->check(CLI::IsMember({"hosvd", "parafac"}));
    audit->add_option("--dims", aud_dims, "HOSVD target dims m1,m2,m3");
    audit->add_option("--rank", aud_rank, "ParaFac factor count R");
    audit->add_option("--preset", aud_preset, "dims preset m5 or m10")
        ->check(CLI::IsMember({"m5", "m10"}));
    audit->add_option("--tests", aud_tests, "independent tests (default 10)");
    audit->add_option("--iters", aud_iters, "iterations (default 100 hosvd, 2000 parafac)");
    audit->add_option("--eps", aud_eps, "relative uniqueness threshold (default 1e-8)");
    audit->add_option("--seed", aud_seed, "master seed");
    audit->add_option("--jobs", aud_jobs, "concurrent tests (default: processors)");
    audit->add_option("--in", aud_in, "input .tns3 path")->required();
    audit->add_option("--out", aud_out, "output report JSON path")->required();

    // ---- spectrum ----
    auto* spectrum = app.add_subcommand("spectrum", "eigenvalue spectra and uniqueness prediction");
    std::string spc_in, spc_out, spc_dims, spc_centering = "all-modes";
    double spc_tau = 0.01;
    spectrum->add_option("--in", spc_in, "input .tns3 path")->required();
    spectrum->add_option("--dims", spc_dims, "cutoff dims m1,m2,m3")->required();
    spectrum->add_option("--tau", spc_tau, "relative eigengap threshold (default 0.01)");
    spectrum->add_option("--centering", spc_centering, "all-modes, grand or none")
        ->check(CLI::IsMember({"all-modes", "grand", "none"}));
    spectrum->add_option("--out", spc_out, "output report JSON path")->required();

    // ---- report ----
    auto* report = app.add_subcommand("report", "flatten a report JSON to CSV files");
    std::string rep_in, rep_csv_dir;
    report->add_option("--in", rep_in, "report JSON path")->required();
    report->add_option("--csv-dir", rep_csv_dir, "output directory for CSV files")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help / --version
        app.exit(e);                                    // human-readable message
        machine_error(kExitUsage, "usage", e.what());
        return kExitUsage;
    }

    if (gen->parsed()) {
        const auto dims = parse_dims(gen_dims, 3, "--dims");
        print_config(json{{"subcommand", "gen"},
                          {"dims", dims},
                          {"seed", gen_seed},
                          {"out", gen_out}});
        const Tensor3 x = gen_random_tensor(dims[0], dims[1], dims[2], gen_seed);
        save_tensor(x, gen_out);
        std::cout << "wrote " << gen_out << " (" << x.n1() << "x" << x.n2() << "x" << x.n3()
                  << ")\n";
        return kExitOk;
    }

    if (ingest->parsed()) {
        const auto size = parse_dims(ingest_size, 2, "--size");
        print_config(json{{"subcommand", "ingest"},
                          {"dir", ingest_dir},
                          {"size", size},
                          {"out", ingest_out}});
        const Tensor3 x = ingest_images(ingest_dir, size[0], size[1]);
        save_tensor(x, ingest_out);
        std::cout << "wrote " << ingest_out << " (" << x.n1() << "x" << x.n2() << "x" << x.n3()
                  << ", " << x.n3() << " images)\n";
        return kExitOk;
    }

    if (scramble->parsed()) {
        const int chosen = (opt_block->count() > 0) + (opt_pixel->count() > 0) +
                           (opt_occl->count() > 0);
        if (chosen != 1)
            throw ArgumentError("scramble: choose exactly one of --block, --pixel, --occlude");

        json cfg{{"subcommand", "scramble"}, {"in", scr_in},   {"out", scr_out},
                 {"seed", scr_seed},         {"shared", scr_shared}};
        json prov{{"seed", scr_seed}, {"per_image", !scr_shared}};
        const Tensor3 x = load_tensor(scr_in);
        Tensor3 y;
        if (opt_block->count() > 0) {
            if (scr_block != 2 && scr_block != 4 && scr_block != 8)
                std::cerr << "note: block grid " << scr_block
                          << " is outside the usual presets {2, 4, 8}\n";
            cfg["block"] = scr_block;
            prov["kind"] = "block";
            prov["n"] = scr_block;
            print_config(cfg);
            y = block_scramble(x, scr_block, scr_seed, !scr_shared);
        } else if (opt_pixel->count() > 0) {
            cfg["pixel"] = scr_pixel;
            prov["kind"] = "pixel";
            prov["alpha"] = scr_pixel;
            print_config(cfg);
            y = pixel_scramble(x, scr_pixel, scr_seed, !scr_shared);
        } else {
            const auto rect = parse_dims(scr_occlude, 4, "--occlude");
            Occlusion occ{rect[0], rect[1], rect[2], rect[3], scr_fill, scr_per_image_position};
            cfg["occlude"] = rect;
            cfg["fill"] = scr_fill;
            cfg["per_image_position"] = scr_per_image_position;
            prov["kind"] = "occlude";
            prov["rect"] = rect;
            prov["fill"] = scr_fill;
            prov["per_image_position"] = scr_per_image_position;
            print_config(cfg);
            y = occlude(x, occ, scr_seed);
        }
        save_tensor(y, scr_out);
        write_json(prov, scr_out + ".json");
        std::cout << "wrote " << scr_out << " and provenance sidecar " << scr_out << ".json\n";
        return kExitOk;
    }

    if (decompose->parsed()) {
        const Tensor3 x = load_tensor(dec_in);
        const bool hosvd = dec_algo == "hosvd";
        TargetDims dims{};
        index_t rank = dec_rank;
        if (!dec_preset.empty()) {
            const index_t m = dec_preset == "m5" ? 5 : 10;
            dims = {m, m, m};
            if (rank == 0) rank = m;
        }
        if (!dec_dims.empty()) {
            const auto d = parse_dims(dec_dims, 3, "--dims");
            dims = {d[0], d[1], d[2]};
        }
        if (hosvd && (dims.m1 < 1 || dims.m2 < 1 || dims.m3 < 1))
            throw ArgumentError("decompose: hosvd needs --dims m1,m2,m3 or --preset");
        if (!hosvd && rank < 1)
            throw ArgumentError("decompose: parafac needs --rank or --preset");
        const int iters = dec_iters > 0 ? dec_iters : (hosvd ? 100 : 2000);

        json cfg{{"subcommand", "decompose"}, {"algorithm", dec_algo}, {"iters", iters},
                 {"init", dec_init},          {"seed", dec_seed},      {"in", dec_in},
                 {"out", dec_out}};
        if (hosvd)
            cfg["dims"] = {dims.m1, dims.m2, dims.m3};
        else
            cfg["rank"] = rank;
        print_config(cfg);

        const index_t v_cols = hosvd ? dims.m2 : rank;
        const index_t w_cols = hosvd ? dims.m3 : rank;
        const InitBundle bundle = make_init_bundle(x, v_cols, w_cols, dec_seed, !hosvd);
        // r1 -> PCA start, r2 -> first dense random start, r3 -> first
        // rank-deficient start.
        const int start_index = dec_init == "r1" ? 0 : (dec_init == "r2" ? 1 : 4);
        const InitStart& start = bundle.starts[static_cast<std::size_t>(start_index)];

        fs::create_directories(dec_out);
        json manifest{{"algorithm", dec_algo}, {"iterations", iters},
                      {"init", start.label},   {"seed", dec_seed},
                      {"input", dec_in},       {"tensor_dims", {x.n1(), x.n2(), x.n3()}}};

        auto matrix_to_tensor = [](const Matrix& m) {
            return Tensor3(m.rows(), m.cols(), 1,
                           std::vector<double>(m.values().begin(), m.values().end()));
        };

        if (hosvd) {
            const auto [model, trace] = hosvd_run(x, dims, start.v0, start.w0, iters);
            save_tensor(matrix_to_tensor(model.u), fs::path(dec_out) / "U.tns3");
            save_tensor(matrix_to_tensor(model.v), fs::path(dec_out) / "V.tns3");
            save_tensor(matrix_to_tensor(model.w), fs::path(dec_out) / "W.tns3");
            save_tensor(model.s, fs::path(dec_out) / "S.tns3");
            manifest["dims"] = {dims.m1, dims.m2, dims.m3};
            manifest["objective_trace"] = trace.core_norm_sq;
            manifest["j1"] = hosvd_objective(x, model.s);
            manifest["files"] = {"U.tns3", "V.tns3", "W.tns3", "S.tns3"};
            std::cout << "final J1 = " << hosvd_objective(x, model.s) << "\n";
        } else {
            const auto [model, trace] = parafac_run(x, rank, start.v0, start.w0, iters);
            save_tensor(matrix_to_tensor(model.u), fs::path(dec_out) / "U.tns3");
            save_tensor(matrix_to_tensor(model.v), fs::path(dec_out) / "V.tns3");
            save_tensor(matrix_to_tensor(model.w), fs::path(dec_out) / "W.tns3");
            manifest["rank"] = rank;
            manifest["objective_trace"] = trace.objective;
            manifest["j_parafac"] = trace.objective.back();
            manifest["files"] = {"U.tns3", "V.tns3", "W.tns3"};
            if (bundle.r1_padded) manifest["r1_padded"] = true;
            std::cout << "final J = " << trace.objective.back() << "\n";
        }
        write_json(manifest, fs::path(dec_out) / "model.json");
        std::cout << "wrote model to " << dec_out << "\n";
        return kExitOk;
    }

    if (audit->parsed()) {
        const Tensor3 x = load_tensor(aud_in);
        AuditConfig config;
        config.algorithm = aud_algo == "hosvd" ? Algorithm::Hosvd : Algorithm::Parafac;
        if (!aud_preset.empty()) {
            const index_t m = aud_preset == "m5" ? 5 : 10;
            config.dims = {m, m, m};
            config.rank = m;
        }
        if (!aud_dims.empty()) {
            const auto d = parse_dims(aud_dims, 3, "--dims");
            config.dims = {d[0], d[1], d[2]};
        }
        if (aud_rank > 0) config.rank = aud_rank;
        config.tests = aud_tests;
        config.iterations = aud_iters;
        config.epsilon = aud_eps;
        config.master_seed = aud_seed;
        config.jobs = aud_jobs;

        json cfg{{"subcommand", "audit"},
                 {"algorithm", aud_algo},
                 {"tests", config.tests},
                 {"iterations", config.resolved_iterations()},
                 {"epsilon", config.epsilon},
                 {"seed", config.master_seed},
                 {"jobs", config.jobs},
                 {"in", aud_in},
                 {"out", aud_out}};
        if (config.algorithm == Algorithm::Hosvd)
            cfg["dims"] = {config.dims.m1, config.dims.m2, config.dims.m3};
        else
            cfg["rank"] = config.rank;
        print_config(cfg);

        const AuditReport result = run_audit(x, config);
        write_json(audit_report_to_json(result, load_provenance(aud_in)), aud_out);
        std::cout << "verdict " << to_string(result.verdict) << " (threshold "
                  << result.threshold() << ", " << result.total_seconds << " s)\n";
        return kExitOk;
    }

    if (spectrum->parsed()) {
        const Tensor3 x = load_tensor(spc_in);
        const auto d = parse_dims(spc_dims, 3, "--dims");
        const Centering centering = parse_centering(spc_centering);
        print_config(json{{"subcommand", "spectrum"},
                          {"in", spc_in},
                          {"dims", d},
                          {"tau", spc_tau},
                          {"centering", spc_centering},
                          {"out", spc_out}});
        const SpectrumReport result =
            analyze_spectrum(x, {d[0], d[1], d[2]}, spc_tau, centering);
        write_json(spectrum_report_to_json(result, load_provenance(spc_in)), spc_out);
        std::cout << "prediction " << to_string(result.prediction) << "\n";
        return kExitOk;
    }

    if (report->parsed()) {
        const json doc = read_json(rep_in);
        json cfg{{"subcommand", "report"}, {"in", rep_in}, {"csv-dir", rep_csv_dir}};
        if (doc.contains("config") && doc.at("config").contains("centering"))
            cfg["centering"] = doc.at("config").at("centering");
        print_config(cfg);
        const auto files = write_report_csvs(doc, rep_csv_dir);
        for (const auto& f : files) std::cout << "wrote " << f.string() << "\n";
        return kExitOk;
    }

    return kExitUsage;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const ArgumentError& e) {
        machine_error(kExitUsage, "usage", e.what());
        return kExitUsage;
    } catch (const FormatError& e) {
        machine_error(kExitData, "format", e.what());
        return kExitData;
    } catch (const DataError& e) {
        machine_error(kExitData, "data", e.what());
        return kExitData;
    } catch (const NumericalError& e) {
        machine_error(kExitNumerical, "numerical", e.what());
        return kExitNumerical;
    } catch (const std::exception& e) {
        machine_error(kExitNumerical, "internal", e.what());
        return kExitNumerical;
    }
}
