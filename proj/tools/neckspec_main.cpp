#include "neckspec/analysis.hpp"
#include "neckspec/assembly.hpp"
#include "neckspec/config.hpp"
#include "neckspec/eigsolve.hpp"
#include "neckspec/errors.hpp"
#include "neckspec/localmodel.hpp"
#include "neckspec/mesh.hpp"
#include "neckspec/potential.hpp"
#include "neckspec/testfn.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <complex>
#include <cstdio>
#include <numbers>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

using nlohmann::json;
using namespace neckspec;

namespace {

constexpr const char* kVersion = "0.1.0";

int verbosity() {
    const char* env = std::getenv("NECKSPEC_LOG");
    return env ? std::atoi(env) : 0;
}

void logline(const std::string& msg) {
    if (verbosity() > 0) std::cerr << "[neckspec] " << msg << "\n";
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw validation_error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw validation_error("cannot write file: " + path);
    out << text;
}

std::string fnv1a_hex(const std::string& text) {
    unsigned long long h = 1469598103934665603ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", h);
    return buf;
}

struct RunManifest {
    std::string command;
    std::string config_hash;
    unsigned long seed = 0;
    double wall_time_s = 0.0;
    std::vector<std::string> outputs;

    void emit(const std::string& path) const {
        json j;
        j["command"] = command;
        j["config_hash"] = config_hash;
        j["seed"] = seed;
        j["tool_version"] = kVersion;
        j["wall_time_s"] = wall_time_s;
        j["outputs"] = outputs;
        write_file(path, j.dump(2) + "\n");
    }
};

json fit_to_json(const FitResult& fit) {
    return {{"A", fit.slope},
            {"B", fit.intercept},
            {"r2", fit.r_squared},
            {"degenerate", fit.degenerate},
            {"model", fit.model}};
}

std::string vec17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"neckspec: spectral experiments on degenerating plumbed surfaces"};
    app.require_subcommand(1);

    std::string config_path, out_path, in_path;
    unsigned long seed = 42;
    int jobs = static_cast<int>(std::thread::hardware_concurrency());
    if (jobs < 1) jobs = 1;
    bool lenient = false;
    std::string shape_name = "ramp";
    double s_value = -1.0;
    int fit_k = 1;
    double flow_s = 1e-2, flow_theta = 0.0, flow_tol = 1e-10;
    int flow_p = 1;

    auto add_common = [&](CLI::App* sub, bool needs_config) {
        if (needs_config)
            sub->add_option("--config", config_path, "JSON configuration file")->required();
        sub->add_option("--out", out_path, "output path");
        sub->add_option("--jobs", jobs, "parallel rows for sweep");
        sub->add_option("--seed", seed, "eigensolver seed");
        sub->add_flag("--lenient", lenient, "accept unknown config keys");
        sub->add_option("--shape", shape_name, "cutoff shape: ramp | quintic")
            ->check(CLI::IsMember({"ramp", "quintic"}));
    };

    CLI::App* cmd_mesh = app.add_subcommand("mesh", "build one fiber mesh, report chi/area");
    add_common(cmd_mesh, true);
    cmd_mesh->add_option("--s", s_value, "degeneration parameter (default: first grid value)");

    CLI::App* cmd_spectrum = app.add_subcommand("spectrum", "single-s eigensolve to JSON");
    add_common(cmd_spectrum, true);
    cmd_spectrum->add_option("--s", s_value, "degeneration parameter (default: first grid value)");

    CLI::App* cmd_sweep = app.add_subcommand("sweep", "full s-grid sweep to CSV (+SVG)");
    add_common(cmd_sweep, true);

    CLI::App* cmd_fit = app.add_subcommand("fit", "rate fit from a sweep CSV");
    cmd_fit->add_option("--in", in_path, "sweep CSV")->required();
    cmd_fit->add_option("--k", fit_k, "eigenvalue column index");
    cmd_fit->add_option("--out", out_path, "output path");

    CLI::App* cmd_graph = app.add_subcommand("graph", "dual-graph Laplacian spectrum");
    add_common(cmd_graph, true);

    CLI::App* cmd_potential = app.add_subcommand("potential", "Green/Poisson log-growth report");
    add_common(cmd_potential, true);

    CLI::App* cmd_flow = app.add_subcommand("flow", "retraction-flow trace to CSV");
    cmd_flow->add_option("--p", flow_p, "chart arity (1 or 2)");
    cmd_flow->add_option("--s", flow_s, "target parameter");
    cmd_flow->add_option("--theta", flow_theta, "ray angle");
    cmd_flow->add_option("--tol", flow_tol, "local ODE tolerance");
    cmd_flow->add_option("--out", out_path, "output path");

    CLI::App* cmd_checks = app.add_subcommand("checks", "local-model suite to JSON");
    cmd_checks->add_option("--out", out_path, "output path");
    cmd_checks->add_option("--seed", seed, "sampling seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    const auto t0 = std::chrono::steady_clock::now();
    RunManifest manifest;
    manifest.seed = seed;

    try {
        const CutoffShape shape =
            shape_name == "quintic" ? CutoffShape::smooth_quintic : CutoffShape::linear_ramp;

        auto load_cfg = [&]() {
            const std::string text = read_file(config_path);
            manifest.config_hash = fnv1a_hex(text);
            return parse_config(text, lenient);
        };
        auto pick_s = [&](const ConfigGraph& cfg) {
            if (s_value > 0.0) return s_value;
            if (cfg.s_grid.empty())
                throw validation_error("empty s_grid and no --s given");
            return cfg.s_grid.front();
        };
        auto finish = [&](const std::string& command, const json& report) {
            manifest.command = command;
            manifest.wall_time_s =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            const std::string base = out_path.empty() ? command : out_path;
            if (!out_path.empty()) manifest.outputs.push_back(out_path);
            manifest.emit(base + ".manifest.json");
            if (out_path.empty())
                std::cout << report.dump(2) << "\n";
            else
                write_file(out_path, report.dump(2) + "\n");
        };

        if (cmd_mesh->parsed()) {
            ConfigGraph cfg = load_cfg();
            const double s = pick_s(cfg);
            FiberMesh mesh = build_fiber_mesh(cfg, s, cfg.mesh_h);
            json rep;
            rep["s"] = s;
            rep["nodes"] = mesh.node_count();
            rep["triangles"] = mesh.tri_count();
            rep["euler_characteristic"] = euler_characteristic(mesh);
            rep["euler_expected"] = expected_euler_characteristic(cfg);
            rep["total_area"] = total_area(mesh);
            double closed_form = 0.0;
            for (int v = 0; v < cfg.vertex_count(); ++v)
                closed_form += cfg.mass(v) -
                               (std::numbers::pi * std::numbers::pi / 4.0) * cfg.degree(v);
            closed_form += cfg.edge_count() * neck_area_closed_form(s);
            rep["total_area_closed_form"] = closed_form;
            rep["note"] = "flat-torus-plus-neck metric model: constants are "
                          "model-dependent, rates are universal";
            if (!out_path.empty()) {
                std::ofstream off(out_path + ".off");
                write_off(mesh, off);
                manifest.outputs.push_back(out_path + ".off");
            }
            finish("mesh", rep);
        } else if (cmd_spectrum->parsed()) {
            ConfigGraph cfg = load_cfg();
            const double s = pick_s(cfg);
            FiberMesh mesh = build_fiber_mesh(cfg, s, cfg.mesh_h);
            auto [K, M] = assemble(mesh);
            Spectrum spec = lobpcg_smallest(K, M, cfg.eig_count, cfg.tol.eig_residual, seed);
            json rep;
            rep["s"] = s;
            rep["eigenvalues"] = spec.eigenvalues;
            rep["residuals"] = spec.residuals;
            rep["iterations"] = spec.iterations;
            finish("spectrum", rep);
        } else if (cmd_sweep->parsed()) {
            ConfigGraph cfg = load_cfg();
            logline("sweep over " + std::to_string(cfg.s_grid.size()) + " grid points, " +
                    std::to_string(jobs) + " jobs");
            SweepTable table = sweep(cfg, seed, jobs, shape);
            const std::string csv = sweep_to_csv(table);
            manifest.command = "sweep";
            manifest.wall_time_s =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            const std::string out = out_path.empty() ? "sweep.csv" : out_path;
            write_file(out, csv);
            manifest.outputs.push_back(out);
            {
                std::ofstream svg(out + ".svg");
                write_sweep_svg(table, svg);
                manifest.outputs.push_back(out + ".svg");
            }
            manifest.emit(out + ".manifest.json");
        } else if (cmd_fit->parsed()) {
            const std::string text = read_file(in_path);
            manifest.config_hash = fnv1a_hex(text);
            SweepTable table = sweep_from_csv(text);
            FitResult fit = fit_log_rate(table, fit_k);
            finish("fit", fit_to_json(fit));
        } else if (cmd_graph->parsed()) {
            ConfigGraph cfg = load_cfg();
            auto [glap, values] = graph_laplacian_spectrum(cfg);
            json rep;
            rep["masses"] = glap.masses;
            rep["conductance"] = glap.conductance;
            rep["eigenvalues"] = values;
            finish("graph", rep);
        } else if (cmd_potential->parsed()) {
            ConfigGraph cfg = load_cfg();
            LogGrowthReport lg = log_growth_report(cfg);
            json rep;
            rep["s_values"] = lg.s_values;
            rep["min_green"] = lg.min_green;
            rep["poisson_ratio"] = lg.poisson_ratio;
            rep["eigen_sup"] = lg.eigen_sup;
            rep["refined_diag"] = lg.refined_diag;
            rep["green_fit"] = fit_to_json(lg.green_fit);
            rep["poisson_fit"] = fit_to_json(lg.poisson_fit);
            rep["refined_monotone_decreasing"] = lg.refined_monotone_decreasing;
            if (!out_path.empty()) {
                std::string csv = "s,min_green\n";
                for (std::size_t i = 0; i < lg.s_values.size(); ++i)
                    csv += vec17(lg.s_values[i]) + "," + vec17(lg.min_green[i]) + "\n";
                write_file(out_path + ".green.csv", csv);
                manifest.outputs.push_back(out_path + ".green.csv");
            }
            finish("potential", rep);
        } else if (cmd_flow->parsed()) {
            std::vector<std::complex<double>> start(flow_p + 1, 1.0);
            start[flow_p] = 0.0;
            FlowTrace trace = flow_retraction(flow_p, flow_s, flow_theta, start, flow_tol);
            std::string csv = "eta";
            for (int j = 0; j <= flow_p; ++j)
                csv += ",re_z" + std::to_string(j) + ",im_z" + std::to_string(j);
            csv += ",pi_defect\n";
            for (std::size_t i = 0; i < trace.etas.size(); ++i) {
                csv += vec17(trace.etas[i]);
                for (int j = 0; j <= flow_p; ++j)
                    csv += "," + vec17(trace.points[i][j].real()) + "," +
                           vec17(trace.points[i][j].imag());
                csv += "," + vec17(trace.pi_defect[i]) + "\n";
            }
            manifest.command = "flow";
            manifest.config_hash = fnv1a_hex(csv);
            manifest.wall_time_s =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            const std::string out = out_path.empty() ? "flow.csv" : out_path;
            write_file(out, csv);
            manifest.outputs.push_back(out);
            manifest.emit(out + ".manifest.json");
            std::cerr << "displacement " << trace.displacement << ", max pi-defect "
                      << trace.max_pi_defect << "\n";
        } else if (cmd_checks->parsed()) {
            json rep;
            {
                std::vector<std::complex<double>> start = {1.0, 0.0};
                FlowTrace tr = flow_retraction(1, 1e-2, 0.0, start, 1e-12);
                rep["flow_p1"] = {{"displacement", tr.displacement},
                                  {"max_pi_defect", tr.max_pi_defect},
                                  {"end_z0", tr.points.back()[0].real()},
                                  {"end_z1", tr.points.back()[1].real()},
                                  {"steps", tr.steps}};
            }
            rep["lojasiewicz_p1_min"] = lojasiewicz_ratio_min(1, 100000, seed);
            rep["lojasiewicz_p2_min"] = lojasiewicz_ratio_min(2, 100000, seed);
            {
                auto [lo, hi] = neck_measure_identity_check(1e-3, 1e-8);
                rep["neck_measure_ratio_min"] = lo;
                rep["neck_measure_ratio_max"] = hi;
            }
            rep["log_weight_worst_p1"] = log_weight_scale_check(1, 1e-3, 4);
            rep["log_weight_worst_p2"] = log_weight_scale_check(2, 1e-3, 4);
            manifest.config_hash = "";
            finish("checks", rep);
        }
    } catch (const convergence_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
