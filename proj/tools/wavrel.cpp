#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "wavrel/geometry.hpp"
#include "wavrel/misner.hpp"
#include "wavrel/suites.hpp"

using wavrel::suites::json;

namespace {

wavrel::geom::Domain load_domain(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw wavrel::Error("cannot open domain file: " + path);
    nlohmann::json spec;
    is >> spec;
    return wavrel::geom::make_domain(spec);
}

std::string join_args(int argc, char** argv) {
    std::string cmd;
    for (int i = 0; i < argc; ++i) {
        if (i) cmd += ' ';
        cmd += argv[i];
    }
    return cmd;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"boundary symplectic geometry of the 2D wave equation"};
    app.require_subcommand(1);

    std::string domain_path, out_path, format = "json", suite = "isotropy", sign_str = "minus";
    std::string f_spec = "id", g_spec = "id", half = "full";
    std::size_t K = 8, M = 1024, grid = 2048, iters = 1000, component = 0;
    std::uint64_t seed = 1;
    double tol = 1e-7, start = 0.3, xi = 0.0, x0 = 0.0;
    std::vector<double> box = {0.0, 1.0, 0.0, 1.0};
    std::vector<double> compose;
    std::string in_csv;
    bool timings = false, diagnose = false, do_defect = false, do_hj = false, check = false;
    double trace_x = -1.0;

    app.add_option("--seed", seed, "seed for randomized sweeps");
    app.add_flag("--timings", timings, "include wall-clock timings in the report");
    app.add_option("--format", format, "side-file format where applicable: json | csv");

    auto add_domain_opt = [&](CLI::App* sub, bool required = true) {
        auto* o = sub->add_option("--domain", domain_path, "domain spec JSON file");
        if (required) o->required();
    };

    auto* sc_light = app.add_subcommand("light-points", "locate light-like boundary points");
    add_domain_opt(sc_light);
    sc_light->add_option("--out", out_path, "side-file path (JSON or CSV per --format)");

    auto* sc_inv = app.add_subcommand("involution", "sample the boundary involution E+-");
    add_domain_opt(sc_inv);
    sc_inv->add_option("--sign", sign_str, "minus | plus");
    sc_inv->add_option("--grid", grid, "samples per component");
    sc_inv->add_option("--out", out_path, "CSV output path");

    auto* sc_orbit = app.add_subcommand("orbit", "iterate the composed map E+ E-");
    add_domain_opt(sc_orbit);
    sc_orbit->add_option("--start", start, "start parameter");
    sc_orbit->add_option("--component", component, "start component");
    sc_orbit->add_option("--iters", iters, "iteration count");
    sc_orbit->add_option("--out", out_path, "CSV output path");

    auto* sc_pair = app.add_subcommand("pairing", "assemble the omega pairing matrix");
    add_domain_opt(sc_pair);
    sc_pair->add_option("--K", K, "Fourier degree");
    sc_pair->add_option("--M", M, "grid size");
    sc_pair->add_option("--out", out_path, "CSV output path");

    auto* sc_verify = app.add_subcommand("verify", "run a verification suite");
    add_domain_opt(sc_verify);
    sc_verify->add_option("--suite", suite, "isotropy | defect");
    sc_verify->add_option("--K", K, "Fourier degree");
    sc_verify->add_option("--M", M, "grid size");
    sc_verify->add_option("--tol", tol, "isotropy tolerance");
    sc_verify->add_option("--out", out_path, "report JSON output path");

    auto* sc_diri = app.add_subcommand("dirichlet", "Dirichlet solvability diagnostics");
    add_domain_opt(sc_diri);
    sc_diri->add_flag("--diagnose", diagnose, "emit the full diagnostic record");

    auto* sc_dia = app.add_subcommand("diamond", "light-like diamond computations");
    sc_dia->add_flag("--hj", do_hj, "compute the Hamilton-Jacobi action");
    sc_dia->add_option("--f", f_spec, "f spec: id | const:c | sin:k | poly:c0,c1,...");
    sc_dia->add_option("--g", g_spec, "g spec");
    sc_dia->add_option("--box", box, "sp0 sp1 sm0 sm1")->expected(4);

    auto* sc_flow = app.add_subcommand("flow", "reduced radial flow on circles");
    sc_flow->add_option("--xi", xi, "flow parameter");
    sc_flow->add_option("--in", in_csv, "input circle field CSV");
    sc_flow->add_option("--out", out_path, "output circle field CSV");
    sc_flow->add_option("--compose", compose, "xi xi' for the composition law")->expected(2);
    sc_flow->add_flag("--check", check, "check the composition law");
    sc_flow->add_option("--M", M, "grid size");

    auto* sc_mis = app.add_subcommand("misner", "Misner cylinder certificates");
    sc_mis->add_flag("--defect", do_defect, "compute the truncated defect");
    sc_mis->add_option("--K", K, "Fourier degree");
    sc_mis->add_option("--half", half, "full | lower | upper");
    sc_mis->add_option("--trace", trace_x, "trace a null curve from x0 on the in-boundary");
    sc_mis->add_option("--sign", sign_str, "minus | plus");
    sc_mis->add_option("--out", out_path, "output path");

    // let --seed/--timings/--format appear after the subcommand name
    for (auto* sub : app.get_subcommands({})) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    const auto t0 = std::chrono::steady_clock::now();
    json suites_out = json::array();
    std::string domain_hash;
    int exit_code = 0;

    try {
        const int sign = sign_str == "plus" ? +1 : -1;
        if (sc_light->parsed()) {
            auto dom = load_domain(domain_path);
            domain_hash = wavrel::geom::domain_hash(dom);
            suites_out.push_back(wavrel::suites::light_points_suite(dom));
            if (!out_path.empty()) {
                std::ofstream os(out_path);
                os.precision(17);
                if (format == "csv") {
                    os << "component,t,set,kappa\n";
                    for (const auto& p : suites_out.back()["points"]) {
                        os << p["component"].get<std::size_t>() << ',' << p["t"].get<double>()
                           << ',' << p["set"].get<std::string>() << ','
                           << p["kappa"].get<double>() << "\n";
                    }
                } else {
                    os << suites_out.back().dump(2) << std::endl;
                }
            }
        } else if (sc_inv->parsed()) {
            auto dom = load_domain(domain_path);
            domain_hash = wavrel::geom::domain_hash(dom);
            suites_out.push_back(wavrel::suites::involution_suite(dom, sign, grid, out_path));
        } else if (sc_orbit->parsed()) {
            auto dom = load_domain(domain_path);
            domain_hash = wavrel::geom::domain_hash(dom);
            suites_out.push_back(
                wavrel::suites::orbit_suite(dom, component, start, iters, out_path));
        } else if (sc_pair->parsed()) {
            auto dom = load_domain(domain_path);
            domain_hash = wavrel::geom::domain_hash(dom);
            suites_out.push_back(wavrel::suites::pairing_suite(dom, K, M, out_path));
        } else if (sc_verify->parsed()) {
            auto dom = load_domain(domain_path);
            domain_hash = wavrel::geom::domain_hash(dom);
            if (suite == "isotropy") {
                suites_out.push_back(wavrel::suites::isotropy_suite(dom, K, M, tol));
            } else if (suite == "defect") {
                suites_out.push_back(wavrel::suites::defect_suite(dom, K, M));
            } else {
                throw wavrel::Error("unknown suite: " + suite);
            }
        } else if (sc_diri->parsed()) {
            auto dom = load_domain(domain_path);
            domain_hash = wavrel::geom::domain_hash(dom);
            suites_out.push_back(wavrel::suites::dirichlet_suite(dom, seed));
        } else if (sc_dia->parsed()) {
            suites_out.push_back(
                wavrel::suites::diamond_suite(f_spec, g_spec, box[0], box[1], box[2], box[3]));
        } else if (sc_flow->parsed()) {
            if (!compose.empty()) {
                suites_out.push_back(
                    wavrel::suites::flow_compose_suite(compose[0], compose[1], M));
            } else {
                if (in_csv.empty()) throw wavrel::Error("flow: --in FILE is required");
                suites_out.push_back(wavrel::suites::flow_suite(xi, in_csv, out_path));
            }
        } else if (sc_mis->parsed()) {
            if (do_defect) {
                suites_out.push_back(wavrel::suites::misner_suite(K, half));
                if (trace_x < 0.0 && !out_path.empty()) {
                    std::ofstream os(out_path);
                    os << suites_out.back().dump(2) << std::endl;
                }
            }
            if (trace_x >= 0.0) {
                suites_out.push_back(wavrel::suites::misner_trace_suite(
                    trace_x, sign, do_defect ? std::string{} : out_path));
            }
            if (!do_defect && trace_x < 0.0) {
                throw wavrel::Error("misner: request --defect and/or --trace X0");
            }
            domain_hash = wavrel::geom::domain_hash(wavrel::misner::misner_domain());
        }
    } catch (const wavrel::Error& e) {
        json err;
        err["error"] = e.what();
        std::cout << err.dump(2) << std::endl;
        return 2;
    } catch (const nlohmann::json::exception& e) {
        json err;
        err["error"] = std::string("malformed input: ") + e.what();
        std::cout << err.dump(2) << std::endl;
        return 2;
    }

    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const json report = wavrel::suites::make_report(join_args(argc, argv), domain_hash, seed,
                                                    suites_out, timings, wall);
    if (!report["pass"].get<bool>()) exit_code = 1;
    std::cout << report.dump(2) << std::endl;
    if (sc_verify->parsed() && !out_path.empty()) {
        std::ofstream os(out_path);
        os << report.dump(2) << std::endl;
    }
    return exit_code;
}
