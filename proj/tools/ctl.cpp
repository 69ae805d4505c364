// ctl - Casimir torque between corrugated metallic plates.
//
// Subcommands sweep the torque, response ratio and energy landscape and emit
// deterministic CSV/JSON datasets; see README.md for the config format.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ctl/config.hpp"
#include "ctl/dataset.hpp"
#include "ctl/landscape.hpp"
#include "ctl/lifshitz.hpp"
#include "ctl/response.hpp"
#include "ctl/sweep.hpp"

namespace {

using namespace ctl;

corrugation_pair config_pair(const run_config& c, double k) {
    return corrugation_pair(c.a1_nm * 1e-9, c.a2_nm * 1e-9, k, c.b1_nm * 1e-9, c.b2_nm * 1e-9);
}

void guard_amplitudes(const run_config& c, double k) {
    validate_perturbative(config_pair(c, k), config_geometry(c), config_material(c),
                          c.guard_fraction, !c.guard_force);
}

std::string default_out(const run_config& c, const std::string& command) {
    if (!c.out_path.empty()) return c.out_path;
    return command + (c.format == "json" ? ".json" : ".csv");
}

dataset make_dataset(const run_config& c, const std::string& command,
                     std::vector<std::string> columns) {
    dataset d;
    d.command = command;
    d.config = resolved_config(c);
    d.columns = std::move(columns);
    return d;
}

int cmd_landscape(const run_config& cfg) {
    const double lambda_c = cfg.lambda_c_nm * 1e-9;
    const double k = 2.0 * std::numbers::pi / lambda_c;
    const double ly = cfg.ly_nm * 1e-9;
    guard_amplitudes(cfg, k);

    const auto geom = config_geometry(cfg);
    const auto mat = config_material(cfg);
    const plate_extent extent{cfg.lx_nm * 1e-9, ly};
    const response_sample G =
        g_response(k, geom, mat, config_backend(cfg), config_response_spec(cfg));
    const double a1 = cfg.a1_nm * 1e-9, a2 = cfg.a2_nm * 1e-9;
    const double norm = 0.5 * a1 * a2 * std::abs(G.G);

    const int nb = cfg.sweep_b_points, nt = cfg.sweep_theta_points;
    const double bmax = cfg.sweep_b_over_lambda_c_max * lambda_c;
    const double tmax = cfg.sweep_theta_ly_over_lambda_c_max * lambda_c / ly;

    auto point = [&](std::size_t idx) {
        const int ib = static_cast<int>(idx) / nt;
        const int it = static_cast<int>(idx) % nt;
        const double b = bmax * ib / (nb - 1);
        const double theta = -tmax + 2.0 * tmax * it / (nt - 1);
        // b1 = -b keeps the relative displacement equal to b at every theta
        corrugation_pair pair(a1, a2, k, -b, 0.0);
        const double e = energy_long_lines(pair, extent, {theta}, G);
        return std::vector<double>{b, theta, e / norm};
    };
    const auto rows = parallel_map<std::vector<double>>(
        static_cast<std::size_t>(nb) * nt, resolve_threads(cfg.threads), point);

    dataset d = make_dataset(cfg, "landscape", {"b", "theta", "energy_normalized"});
    d.rows = rows;
    write_dataset(d, cfg.format, default_out(cfg, "landscape"));
    return 0;
}

int cmd_torque_vs_distance(const run_config& cfg) {
    const auto mat = config_material(cfg);
    const auto backend = config_backend(cfg);
    if (backend != response_backend::scattering_plasma &&
        backend != response_backend::scattering_ideal)
        throw config_error("torque-vs-distance: requires a scattering backend");
    const plate_extent extent{cfg.lx_nm * 1e-9, cfg.ly_nm * 1e-9};
    const auto spec = config_response_spec(cfg);
    const double a1 = cfg.a1_nm * 1e-9, a2 = cfg.a2_nm * 1e-9;
    const double lc1 = cfg.curve_lambda_c1_nm * 1e-9;
    const double lc2 = cfg.curve_lambda_c2_nm * 1e-9;

    const int n = cfg.sweep_l_points;
    const double l0 = cfg.sweep_l_min_nm * 1e-9, l1 = cfg.sweep_l_max_nm * 1e-9;

    auto point = [&](std::size_t i) {
        const double L = l0 * std::pow(l1 / l0, static_cast<double>(i) / (n - 1));
        const plane_geometry geom{L};
        const double lc_opt = 2.0 * std::numbers::pi * L / 2.6;
        std::vector<double> row{L};
        for (double lc : {lc1, lc2, lc_opt}) {
            const double k = 2.0 * std::numbers::pi / lc;
            corrugation_pair pair(a1, a2, k);
            validate_perturbative(pair, geom, mat, cfg.guard_fraction, !cfg.guard_force);
            row.push_back(max_torque(pair, extent, geom, mat, backend, spec).torque_per_area);
        }
        return row;
    };
    const auto rows =
        parallel_map<std::vector<double>>(n, resolve_threads(cfg.threads), point);

    dataset d = make_dataset(cfg, "torque-vs-distance",
                             {"L", "tau_lambda_c1", "tau_lambda_c2", "tau_optimal"});
    d.rows = rows;
    write_dataset(d, cfg.format, default_out(cfg, "torque-vs-distance"));
    return 0;
}

int cmd_torque_vs_k(const run_config& cfg) {
    const auto geom = config_geometry(cfg);
    const auto mat = config_material(cfg);
    if (is_ideal(mat)) throw config_error("torque-vs-k: needs a plasma material");
    const plate_extent extent{cfg.lx_nm * 1e-9, cfg.ly_nm * 1e-9};
    const auto spec = config_response_spec(cfg);
    const double a1 = cfg.a1_nm * 1e-9, a2 = cfg.a2_nm * 1e-9;
    const double L = geom.separation;

    const int n = cfg.sweep_k_points;
    auto point = [&](std::size_t i) {
        const double kl =
            cfg.sweep_kl_min + (cfg.sweep_kl_max - cfg.sweep_kl_min) * i / (n - 1);
        const double k = kl / L;
        if (k == 0.0) return std::vector<double>{0.0, 0.0, 0.0, 0.0};
        corrugation_pair pair(a1, a2, k);
        validate_perturbative(pair, geom, mat, cfg.guard_fraction, !cfg.guard_force);
        const double tp =
            max_torque(pair, extent, geom, mat, response_backend::scattering_plasma, spec)
                .torque_per_area;
        const double ti =
            max_torque(pair, extent, geom, mat, response_backend::scattering_ideal, spec)
                .torque_per_area;
        const double tq = pfa_torque(pair, extent, geom, mat).torque_per_area;
        return std::vector<double>{k, tp, ti, tq};
    };
    const auto rows =
        parallel_map<std::vector<double>>(n, resolve_threads(cfg.threads), point);

    dataset d =
        make_dataset(cfg, "torque-vs-k", {"k", "tau_plasma", "tau_ideal", "tau_pfa"});
    d.rows = rows;
    write_dataset(d, cfg.format, default_out(cfg, "torque-vs-k"));
    return 0;
}

int cmd_rho(const run_config& cfg) {
    const auto geom = config_geometry(cfg);
    const auto mat = config_material(cfg);
    const auto backend = config_backend(cfg);
    const auto spec = config_response_spec(cfg);
    const double L = geom.separation;
    const double pi = std::numbers::pi;

    const int n = cfg.sweep_k_points;
    auto point = [&](std::size_t i) {
        const double kl =
            cfg.sweep_kl_min + (cfg.sweep_kl_max - cfg.sweep_kl_min) * i / (n - 1);
        const double r = rho(kl / L, geom, mat, backend, spec);
        const double ref11 = 2.0 / (pi * pi * pi * pi) * kl * kl * kl * kl;
        return std::vector<double>{kl / L, r, r * std::exp(kl), ref11};
    };
    const auto rows =
        parallel_map<std::vector<double>>(n, resolve_threads(cfg.threads), point);

    dataset d = make_dataset(cfg, "rho", {"k", "rho", "rho_exp_kl", "eq_ideal_rho_exp_kl"});
    d.rows = rows;
    write_dataset(d, cfg.format, default_out(cfg, "rho"));
    return 0;
}

int cmd_optimize(const run_config& cfg) {
    const auto geom = config_geometry(cfg);
    const auto mat = config_material(cfg);
    const auto backend = config_backend(cfg);
    const auto spec = config_response_spec(cfg);
    const plate_extent extent{cfg.lx_nm * 1e-9, cfg.ly_nm * 1e-9};
    const double a1 = cfg.a1_nm * 1e-9, a2 = cfg.a2_nm * 1e-9;

    const double k_opt = optimize_corrugation_wavelength(geom, mat, backend, spec);
    const double lambda_c_opt = 2.0 * std::numbers::pi / k_opt;
    corrugation_pair pair(a1, a2, k_opt);
    validate_perturbative(pair, geom, mat, cfg.guard_fraction, !cfg.guard_force);
    const torque_result tau = max_torque(pair, extent, geom, mat, backend, spec);
    const double theta_stab = stability_threshold(pair, extent);
    const double deg = 180.0 / std::numbers::pi;

    std::vector<std::pair<std::string, std::string>> report{
        {"k_opt_per_m", detail::format_g9(k_opt)},
        {"lambda_c_opt_m", detail::format_g9(lambda_c_opt)},
        {"theta_max_rad", detail::format_g9(tau.theta_at)},
        {"theta_max_deg", detail::format_g9(tau.theta_at * deg)},
        {"theta_stability_rad", detail::format_g9(theta_stab)},
        {"theta_stability_deg", detail::format_g9(theta_stab * deg)},
        {"tau_max_per_area_n_per_m", detail::format_g9(tau.torque_per_area)},
        {"tip_arc_over_lambda_c",
         detail::format_g9(0.5 * extent.ly * tau.theta_at / lambda_c_opt)},
    };
    for (const auto& [k, v] : report) std::cout << k << " = " << v << "\n";

    if (!cfg.out_path.empty()) {
        dataset d = make_dataset(cfg, "optimize", {});
        for (const auto& [k, v] : report) d.config.emplace_back("result." + k, v);
        write_dataset(d, cfg.format, cfg.out_path);
    }
    return 0;
}

int cmd_lateral_force(const run_config& cfg) {
    const double lambda_c = cfg.lambda_c_nm * 1e-9;
    const double k = 2.0 * std::numbers::pi / lambda_c;
    guard_amplitudes(cfg, k);
    const auto geom = config_geometry(cfg);
    const auto mat = config_material(cfg);
    const plate_extent extent{cfg.lx_nm * 1e-9, cfg.ly_nm * 1e-9};
    const response_sample G =
        g_response(k, geom, mat, config_backend(cfg), config_response_spec(cfg));
    const double a1 = cfg.a1_nm * 1e-9, a2 = cfg.a2_nm * 1e-9;

    const int n = cfg.sweep_b_points;
    const double bmax = cfg.sweep_b_over_lambda_c_max * lambda_c;
    auto point = [&](std::size_t i) {
        const double b = bmax * i / (n - 1);
        corrugation_pair pair(a1, a2, k, -b, 0.0);
        return std::vector<double>{b,
                                   lateral_force(pair, extent, {cfg.theta_rad}, G)};
    };
    const auto rows =
        parallel_map<std::vector<double>>(n, resolve_threads(cfg.threads), point);

    dataset d = make_dataset(cfg, "lateral-force", {"b", "force_per_area"});
    d.rows = rows;
    write_dataset(d, cfg.format, default_out(cfg, "lateral-force"));
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Casimir torque between sinusoidally corrugated metallic plates"};
    app.require_subcommand(1);
    app.fallthrough(); // global flags may follow the subcommand

    std::string config_path, out_path, format, backend;
    double tol = 0.0;
    int threads = -1;
    bool force = false;
    app.add_option("--config", config_path, "flat key = value config file");
    app.add_option("--out", out_path, "output file path");
    app.add_option("--format", format, "csv|json");
    app.add_option("--backend", backend, "pfa|plasma|ideal|asym-ideal|asym-plasma");
    app.add_option("--tol", tol, "relative tolerance for response quadrature");
    app.add_option("--threads", threads, "worker threads (0 = auto)");
    app.add_flag("--force", force, "downgrade the perturbative guard to a warning");

    auto* c_landscape = app.add_subcommand("landscape", "normalized energy over (b, theta)");
    auto* c_tvd = app.add_subcommand("torque-vs-distance", "max torque vs separation");
    auto* c_tvk = app.add_subcommand("torque-vs-k", "max torque vs corrugation wavenumber");
    auto* c_rho = app.add_subcommand("rho", "PFA discrepancy ratio rho(k)");
    auto* c_opt = app.add_subcommand("optimize", "optimal corrugation wavelength report");
    auto* c_lat = app.add_subcommand("lateral-force", "lateral force vs displacement");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        ctl::run_config cfg;
        if (!config_path.empty()) ctl::load_config_file(cfg, config_path);
        if (!out_path.empty()) cfg.out_path = out_path;
        if (!format.empty()) ctl::apply_config_key(cfg, "output.format", format);
        if (!backend.empty()) ctl::apply_config_key(cfg, "backend", backend);
        if (tol > 0.0) cfg.response_rel_tol = tol;
        if (threads >= 0) cfg.threads = threads;
        if (force) cfg.guard_force = true;
        ctl::validate_config(cfg);

        if (c_landscape->parsed()) return cmd_landscape(cfg);
        if (c_tvd->parsed()) return cmd_torque_vs_distance(cfg);
        if (c_tvk->parsed()) return cmd_torque_vs_k(cfg);
        if (c_rho->parsed()) return cmd_rho(cfg);
        if (c_opt->parsed()) return cmd_optimize(cfg);
        if (c_lat->parsed()) return cmd_lateral_force(cfg);
        return 2;
    } catch (const ctl::config_error& e) {
        std::cerr << "ctl: " << e.what() << "\n";
        return 2;
    } catch (const ctl::regime_error& e) {
        std::cerr << "ctl: " << e.what() << "\n";
        return 4;
    } catch (const ctl::convergence_error& e) {
        std::cerr << "ctl: " << e.what() << "\n";
        return 3;
    } catch (const ctl::domain_error& e) {
        std::cerr << "ctl: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "ctl: " << e.what() << "\n";
        return 1;
    }
}
