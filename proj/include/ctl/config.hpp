#pragma once

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "ctl/errors.hpp"
#include "ctl/response.hpp"

namespace ctl {

/// Flat run configuration shared by all CLI commands. Lengths are nm at this
/// boundary (converted to SI before touching the physics), angles rad,
/// everything else dimensionless. Defaults mirror the gold-plate setup used
/// throughout the figures: lambda_p = 137 nm, a1 a2 = 200 nm^2, Ly = 24 um.
struct run_config {
    bool material_ideal = false;
    double lambda_p_nm = 137.0;
    double l_nm = 1000.0;
    double lx_nm = 24000.0;
    double ly_nm = 24000.0;
    double a1_nm = 14.142135623730951; // sqrt(200)
    double a2_nm = 14.142135623730951;
    double lambda_c_nm = 2400.0;
    double b1_nm = 0.0;
    double b2_nm = 0.0;
    double theta_rad = 0.0;
    std::string backend = "plasma";
    double energy_rel_tol = 1e-9;
    double response_rel_tol = 1e-7;
    std::string format = "csv";
    std::string out_path;
    int threads = 0; // 0 = CTL_THREADS env or hardware concurrency
    double guard_fraction = 0.3;
    bool guard_force = false;

    // sweep grids
    double sweep_b_over_lambda_c_max = 2.0;
    int sweep_b_points = 81;
    double sweep_theta_ly_over_lambda_c_max = 3.0;
    int sweep_theta_points = 121;
    double sweep_l_min_nm = 100.0;
    double sweep_l_max_nm = 4000.0;
    int sweep_l_points = 25;
    double sweep_kl_min = 0.0;
    double sweep_kl_max = 20.0;
    int sweep_k_points = 41;
    double curve_lambda_c1_nm = 2400.0;
    double curve_lambda_c2_nm = 1200.0;
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

inline double parse_number(const std::string& key, const std::string& value) {
    const std::string v = trim(value);
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (end != v.c_str() + v.size() || v.empty())
        throw config_error("config: key '" + key + "' expects a number, got '" + value + "'");
    return x;
}

inline int parse_int(const std::string& key, const std::string& value) {
    const double x = parse_number(key, value);
    if (x != std::floor(x)) throw config_error("config: key '" + key + "' expects an integer");
    return static_cast<int>(x);
}

inline bool parse_bool(const std::string& key, const std::string& value) {
    const std::string v = trim(value);
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw config_error("config: key '" + key + "' expects true/false");
}

inline void require_positive(const std::string& key, double v) {
    if (!(v > 0.0)) throw config_error("config: key '" + key + "' must be > 0");
}

} // namespace detail

/// Apply one dotted key to the config. Unknown keys are rejected.
inline void apply_config_key(run_config& cfg, const std::string& key, const std::string& value) {
    using detail::parse_bool;
    using detail::parse_int;
    using detail::parse_number;
    using detail::require_positive;

    auto positive = [&](double& slot) {
        const double v = parse_number(key, value);
        require_positive(key, v);
        slot = v;
    };
    auto count = [&](int& slot) {
        const int v = parse_int(key, value);
        if (v < 2) throw config_error("config: key '" + key + "' needs at least 2 points");
        slot = v;
    };

    if (key == "material.ideal") cfg.material_ideal = parse_bool(key, value);
    else if (key == "material.lambda_p_nm") positive(cfg.lambda_p_nm);
    else if (key == "geometry.l_nm") positive(cfg.l_nm);
    else if (key == "plate.lx_nm") positive(cfg.lx_nm);
    else if (key == "plate.ly_nm") positive(cfg.ly_nm);
    else if (key == "corrugation.a1_nm") positive(cfg.a1_nm);
    else if (key == "corrugation.a2_nm") positive(cfg.a2_nm);
    else if (key == "corrugation.lambda_c_nm") positive(cfg.lambda_c_nm);
    else if (key == "corrugation.b1_nm") cfg.b1_nm = parse_number(key, value);
    else if (key == "corrugation.b2_nm") cfg.b2_nm = parse_number(key, value);
    else if (key == "orientation.theta_rad") cfg.theta_rad = parse_number(key, value);
    else if (key == "backend") {
        const std::string v = detail::trim(value);
        if (v != "pfa" && v != "plasma" && v != "ideal" && v != "asym-ideal" &&
            v != "asym-plasma")
            throw config_error("config: unknown backend '" + v + "'");
        cfg.backend = v;
    } else if (key == "quadrature.energy_rel_tol") {
        positive(cfg.energy_rel_tol);
        if (cfg.energy_rel_tol >= 1.0) throw config_error("config: tolerance must be < 1");
    } else if (key == "quadrature.response_rel_tol") {
        positive(cfg.response_rel_tol);
        if (cfg.response_rel_tol >= 1.0) throw config_error("config: tolerance must be < 1");
    } else if (key == "output.format") {
        const std::string v = detail::trim(value);
        if (v != "csv" && v != "json") throw config_error("config: format must be csv or json");
        cfg.format = v;
    } else if (key == "output.path") cfg.out_path = detail::trim(value);
    else if (key == "threads") cfg.threads = parse_int(key, value);
    else if (key == "guard.fraction") positive(cfg.guard_fraction);
    else if (key == "guard.force") cfg.guard_force = parse_bool(key, value);
    else if (key == "sweep.b_over_lambda_c_max") positive(cfg.sweep_b_over_lambda_c_max);
    else if (key == "sweep.b_points") count(cfg.sweep_b_points);
    else if (key == "sweep.theta_ly_over_lambda_c_max") positive(cfg.sweep_theta_ly_over_lambda_c_max);
    else if (key == "sweep.theta_points") count(cfg.sweep_theta_points);
    else if (key == "sweep.l_min_nm") positive(cfg.sweep_l_min_nm);
    else if (key == "sweep.l_max_nm") positive(cfg.sweep_l_max_nm);
    else if (key == "sweep.l_points") count(cfg.sweep_l_points);
    else if (key == "sweep.kl_min") {
        const double v = parse_number(key, value);
        if (v < 0.0) throw config_error("config: sweep.kl_min must be >= 0");
        cfg.sweep_kl_min = v;
    } else if (key == "sweep.kl_max") positive(cfg.sweep_kl_max);
    else if (key == "sweep.k_points") count(cfg.sweep_k_points);
    else if (key == "curves.lambda_c1_nm") positive(cfg.curve_lambda_c1_nm);
    else if (key == "curves.lambda_c2_nm") positive(cfg.curve_lambda_c2_nm);
    else throw config_error("config: unknown key '" + key + "'");
}

/// Parse a flat key-value config file ('#' comments, one `key = value` per line).
inline void load_config_file(run_config& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("config: cannot open '" + path + "'");
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = detail::trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw config_error("config: " + path + ":" + std::to_string(lineno) +
                               ": expected 'key = value'");
        apply_config_key(cfg, detail::trim(t.substr(0, eq)), detail::trim(t.substr(eq + 1)));
    }
}

/// Post-parse consistency checks shared by every command.
inline void validate_config(const run_config& cfg) {
    if (cfg.sweep_l_min_nm >= cfg.sweep_l_max_nm)
        throw config_error("config: sweep.l_min_nm must be < sweep.l_max_nm");
    if (cfg.sweep_kl_min >= cfg.sweep_kl_max)
        throw config_error("config: sweep.kl_min must be < sweep.kl_max");
    if (cfg.material_ideal && (cfg.backend == "plasma" || cfg.backend == "asym-plasma"))
        throw config_error("config: backend '" + cfg.backend + "' needs a plasma material");
}

/// The resolved key/value view, in fixed order, exactly as accepted by the
/// parser. Every emitted dataset embeds this so a run is reproducible from
/// its own output.
inline std::vector<std::pair<std::string, std::string>> resolved_config(const run_config& c);

namespace detail {
inline std::string format_g9(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}
} // namespace detail

inline std::vector<std::pair<std::string, std::string>> resolved_config(const run_config& c) {
    using detail::format_g9;
    std::vector<std::pair<std::string, std::string>> kv;
    kv.emplace_back("material.ideal", c.material_ideal ? "true" : "false");
    kv.emplace_back("material.lambda_p_nm", format_g9(c.lambda_p_nm));
    kv.emplace_back("geometry.l_nm", format_g9(c.l_nm));
    kv.emplace_back("plate.lx_nm", format_g9(c.lx_nm));
    kv.emplace_back("plate.ly_nm", format_g9(c.ly_nm));
    kv.emplace_back("corrugation.a1_nm", format_g9(c.a1_nm));
    kv.emplace_back("corrugation.a2_nm", format_g9(c.a2_nm));
    kv.emplace_back("corrugation.lambda_c_nm", format_g9(c.lambda_c_nm));
    kv.emplace_back("corrugation.b1_nm", format_g9(c.b1_nm));
    kv.emplace_back("corrugation.b2_nm", format_g9(c.b2_nm));
    kv.emplace_back("orientation.theta_rad", format_g9(c.theta_rad));
    kv.emplace_back("backend", c.backend);
    kv.emplace_back("quadrature.energy_rel_tol", format_g9(c.energy_rel_tol));
    kv.emplace_back("quadrature.response_rel_tol", format_g9(c.response_rel_tol));
    kv.emplace_back("output.format", c.format);
    kv.emplace_back("guard.fraction", format_g9(c.guard_fraction));
    kv.emplace_back("guard.force", c.guard_force ? "true" : "false");
    kv.emplace_back("sweep.b_over_lambda_c_max", format_g9(c.sweep_b_over_lambda_c_max));
    kv.emplace_back("sweep.b_points", format_g9(c.sweep_b_points));
    kv.emplace_back("sweep.theta_ly_over_lambda_c_max",
                    format_g9(c.sweep_theta_ly_over_lambda_c_max));
    kv.emplace_back("sweep.theta_points", format_g9(c.sweep_theta_points));
    kv.emplace_back("sweep.l_min_nm", format_g9(c.sweep_l_min_nm));
    kv.emplace_back("sweep.l_max_nm", format_g9(c.sweep_l_max_nm));
    kv.emplace_back("sweep.l_points", format_g9(c.sweep_l_points));
    kv.emplace_back("sweep.kl_min", format_g9(c.sweep_kl_min));
    kv.emplace_back("sweep.kl_max", format_g9(c.sweep_kl_max));
    kv.emplace_back("sweep.k_points", format_g9(c.sweep_k_points));
    kv.emplace_back("curves.lambda_c1_nm", format_g9(c.curve_lambda_c1_nm));
    kv.emplace_back("curves.lambda_c2_nm", format_g9(c.curve_lambda_c2_nm));
    return kv;
}

/// SI accessors.
inline mirror_material config_material(const run_config& c) {
    if (c.material_ideal) return ideal_mirror{};
    return plasma_material{c.lambda_p_nm * 1e-9};
}
inline plane_geometry config_geometry(const run_config& c) {
    return plane_geometry{c.l_nm * 1e-9};
}
inline response_backend config_backend(const run_config& c) {
    if (c.backend == "pfa") return response_backend::pfa;
    if (c.backend == "plasma") return response_backend::scattering_plasma;
    if (c.backend == "ideal") return response_backend::scattering_ideal;
    if (c.backend == "asym-ideal") return response_backend::asymptotic_ideal;
    if (c.backend == "asym-plasma") return response_backend::asymptotic_plasma_highk;
    throw config_error("config: unknown backend '" + c.backend + "'");
}
inline quadrature_spec config_energy_spec(const run_config& c) {
    quadrature_spec s;
    s.relative_tolerance = c.energy_rel_tol;
    return s;
}
inline quadrature_spec config_response_spec(const run_config& c) {
    quadrature_spec s;
    s.relative_tolerance = c.response_rel_tol;
    return s;
}

} // namespace ctl
