#pragma once

#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ctl/config.hpp"
#include "ctl/errors.hpp"

namespace ctl {

/// Columnar dataset plus the resolved config that produced it. Writers are
/// deterministic: fixed column order, 9-significant-digit floats, no
/// timestamps, so identical configs give byte-identical files.
struct dataset {
    std::string command;
    std::vector<std::pair<std::string, std::string>> config;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

inline void write_csv(const dataset& d, std::ostream& os) {
    os << "# ctl " << d.command << " dataset\n";
    for (const auto& [k, v] : d.config) os << "# " << k << " = " << v << "\n";
    for (std::size_t c = 0; c < d.columns.size(); ++c)
        os << d.columns[c] << (c + 1 < d.columns.size() ? "," : "\n");
    for (const auto& row : d.rows)
        for (std::size_t c = 0; c < row.size(); ++c)
            os << detail::format_g9(row[c]) << (c + 1 < row.size() ? "," : "\n");
}

inline void write_json(const dataset& d, std::ostream& os) {
    nlohmann::ordered_json j;
    j["command"] = d.command;
    nlohmann::ordered_json cfg;
    for (const auto& [k, v] : d.config) cfg[k] = v;
    j["config"] = cfg;
    j["columns"] = d.columns;
    nlohmann::ordered_json data = nlohmann::ordered_json::array();
    for (const auto& row : d.rows) {
        nlohmann::ordered_json r = nlohmann::ordered_json::array();
        // values pass through the same 9-significant-digit formatting as CSV
        for (double v : row) r.push_back(std::strtod(detail::format_g9(v).c_str(), nullptr));
        data.push_back(std::move(r));
    }
    j["data"] = std::move(data);
    os << j.dump(2) << "\n";
}

inline void write_dataset(const dataset& d, const std::string& format, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw config_error("cannot open output file '" + path + "'");
    if (format == "json")
        write_json(d, out);
    else
        write_csv(d, out);
    if (!out) throw error("failed writing '" + path + "'");
}

} // namespace ctl
