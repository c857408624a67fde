#include "dof_atlas/io.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <stdexcept>

namespace dofatlas {

namespace {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void require_keys(const Json& j, const std::vector<std::string>& allowed,
                  const std::string& where) {
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            throw std::invalid_argument("unknown key '" + key + "' in " + where);
    }
}

void check_schema_version(const Json& j) {
    if (j.contains("schema_version") && j.at("schema_version").get<int>() != kSchemaVersion)
        throw std::invalid_argument("unsupported schema_version");
}

}  // namespace

Json antenna_config_to_json(const AntennaConfig& config) {
    return Json{{"m1", config.m1}, {"m2", config.m2}, {"n1", config.n1}, {"n2", config.n2}};
}

AntennaConfig antenna_config_from_json(const Json& j) {
    require_keys(j, {"m1", "m2", "n1", "n2"}, "config");
    AntennaConfig config{j.at("m1").get<int>(), j.at("m2").get<int>(),
                         j.at("n1").get<int>(), j.at("n2").get<int>()};
    config.validate();
    return config;
}

Json region_to_json(const DofRegion& region) {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["config"] = antenna_config_to_json(region.config);
    j["scenario"] = to_string(region.scenario);
    j["halfspaces"] = Json::array();
    for (const auto& h : region.halfspaces)
        j["halfspaces"].push_back(Json{{"a1", to_canonical_string(h.a1)},
                                       {"a2", to_canonical_string(h.a2)},
                                       {"c", to_canonical_string(h.c)}});
    j["vertices"] = Json::array();
    for (const auto& v : region.vertices)
        j["vertices"].push_back(
            Json::array({to_canonical_string(v.d1), to_canonical_string(v.d2)}));
    return j;
}

DofRegion region_from_json(const Json& j) {
    check_schema_version(j);
    require_keys(j, {"schema_version", "config", "scenario", "halfspaces", "vertices"},
                 "region");
    DofRegion region;
    region.config = antenna_config_from_json(j.at("config"));
    region.scenario = scenario_from_string(j.at("scenario").get<std::string>());
    for (const auto& h : j.at("halfspaces")) {
        require_keys(h, {"a1", "a2", "c"}, "halfspace");
        region.halfspaces.push_back({parse_rational(h.at("a1").get<std::string>()),
                                     parse_rational(h.at("a2").get<std::string>()),
                                     parse_rational(h.at("c").get<std::string>())});
    }
    for (const auto& v : j.at("vertices")) {
        if (!v.is_array() || v.size() != 2)
            throw std::invalid_argument("vertex must be a [d1, d2] pair");
        region.vertices.push_back({parse_rational(v.at(0).get<std::string>()),
                                   parse_rational(v.at(1).get<std::string>())});
    }
    return region;
}

Json matrix_to_json(const Matrix& m) {
    Json rows = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            row.push_back(Json::array({m(r, c).real(), m(r, c).imag()}));
        rows.push_back(std::move(row));
    }
    return rows;
}

Matrix matrix_from_json(const Json& j) {
    if (!j.is_array() || j.empty()) throw std::invalid_argument("matrix JSON must be a nonempty array");
    const std::size_t cols = j.at(0).size();
    Matrix m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < j.size(); ++r) {
        const auto& row = j.at(r);
        if (!row.is_array() || row.size() != cols)
            throw std::invalid_argument("matrix rows must have equal length");
        for (std::size_t c = 0; c < cols; ++c) {
            const auto& entry = row.at(c);
            if (!entry.is_array() || entry.size() != 2)
                throw std::invalid_argument("matrix entries must be [re, im] pairs");
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = {
                entry.at(0).get<double>(), entry.at(1).get<double>()};
        }
    }
    return m;
}

SimFileConfig sim_file_from_json(const Json& j) {
    check_schema_version(j);
    require_keys(j,
                 {"schema_version", "config", "model", "u12", "u22", "snr_grid_db",
                  "trials", "seed", "alpha", "scheme", "subspace", "basis"},
                 "simulation config");
    SimFileConfig file;
    // Absent config falls back to the (3,1,5,2) setup the counterexample
    // experiments are built around.
    file.sim.config =
        j.contains("config") ? antenna_config_from_json(j.at("config")) : AntennaConfig{3, 1, 5, 2};

    FadingKind kind = FadingKind::IidRayleigh;
    if (j.contains("model")) kind = fading_kind_from_string(j.at("model").get<std::string>());
    if (kind == FadingKind::CorrelatedRayleigh) {
        if (!j.contains("u12") || !j.contains("u22"))
            throw std::invalid_argument("correlated-rayleigh requires u12 and u22");
        file.sim.model = FadingModel::correlated_rayleigh(matrix_from_json(j.at("u12")),
                                                          matrix_from_json(j.at("u22")));
    } else {
        if (j.contains("u12") || j.contains("u22"))
            throw std::invalid_argument("u12/u22 only apply to correlated-rayleigh");
        file.sim.model = {kind, {}, {}};
    }

    if (j.contains("snr_grid_db"))
        file.sim.snr_grid_db = j.at("snr_grid_db").get<std::vector<double>>();
    if (j.contains("trials")) file.sim.trials = j.at("trials").get<int>();
    if (j.contains("seed")) file.sim.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("alpha")) file.sim.alpha = j.at("alpha").get<double>();
    if (j.contains("scheme")) file.scheme = j.at("scheme").get<std::string>();
    if (j.contains("subspace")) file.subspace = j.at("subspace").get<std::string>();
    if (j.contains("basis")) file.basis = matrix_from_json(j.at("basis"));
    file.sim.validate();
    return file;
}

std::string utc_timestamp_now() {
    std::time_t t = std::time(nullptr);
    if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH"))
        t = static_cast<std::time_t>(std::strtoll(epoch, nullptr, 10));
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

Json manifest_to_json(const RunManifest& manifest) {
    Json params;
    for (const auto& [key, value] : manifest.parameters) params[key] = value;
    return Json{{"command", manifest.command},
                {"parameters", params},
                {"seed", manifest.seed},
                {"toolkit_version", manifest.toolkit_version},
                {"started_at", manifest.started_at},
                {"finished_at", manifest.finished_at}};
}

void write_rates_csv(const std::string& path, const std::vector<double>& snr_grid_db,
                     const std::vector<double>& r1_rates,
                     const std::vector<double>& r2_rates,
                     const std::vector<double>& interference_power) {
    std::string out = "snr_db,mean_rate_r1_bits,mean_rate_r2_bits,interference_power_subspace\n";
    for (std::size_t i = 0; i < snr_grid_db.size(); ++i) {
        out += format_double(snr_grid_db[i]) + "," + format_double(r1_rates[i]) + "," +
               format_double(r2_rates[i]) + "," + format_double(interference_power[i]) +
               "\n";
    }
    write_text_file(path, out);
}

void write_plot_csv(const std::string& path, const std::vector<double>& snr_grid_db,
                    const std::vector<std::pair<std::string, std::vector<double>>>& series) {
    std::string out = "snr_db,series,value\n";
    for (const auto& [name, values] : series)
        for (std::size_t i = 0; i < snr_grid_db.size(); ++i)
            out += format_double(snr_grid_db[i]) + "," + name + "," +
                   format_double(values[i]) + "\n";
    write_text_file(path, out);
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f << content;
    if (!f) throw std::runtime_error("write failed: " + path);
}

}  // namespace dofatlas
