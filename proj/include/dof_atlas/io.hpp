#pragma once

#include "dof_atlas/fading.hpp"
#include "dof_atlas/regions.hpp"
#include "dof_atlas/simulator.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

// vendored single-header nlohmann/json
#include "json.hpp"

namespace dofatlas {

inline constexpr const char* kToolkitVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

using Json = nlohmann::ordered_json;

/// Region <-> JSON. Rationals travel as canonical "p/q" strings (q > 0,
/// gcd(p,q) = 1); parse followed by serialize is byte-identical.
Json region_to_json(const DofRegion& region);
DofRegion region_from_json(const Json& j);

/// Matrices as row-major arrays of [re, im] pairs.
Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j);

Json antenna_config_to_json(const AntennaConfig& config);
AntennaConfig antenna_config_from_json(const Json& j);

/// Simulation config file: SimConfig fields plus the probe-only selectors.
/// Unknown keys are rejected.
struct SimFileConfig {
    SimConfig sim;
    std::optional<std::string> scheme;    // probe: "zf-corner" | "uniform"
    std::optional<std::string> subspace;  // probe: "complement-of-desired" |
                                          // "random-1d" | "given-basis"
    std::optional<Matrix> basis;          // probe with subspace "given-basis"
};

SimFileConfig sim_file_from_json(const Json& j);

/// Reproducibility record embedded in every simulation summary. Timestamps
/// honor SOURCE_DATE_EPOCH when set (the usual reproducible-output
/// convention); otherwise they are wall-clock UTC.
struct RunManifest {
    std::string command;
    std::vector<std::pair<std::string, std::string>> parameters;
    std::uint64_t seed = 0;
    std::string toolkit_version = kToolkitVersion;
    std::string started_at;
    std::string finished_at;
};

std::string utc_timestamp_now();
Json manifest_to_json(const RunManifest& manifest);

/// results.csv: one row per SNR point with the fixed column set.
void write_rates_csv(const std::string& path, const std::vector<double>& snr_grid_db,
                     const std::vector<double>& r1_rates,
                     const std::vector<double>& r2_rates,
                     const std::vector<double>& interference_power);

/// Long-format companion (snr_db, series, value) for plotting tools.
void write_plot_csv(const std::string& path, const std::vector<double>& snr_grid_db,
                    const std::vector<std::pair<std::string, std::vector<double>>>& series);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace dofatlas
