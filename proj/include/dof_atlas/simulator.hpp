#pragma once

#include "dof_atlas/fading.hpp"
#include "dof_atlas/regions.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace dofatlas {

/// Parameters of one Monte Carlo experiment. The grid must have at least 3
/// points spanning at least 20 dB (slope fits need leverage) and at least
/// 50 trials per point.
struct SimConfig {
    AntennaConfig config;
    FadingModel model = FadingModel::iid_rayleigh();
    std::vector<double> snr_grid_db = {30, 35, 40, 45, 50, 55, 60};
    int trials = 200;
    std::uint64_t seed = 0;
    double alpha = 0.5;  // uniform-signaling exponent, in [0, 1/2] where used

    void validate() const;
};

/// Fitted multiplexing-gain estimate: least-squares slope of mean rate
/// against log2(P) over the SNR grid.
struct SlopeEstimate {
    std::vector<double> snr_grid_db;
    std::vector<double> mean_rates_bits;
    double slope = 0.0;
    double stderr_value = 0.0;
    double r_squared = 1.0;
};

/// Interference occupancy of a receive subspace at R2: per-SNR mean of
/// trace(B* K B) for the interference covariance K, plus the fitted growth
/// exponent of that power versus log2(P).
struct LocalizationReport {
    int subspace_dim = 0;
    std::vector<double> per_snr_interference_power;
    double occupancy_slope = 0.0;
};

/// log2 det(I + S^{-1/2} H Q H* S^{-1/2}) in bits, computed through
/// Cholesky factors of S and of the whitened Gram matrix. Throws
/// std::domain_error when S is not positive definite.
double gaussian_rate(const Matrix& h_desired, const Matrix& q_signal,
                     const Matrix& s_noise_plus_interference);

SlopeEstimate fit_slope(const std::vector<double>& snr_grid_db,
                        const std::vector<double>& rates);

/// Receive zero-forcing at the corner (N2-M2, M2): T1 sends N2-M2 streams
/// on fixed antenna columns, T2 sends M2 streams; each receiver projects
/// onto the orthogonal complement of its interference span. Returns the
/// fitted (R1, R2) slope estimates. Requires the asymmetric IC regime.
std::pair<SlopeEstimate, SlopeEstimate> zf_corner_scheme(const SimConfig& sim);

/// T2 silent, T1 sends min(M1,N1) equal-power streams; fitted R1 slope.
SlopeEstimate single_user_scheme(const SimConfig& sim);

struct UniformSignalingResult {
    SlopeEstimate r2_slope;        // interference treated as noise at R2
    LocalizationReport localization;  // random 1-D subspace occupancy
    SlopeEstimate r1_slope;        // zero-forced R1
};

/// The spread-interference counterexample: T1 sends M1 i.i.d. streams of
/// power P^alpha each, T2 sends M2 streams of power P/M2. Requires the
/// asymmetric IC regime and alpha in [0, 1/2].
UniformSignalingResult uniform_signaling_experiment(const SimConfig& sim);

struct ProbeScheme {
    enum class Kind { ZfCorner, Uniform } kind = Kind::ZfCorner;
};

struct ProbeSubspace {
    enum class Kind { InterferenceComplement, Random1d, GivenBasis } kind = Kind::Random1d;
    Matrix basis;  // GivenBasis only: N2 x dim, orthonormal columns

    /// The zero-forcing decoding subspace at R2 (orthogonal complement of
    /// the interference span); M2-dimensional under the zf-corner scheme.
    static ProbeSubspace interference_complement() {
        return {Kind::InterferenceComplement, {}};
    }
    static ProbeSubspace random_1d() { return {Kind::Random1d, {}}; }
    static ProbeSubspace given_basis(Matrix b) { return {Kind::GivenBasis, std::move(b)}; }
};

/// Measures interference occupancy at R2 for the chosen scheme and
/// subspace. The occupancy slope is fitted on log2(1 + power) so an exactly
/// interference-free subspace reports slope 0.
LocalizationReport localization_probe(const SimConfig& sim, const ProbeScheme& scheme,
                                      const ProbeSubspace& subspace);

}  // namespace dofatlas
