#include "dof_atlas/simulator.hpp"

#include "dof_atlas/stats.hpp"

#include <cmath>
#include <cstdlib>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>

namespace dofatlas {

namespace {

double snr_db_to_power(double db) { return std::pow(10.0, db / 10.0); }

double snr_db_to_log2p(double db) { return db * std::log2(10.0) / 10.0; }

int thread_cap() {
    static const int cap = [] {
        const char* env = std::getenv("DOF_ATLAS_THREADS");
        if (env == nullptr) return 1;
        const int parsed = std::atoi(env);
        const int hw = static_cast<int>(std::thread::hardware_concurrency());
        return std::max(1, std::min(parsed, hw > 0 ? hw : 1));
    }();
    return cap;
}

// Runs fn(i) for i in [0, n); chunked across DOF_ATLAS_THREADS threads when
// that is set above 1. Callers write into per-index slots and reduce in
// index order afterwards, so results match sequential execution bitwise.
void parallel_for(int n, const std::function<void(int)>& fn) {
    const int threads = std::min(thread_cap(), n);
    if (threads <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            for (int i = t; i < n; i += threads) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

// Per-SNR means of `width` per-trial scalars. Each trial gets its own
// counter-derived stream keyed by (seed, SNR index, trial index).
std::vector<std::vector<double>> per_snr_means(
    const SimConfig& sim, int width,
    const std::function<void(double p, RandomStream& rng, double* out)>& trial_fn) {
    std::vector<std::vector<double>> means(width,
                                           std::vector<double>(sim.snr_grid_db.size()));
    for (std::size_t si = 0; si < sim.snr_grid_db.size(); ++si) {
        const double p = snr_db_to_power(sim.snr_grid_db[si]);
        std::vector<double> slots(static_cast<std::size_t>(width) * sim.trials);
        parallel_for(sim.trials, [&](int trial) {
            RandomStream rng = RandomStream::derive(sim.seed, si, trial);
            trial_fn(p, rng, &slots[static_cast<std::size_t>(trial) * width]);
        });
        for (int k = 0; k < width; ++k) {
            double sum = 0.0;
            for (int trial = 0; trial < sim.trials; ++trial)
                sum += slots[static_cast<std::size_t>(trial) * width + k];
            means[k][si] = sum / sim.trials;
        }
    }
    return means;
}

Matrix random_unit_vector(int dim, RandomStream& rng) {
    Matrix v = draw_iid_rayleigh(dim, 1, rng);
    return v / v.norm();
}

double subspace_power(const Matrix& basis, const Matrix& k_int) {
    return (basis.adjoint() * k_int * basis).trace().real();
}

// Occupancy exponent: slope of log2(1 + power) against log2(P). The 1+
// keeps an exactly interference-free subspace at slope 0.
double fit_occupancy_slope(const std::vector<double>& snr_grid_db,
                           const std::vector<double>& powers) {
    std::vector<double> x(snr_grid_db.size()), y(powers.size());
    for (std::size_t i = 0; i < snr_grid_db.size(); ++i) {
        x[i] = snr_db_to_log2p(snr_grid_db[i]);
        y[i] = std::log2(1.0 + powers[i]);
    }
    return linear_fit(x, y).slope;
}

void require_asymmetric_ic(const AntennaConfig& config) {
    if (classify(config).ic != RegimeTag::Asymmetric)
        throw UnsupportedRegime("scheme requires the asymmetric IC regime");
}

}  // namespace

void SimConfig::validate() const {
    config.validate();
    if (snr_grid_db.size() < 3)
        throw std::invalid_argument("SNR grid needs at least 3 points");
    for (std::size_t i = 1; i < snr_grid_db.size(); ++i)
        if (snr_grid_db[i] <= snr_grid_db[i - 1])
            throw std::invalid_argument("SNR grid must be strictly ascending");
    if (snr_grid_db.back() - snr_grid_db.front() < 20.0)
        throw std::invalid_argument("SNR grid must span at least 20 dB");
    if (trials < 50) throw std::invalid_argument("need at least 50 trials per point");
    if (!(alpha >= 0.0 && alpha <= 0.5))
        throw std::invalid_argument("alpha must be in [0, 1/2]");
}

double gaussian_rate(const Matrix& h_desired, const Matrix& q_signal,
                     const Matrix& s_noise_plus_interference) {
    const Eigen::Index nr = h_desired.rows();
    const Eigen::Index nt = h_desired.cols();
    if (q_signal.rows() != nt || q_signal.cols() != nt ||
        s_noise_plus_interference.rows() != nr || s_noise_plus_interference.cols() != nr)
        throw std::invalid_argument("gaussian_rate: dimension mismatch");

    Eigen::LLT<Matrix> s_chol(s_noise_plus_interference);
    if (s_chol.info() != Eigen::Success)
        throw std::domain_error("noise-plus-interference covariance is not positive definite");

    const Matrix whitened = s_chol.matrixL().solve(h_desired);
    const Matrix gram =
        Matrix::Identity(nr, nr) + whitened * q_signal * whitened.adjoint();
    Eigen::LLT<Matrix> g_chol(gram);
    double bits = 0.0;
    for (Eigen::Index i = 0; i < nr; ++i)
        bits += 2.0 * std::log2(g_chol.matrixLLT()(i, i).real());
    return std::max(bits, 0.0);
}

SlopeEstimate fit_slope(const std::vector<double>& snr_grid_db,
                        const std::vector<double>& rates) {
    if (snr_grid_db.size() != rates.size())
        throw std::invalid_argument("grid/rate length mismatch");
    std::vector<double> x(snr_grid_db.size());
    for (std::size_t i = 0; i < snr_grid_db.size(); ++i) {
        if (i > 0 && snr_grid_db[i] <= snr_grid_db[i - 1])
            throw std::invalid_argument("SNR grid must be strictly ascending");
        x[i] = snr_db_to_log2p(snr_grid_db[i]);
    }
    const LinearFit fit = linear_fit(x, rates);
    SlopeEstimate est;
    est.snr_grid_db = snr_grid_db;
    est.mean_rates_bits = rates;
    est.slope = fit.slope;
    est.stderr_value = fit.slope_stderr;
    est.r_squared = fit.r_squared;
    return est;
}

std::pair<SlopeEstimate, SlopeEstimate> zf_corner_scheme(const SimConfig& sim) {
    sim.validate();
    require_asymmetric_ic(sim.config);
    const int n_streams1 = sim.config.n2 - sim.config.m2;
    const int m2 = sim.config.m2;

    const auto means = per_snr_means(sim, 2, [&](double p, RandomStream& rng, double* out) {
        const ChannelDraw ch = draw_channel(sim.config, sim.model, rng);
        // R1 nulls T2's M2 interference dimensions.
        const Matrix b1 = null_space_basis(ch.h12);
        const Matrix g1 = b1.adjoint() * ch.h12;
        const Matrix s1 = Matrix::Identity(b1.cols(), b1.cols()) +
                          (p / m2) * g1 * g1.adjoint();
        out[0] = gaussian_rate(b1.adjoint() * ch.h11.leftCols(n_streams1),
                               (p / n_streams1) * Matrix::Identity(n_streams1, n_streams1),
                               s1);
        // R2 nulls the N2-M2 dimensions T1's streams occupy.
        const Matrix interf = ch.h21.leftCols(n_streams1);
        const Matrix b2 = null_space_basis(interf);
        const Matrix g2 = b2.adjoint() * interf;
        const Matrix s2 = Matrix::Identity(b2.cols(), b2.cols()) +
                          (p / n_streams1) * g2 * g2.adjoint();
        out[1] = gaussian_rate(b2.adjoint() * ch.h22,
                               (p / m2) * Matrix::Identity(m2, m2), s2);
    });
    return {fit_slope(sim.snr_grid_db, means[0]), fit_slope(sim.snr_grid_db, means[1])};
}

SlopeEstimate single_user_scheme(const SimConfig& sim) {
    sim.validate();
    const int streams = std::min(sim.config.m1, sim.config.n1);
    const auto means = per_snr_means(sim, 1, [&](double p, RandomStream& rng, double* out) {
        const ChannelDraw ch = draw_channel(sim.config, sim.model, rng);
        out[0] = gaussian_rate(ch.h11.leftCols(streams),
                               (p / streams) * Matrix::Identity(streams, streams),
                               Matrix::Identity(sim.config.n1, sim.config.n1));
    });
    return fit_slope(sim.snr_grid_db, means[0]);
}

UniformSignalingResult uniform_signaling_experiment(const SimConfig& sim) {
    sim.validate();
    require_asymmetric_ic(sim.config);
    const int m1 = sim.config.m1, m2 = sim.config.m2, n2 = sim.config.n2;

    const auto means = per_snr_means(sim, 3, [&](double p, RandomStream& rng, double* out) {
        const ChannelDraw ch = draw_channel(sim.config, sim.model, rng);
        const Matrix probe = random_unit_vector(n2, rng);
        const double p_alpha = std::pow(p, sim.alpha);

        // R2 decodes its own streams with the spread interference as noise.
        const Matrix k_int = p_alpha * ch.h21 * ch.h21.adjoint();
        out[0] = gaussian_rate(ch.h22, (p / m2) * Matrix::Identity(m2, m2),
                               Matrix::Identity(n2, n2) + k_int);
        out[1] = subspace_power(probe, k_int);
        // R1 zero-forces T2 and receives all M1 uniform streams.
        const Matrix b1 = null_space_basis(ch.h12);
        const Matrix g1 = b1.adjoint() * ch.h12;
        const Matrix s1 = Matrix::Identity(b1.cols(), b1.cols()) +
                          (p / m2) * g1 * g1.adjoint();
        out[2] = gaussian_rate(b1.adjoint() * ch.h11,
                               p_alpha * Matrix::Identity(m1, m1), s1);
    });

    UniformSignalingResult result;
    result.r2_slope = fit_slope(sim.snr_grid_db, means[0]);
    result.localization.subspace_dim = 1;
    result.localization.per_snr_interference_power = means[1];
    result.localization.occupancy_slope = fit_occupancy_slope(sim.snr_grid_db, means[1]);
    result.r1_slope = fit_slope(sim.snr_grid_db, means[2]);
    return result;
}

LocalizationReport localization_probe(const SimConfig& sim, const ProbeScheme& scheme,
                                      const ProbeSubspace& subspace) {
    sim.validate();
    require_asymmetric_ic(sim.config);
    const int n2 = sim.config.n2;
    if (subspace.kind == ProbeSubspace::Kind::GivenBasis) {
        if (subspace.basis.rows() != n2 || subspace.basis.cols() < 1 ||
            subspace.basis.cols() > n2)
            throw std::invalid_argument("subspace dimension exceeds N2 or basis empty");
        const Matrix gram = subspace.basis.adjoint() * subspace.basis;
        if ((gram - Matrix::Identity(gram.rows(), gram.cols())).norm() > 1e-8)
            throw std::invalid_argument("basis columns must be orthonormal");
    }

    int reported_dim = -1;
    const auto means = per_snr_means(sim, 2, [&](double p, RandomStream& rng, double* out) {
        const ChannelDraw ch = draw_channel(sim.config, sim.model, rng);

        Matrix interf_cols;  // columns generating the interference at R2
        double per_stream_power = 0.0;
        if (scheme.kind == ProbeScheme::Kind::ZfCorner) {
            const int n_streams1 = sim.config.n2 - sim.config.m2;
            interf_cols = ch.h21.leftCols(n_streams1);
            per_stream_power = p / n_streams1;
        } else {
            interf_cols = ch.h21;
            per_stream_power = std::pow(p, sim.alpha);
        }
        const Matrix k_int = per_stream_power * interf_cols * interf_cols.adjoint();

        Matrix basis;
        switch (subspace.kind) {
            case ProbeSubspace::Kind::InterferenceComplement:
                basis = null_space_basis(interf_cols);
                if (basis.cols() == 0)
                    throw std::domain_error(
                        "interference spans the full receive space; nothing to probe");
                break;
            case ProbeSubspace::Kind::Random1d:
                basis = random_unit_vector(n2, rng);
                break;
            case ProbeSubspace::Kind::GivenBasis:
                basis = subspace.basis;
                break;
        }
        out[0] = subspace_power(basis, k_int);
        out[1] = static_cast<double>(basis.cols());
    });
    reported_dim = static_cast<int>(std::lround(means[1].front()));

    LocalizationReport report;
    report.subspace_dim = reported_dim;
    report.per_snr_interference_power = means[0];
    report.occupancy_slope = fit_occupancy_slope(sim.snr_grid_db, means[0]);
    return report;
}

}  // namespace dofatlas
