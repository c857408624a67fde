#include "dof_atlas/fading.hpp"

#include "dof_atlas/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dofatlas {

namespace {

constexpr double kUnitaryTol = 1e-8;

bool is_unitary(const Matrix& u) {
    if (u.rows() != u.cols()) return false;
    return (u.adjoint() * u - Matrix::Identity(u.cols(), u.cols())).norm() < kUnitaryTol;
}

}  // namespace

std::string to_string(FadingKind kind) {
    switch (kind) {
        case FadingKind::IidRayleigh: return "iid-rayleigh";
        case FadingKind::Isotropic: return "isotropic";
        case FadingKind::CorrelatedRayleigh: return "correlated-rayleigh";
    }
    return "iid-rayleigh";
}

FadingKind fading_kind_from_string(const std::string& name) {
    if (name == "iid-rayleigh") return FadingKind::IidRayleigh;
    if (name == "isotropic") return FadingKind::Isotropic;
    if (name == "correlated-rayleigh") return FadingKind::CorrelatedRayleigh;
    throw std::invalid_argument("unknown fading model: " + name);
}

Matrix draw_iid_rayleigh(int rows, int cols, RandomStream& rng) {
    if (rows < 1 || cols < 1) throw std::invalid_argument("matrix dims must be >= 1");
    Matrix h(rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) h(r, c) = rng.complex_gaussian();
    return h;
}

Matrix draw_haar_unitary(int dim, RandomStream& rng) {
    return qr_tall(draw_iid_rayleigh(dim, dim, rng)).q;
}

ChannelDraw draw_channel(const AntennaConfig& config, const FadingModel& model,
                         RandomStream& rng) {
    config.validate();
    ChannelDraw ch;
    switch (model.kind) {
        case FadingKind::IidRayleigh:
        case FadingKind::Isotropic:
            // i.i.d. Rayleigh is isotropic; both tags draw the same way.
            ch.h11 = draw_iid_rayleigh(config.n1, config.m1, rng);
            ch.h12 = draw_iid_rayleigh(config.n1, config.m2, rng);
            ch.h21 = draw_iid_rayleigh(config.n2, config.m1, rng);
            ch.h22 = draw_iid_rayleigh(config.n2, config.m2, rng);
            break;
        case FadingKind::CorrelatedRayleigh: {
            if (config.n2 <= config.m2)
                throw std::invalid_argument("correlated Rayleigh requires N2 > M2");
            const int zero_rows = config.n2 - config.m2;
            if (zero_rows > config.n1)
                throw std::invalid_argument("correlated Rayleigh requires N1 >= N2 - M2");
            if (model.u12.rows() != config.n1 || model.u12.cols() != config.n1 ||
                model.u22.rows() != config.n2 || model.u22.cols() != config.n2)
                throw std::invalid_argument("rotation matrix dimensions do not match config");
            if (!is_unitary(model.u12) || !is_unitary(model.u22))
                throw std::invalid_argument("rotation matrices must be unitary");
            ch.h11 = draw_iid_rayleigh(config.n1, config.m1, rng);
            Matrix f12 = Matrix::Zero(config.n1, config.m2);
            f12.topRows(config.n1 - zero_rows) =
                draw_iid_rayleigh(config.n1 - zero_rows, config.m2, rng);
            ch.h12 = model.u12 * f12;
            ch.h21 = draw_iid_rayleigh(config.n2, config.m1, rng);
            Matrix f22 = Matrix::Zero(config.n2, config.m2);
            f22.topRows(config.m2) = draw_iid_rayleigh(config.m2, config.m2, rng);
            ch.h22 = model.u22 * f22;
            break;
        }
    }
    return ch;
}

SvdFactors svd_ordered(const Matrix& h) {
    if (h.rows() < 1 || h.cols() < 1) throw std::invalid_argument("empty matrix");
    const auto k = std::min(h.rows(), h.cols());
    Eigen::JacobiSVD<Matrix> svd(h, Eigen::ComputeFullU | Eigen::ComputeThinV);

    SvdFactors out;
    out.u = svd.matrixU();
    out.v = svd.matrixV();
    out.lambda = Eigen::MatrixXd::Zero(h.rows(), k);
    out.lambda.topLeftCorner(k, k).diagonal() = svd.singularValues();

    // Phase convention: first nonzero entry of each right-singular vector
    // made real positive; the matching left column absorbs the same phase.
    for (Eigen::Index j = 0; j < k; ++j) {
        for (Eigen::Index i = 0; i < out.v.rows(); ++i) {
            const std::complex<double> pivot = out.v(i, j);
            if (std::abs(pivot) > 1e-12) {
                const std::complex<double> phase = std::conj(pivot) / std::abs(pivot);
                out.v.col(j) *= phase;
                out.u.col(j) *= phase;
                break;
            }
        }
    }
    return out;
}

QrFactors qr_tall(const Matrix& h) {
    if (h.rows() < 1 || h.cols() < 1) throw std::invalid_argument("empty matrix");
    if (h.rows() < h.cols())
        throw std::invalid_argument("qr_tall requires rows >= cols");
    Eigen::HouseholderQR<Matrix> qr(h);
    QrFactors out;
    out.q = qr.householderQ() * Matrix::Identity(h.rows(), h.rows());
    out.r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index j = 0; j < h.cols(); ++j) {
        const double mag = std::abs(out.r(j, j));
        if (mag == 0.0) continue;
        const std::complex<double> phase = std::conj(out.r(j, j)) / mag;
        out.r.row(j) *= phase;
        out.q.col(j) *= std::conj(phase);
        out.r(j, j) = mag;  // kill the rounding residue, keep the diagonal exact-real
    }
    return out;
}

IsotropyReport test_isotropy(const MatrixSampler& sampler, const Matrix& u,
                             std::size_t samples, RandomStream& rng) {
    if (samples < 1000) throw std::invalid_argument("isotropy test needs >= 1000 samples");
    if (u.rows() != u.cols()) throw std::invalid_argument("u must be square");
    {
        const Matrix probe = sampler(rng);
        if (probe.cols() != u.rows())
            throw std::invalid_argument("sampler output incompatible with u");
    }

    std::vector<double> entries_a, entries_b, sv_a, sv_b;
    auto collect = [](const Matrix& h, std::vector<double>& entries,
                      std::vector<double>& svs) {
        for (Eigen::Index r = 0; r < h.rows(); ++r)
            for (Eigen::Index c = 0; c < h.cols(); ++c) {
                entries.push_back(h(r, c).real());
                entries.push_back(h(r, c).imag());
            }
        Eigen::JacobiSVD<Matrix> svd(h);
        for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
            svs.push_back(svd.singularValues()(i));
    };
    for (std::size_t i = 0; i < samples; ++i) collect(sampler(rng), entries_a, sv_a);
    for (std::size_t i = 0; i < samples; ++i) {
        const Matrix h = sampler(rng) * u;
        collect(h, entries_b, sv_b);
    }

    // Samples whose pooled spread is below double-precision resolution are
    // numerically identical distributions (e.g. singular values of unitary
    // draws, which are all exactly 1); KS on the rounding jitter would be
    // meaningless there.
    auto compare = [](const std::vector<double>& a, const std::vector<double>& b,
                      double& stat, double& p) {
        const auto [lo_a, hi_a] = std::minmax_element(a.begin(), a.end());
        const auto [lo_b, hi_b] = std::minmax_element(b.begin(), b.end());
        if (std::max(*hi_a, *hi_b) - std::min(*lo_a, *lo_b) < 1e-9) {
            stat = 0.0;
            p = 1.0;
            return;
        }
        stat = ks_statistic(a, b);
        p = ks_pvalue(stat, a.size(), b.size());
    };

    IsotropyReport report;
    report.samples = samples;
    compare(entries_a, entries_b, report.entries_statistic, report.entries_p_value);
    compare(sv_a, sv_b, report.sv_statistic, report.sv_p_value);
    report.pass = report.entries_p_value > 0.01 && report.sv_p_value > 0.01;
    return report;
}

PartitionPlan partition_plan(const AntennaConfig& config) {
    config.validate();
    if (config.n1 != config.m1 + config.m2)
        throw std::invalid_argument("partition requires N1 = M1 + M2");
    if (!(config.n1 > config.n2 && config.n2 > config.m2))
        throw std::invalid_argument("partition requires N1 > N2 > M2");

    PartitionPlan plan;
    plan.config = config;
    plan.m = (config.n1 - config.n2) / config.m2;
    plan.n = (config.n1 - config.n2) - plan.m * config.m2;

    for (int i = 1; i <= plan.n; ++i) {
        plan.actual_sets.push_back({i});
        plan.fictitious_counts.push_back(config.n2 - 1);
    }
    for (int j = 1; j <= plan.m; ++j) {
        std::vector<int> block;
        for (int idx = plan.n + (j - 1) * config.m2 + 1; idx <= plan.n + j * config.m2; ++idx)
            block.push_back(idx);
        plan.actual_sets.push_back(std::move(block));
        plan.fictitious_counts.push_back(config.n2 - config.m2);
    }
    std::vector<int> tail;
    for (int idx = config.n1 - config.n2 + 1; idx <= config.n1; ++idx) tail.push_back(idx);
    plan.actual_sets.push_back(std::move(tail));
    plan.fictitious_counts.push_back(0);
    return plan;
}

Matrix build_gk(const AntennaConfig& config, int k, RandomStream& rng) {
    const PartitionPlan plan = partition_plan(config);
    if (k < 1 || k > config.m2) throw std::invalid_argument("k must be in [1:M2]");

    Matrix g(config.n1, config.n1);
    g.leftCols(config.m1) = draw_iid_rayleigh(config.n1, config.m1, rng);

    int row = 0;
    auto next_r = [&] {
        return qr_tall(draw_iid_rayleigh(config.n2, config.m2, rng)).r;
    };
    for (int i = 0; i < plan.n; ++i) {
        g.block(row, config.m1, 1, config.m2) = next_r().row(k - 1);
        row += 1;
    }
    for (int j = 0; j < plan.m; ++j) {
        g.block(row, config.m1, config.m2, config.m2) = next_r().topRows(config.m2);
        row += config.m2;
    }
    g.block(row, config.m1, config.n2, config.m2) = next_r().topRows(config.n2);
    return g;
}

Matrix null_space_basis(const Matrix& a) {
    Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullU);
    const auto& sv = svd.singularValues();
    const double cutoff = sv.size() > 0 ? 1e-10 * sv(0) : 0.0;
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > cutoff && sv(i) > 0.0) ++rank;
    return svd.matrixU().rightCols(a.rows() - rank);
}

}  // namespace dofatlas
