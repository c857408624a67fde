#pragma once

#include "dof_atlas/random.hpp"
#include "dof_atlas/regions.hpp"

#include <Eigen/Dense>

#include <functional>
#include <vector>

namespace dofatlas {

using Matrix = Eigen::MatrixXcd;

/// One realization of the four channel matrices; h_ij connects transmitter
/// j to receiver i.
struct ChannelDraw {
    Matrix h11, h12, h21, h22;
};

enum class FadingKind { IidRayleigh, Isotropic, CorrelatedRayleigh };

struct FadingModel {
    FadingKind kind = FadingKind::IidRayleigh;
    Matrix u12, u22;  // receive-side rotations, correlated Rayleigh only

    static FadingModel iid_rayleigh() { return {FadingKind::IidRayleigh, {}, {}}; }
    static FadingModel isotropic() { return {FadingKind::Isotropic, {}, {}}; }
    static FadingModel correlated_rayleigh(Matrix u12, Matrix u22) {
        return {FadingKind::CorrelatedRayleigh, std::move(u12), std::move(u22)};
    }
};

std::string to_string(FadingKind kind);
FadingKind fading_kind_from_string(const std::string& name);

/// rows x cols matrix of i.i.d. CN(0,1) entries.
Matrix draw_iid_rayleigh(int rows, int cols, RandomStream& rng);

/// Unitary matrix distributed per the Haar measure: QR of an i.i.d. complex
/// Gaussian matrix with the phases of the R diagonal absorbed into Q.
Matrix draw_haar_unitary(int dim, RandomStream& rng);

/// One channel realization under the requested fading model. Under
/// correlated Rayleigh the cross matrices are rotated structured factors
/// whose last N2-M2 rows are exactly zero before rotation.
ChannelDraw draw_channel(const AntennaConfig& config, const FadingModel& model,
                         RandomStream& rng);

/// H = u * lambda * v^*, with u full N x N unitary, lambda N x min(N,M)
/// carrying the descending singular values on its top-square diagonal
/// (structural zeros exact), and v M x min(N,M) semi-unitary. Deterministic
/// for a fixed input: the first nonzero entry of each right-singular vector
/// is made real positive.
struct SvdFactors {
    Matrix u;
    Eigen::MatrixXd lambda;
    Matrix v;

    Matrix reconstruct() const { return u * lambda * v.adjoint(); }
};

SvdFactors svd_ordered(const Matrix& h);

/// H = q * r for tall H (N2 >= M2): q N2 x N2 unitary, r N2 x M2 with its
/// top M2 x M2 block upper-triangular, everything below exactly zero, and a
/// real nonnegative diagonal (the convention that makes the factorization
/// a.s. unique and q Haar for Gaussian input).
struct QrFactors {
    Matrix q;
    Matrix r;

    Matrix reconstruct() const { return q * r; }
};

QrFactors qr_tall(const Matrix& h);

using MatrixSampler = std::function<Matrix(RandomStream&)>;

/// Distribution-invariance check for H ~ HU: draws two independent sample
/// sets {H_k} and {H'_k U} and compares (i) pooled entry real/imaginary
/// parts and (ii) singular values with two-sample KS tests. Passes iff both
/// p-values exceed 0.01.
struct IsotropyReport {
    std::size_t samples = 0;
    double entries_statistic = 0.0;
    double entries_p_value = 1.0;
    double sv_statistic = 0.0;
    double sv_p_value = 1.0;
    bool pass = false;
};

IsotropyReport test_isotropy(const MatrixSampler& sampler, const Matrix& u,
                             std::size_t samples, RandomStream& rng);

/// Output grouping for the receive-space partition argument: [1:N1] split
/// into n singleton sets, m sets of size M2 and one trailing set of size
/// N2, each padded by fictitious outputs up to N2.
struct PartitionPlan {
    AntennaConfig config;
    int m = 0;
    int n = 0;
    std::vector<std::vector<int>> actual_sets;  // 1-based; S_1..S_{n+m}, then S_0
    std::vector<int> fictitious_counts;         // aligned with actual_sets
};

/// Requires N1 = M1 + M2 and N1 > N2 > M2. m = floor((N1-N2)/M2),
/// n = (N1-N2) - m*M2.
PartitionPlan partition_plan(const AntennaConfig& config);

/// Assembles the N1 x N1 composite matrix whose almost-sure invertibility
/// underwrites the partition argument, for stream index k in [1:M2]: left
/// block i.i.d. Rayleigh, right block stacked from the R factors of
/// independent tall QR draws (row k per singleton set, first M2 rows per
/// M2-sized set, first N2 rows for the trailing set).
Matrix build_gk(const AntennaConfig& config, int k, RandomStream& rng);

/// Orthonormal basis of the orthogonal complement of the column space of a,
/// with numerical rank cut at singular values below 1e-10 * sigma_max.
Matrix null_space_basis(const Matrix& a);

}  // namespace dofatlas
