#include "dof_atlas/fading.hpp"
#include "dof_atlas/stats.hpp"

#include "doctest.h"

#include <cmath>

using namespace dofatlas;

namespace {

bool bitwise_equal(const Matrix& a, const Matrix& b) {
    return a.rows() == b.rows() && a.cols() == b.cols() &&
           (a.array() == b.array()).all();
}

double unitarity_error(const Matrix& u) {
    return (u.adjoint() * u - Matrix::Identity(u.cols(), u.cols())).norm();
}

}  // namespace

TEST_CASE("seeded draws are deterministic") {
    RandomStream a(0), b(0);
    CHECK(bitwise_equal(draw_iid_rayleigh(2, 2, a), draw_iid_rayleigh(2, 2, b)));

    RandomStream c = RandomStream::derive(7, 3, 11);
    RandomStream d = RandomStream::derive(7, 3, 11);
    CHECK(bitwise_equal(draw_haar_unitary(4, c), draw_haar_unitary(4, d)));

    RandomStream e = RandomStream::derive(7, 11, 3);  // indices are not interchangeable
    RandomStream f = RandomStream::derive(7, 3, 11);
    CHECK_FALSE(bitwise_equal(draw_haar_unitary(4, f), draw_haar_unitary(4, e)));
}

TEST_CASE("iid Rayleigh entries have unit second moment and exponential tail") {
    RandomStream rng(42);
    double sum_sq = 0.0;
    int tail = 0;
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) {
        const Matrix h = draw_iid_rayleigh(3, 2, rng);
        for (Eigen::Index r = 0; r < 3; ++r)
            for (Eigen::Index c = 0; c < 2; ++c) sum_sq += std::norm(h(r, c));
        if (std::norm(h(0, 0)) > 1.0) ++tail;
    }
    CHECK(sum_sq / (6.0 * draws) == doctest::Approx(1.0).epsilon(0.02));
    CHECK(static_cast<double>(tail) / draws ==
          doctest::Approx(std::exp(-1.0)).epsilon(0.03));

    CHECK_THROWS_AS(draw_iid_rayleigh(0, 2, rng), std::invalid_argument);
}

TEST_CASE("Haar unitaries: unitarity, phase uniformity, column symmetry") {
    RandomStream rng(1);
    for (int dim : {1, 3, 5, 16})
        CHECK(unitarity_error(draw_haar_unitary(dim, rng)) < 1e-10);

    std::complex<double> mean{0.0, 0.0};
    double mean_sq_u11 = 0.0;
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) {
        const Matrix u1 = draw_haar_unitary(1, rng);
        mean += u1(0, 0);
    }
    CHECK(std::abs(mean.real()) / draws < 0.02);
    CHECK(std::abs(mean.imag()) / draws < 0.02);

    for (int i = 0; i < draws; ++i) {
        const Matrix u = draw_haar_unitary(4, rng);
        mean_sq_u11 += std::norm(u(0, 0));
    }
    CHECK(mean_sq_u11 / draws == doctest::Approx(0.25).epsilon(0.04));
}

TEST_CASE("draw_channel shapes and correlated Rayleigh structure") {
    RandomStream rng(5);
    const AntennaConfig fig{3, 1, 5, 2};
    const ChannelDraw ch = draw_channel(fig, FadingModel::iid_rayleigh(), rng);
    CHECK(ch.h11.rows() == 5);
    CHECK(ch.h11.cols() == 3);
    CHECK(ch.h22.rows() == 2);
    CHECK(ch.h22.cols() == 1);

    // Identity rotations expose the structured factor: the last N2-M2 rows
    // of h22 (and of the h12 factor) are exactly zero.
    const AntennaConfig table{5, 2, 7, 3};
    const FadingModel ident = FadingModel::correlated_rayleigh(
        Matrix::Identity(7, 7), Matrix::Identity(3, 3));
    const ChannelDraw corr = draw_channel(table, ident, rng);
    CHECK((corr.h22.row(2).array() == std::complex<double>(0.0, 0.0)).all());
    CHECK((corr.h12.row(6).array() == std::complex<double>(0.0, 0.0)).all());
    CHECK((corr.h11.row(6).array() != std::complex<double>(0.0, 0.0)).any());

    // Haar rotations keep h22 full rank almost surely.
    const FadingModel rotated = FadingModel::correlated_rayleigh(
        draw_haar_unitary(7, rng), draw_haar_unitary(3, rng));
    int full_rank = 0;
    const int draws = 10000;
    for (int i = 0; i < draws; ++i) {
        const ChannelDraw c = draw_channel(table, rotated, rng);
        Eigen::JacobiSVD<Matrix> svd(c.h22);
        if (svd.singularValues()(1) > 1e-10 * svd.singularValues()(0)) ++full_rank;
    }
    CHECK(full_rank == draws);

    CHECK_THROWS_AS(draw_channel(table,
                                 FadingModel::correlated_rayleigh(
                                     Matrix::Identity(6, 6), Matrix::Identity(3, 3)),
                                 rng),
                    std::invalid_argument);
    CHECK_THROWS_AS(draw_channel({5, 3, 7, 3}, ident, rng), std::invalid_argument);
}

TEST_CASE("svd_ordered worked examples") {
    const SvdFactors ident = svd_ordered(Matrix::Identity(3, 3));
    CHECK(ident.lambda.diagonal().isApprox(Eigen::VectorXd::Ones(3), 1e-12));

    Matrix diag = Matrix::Zero(2, 2);
    diag(0, 0) = 2.0;
    diag(1, 1) = 1.0;
    const SvdFactors d = svd_ordered(diag);
    CHECK(d.lambda(0, 0) == doctest::Approx(2.0));
    CHECK(d.lambda(1, 1) == doctest::Approx(1.0));
    CHECK((d.u - Matrix::Identity(2, 2)).norm() < 1e-10);
    CHECK((d.v - Matrix::Identity(2, 2)).norm() < 1e-10);

    RandomStream rng(9);
    const Matrix h = draw_iid_rayleigh(2, 3, rng);
    const SvdFactors f = svd_ordered(h);
    CHECK((f.reconstruct() - h).norm() / h.norm() < 1e-10);
    const double energy = f.lambda.diagonal().squaredNorm();
    CHECK(energy == doctest::Approx(h.squaredNorm()).epsilon(1e-10));
}

TEST_CASE("qr_tall worked examples") {
    Matrix upper = Matrix::Zero(2, 2);
    upper(0, 0) = 2.0;
    upper(0, 1) = std::complex<double>(0.5, -0.25);
    upper(1, 1) = 1.5;
    const QrFactors fixed_point = qr_tall(upper);
    CHECK((fixed_point.q - Matrix::Identity(2, 2)).norm() < 1e-10);
    CHECK((fixed_point.r - upper).norm() < 1e-10);

    RandomStream rng(11);
    Matrix rank_deficient = draw_iid_rayleigh(3, 2, rng);
    rank_deficient.col(1).setZero();
    CHECK(std::abs(qr_tall(rank_deficient).r(1, 1)) < 1e-12);

    const Matrix h = draw_iid_rayleigh(3, 2, rng);
    const QrFactors f = qr_tall(h);
    CHECK((f.reconstruct() - h).norm() / h.norm() < 1e-10);
    CHECK(f.r(2, 0) == std::complex<double>(0.0, 0.0));
    CHECK(f.r(2, 1) == std::complex<double>(0.0, 0.0));

    CHECK_THROWS_AS(qr_tall(draw_iid_rayleigh(2, 3, rng)), std::invalid_argument);
}

TEST_CASE("decomposition properties over random sizes") {
    RandomStream rng(123);
    for (int trial = 0; trial < 1000; ++trial) {
        const int rows = 1 + static_cast<int>(rng.uniform01() * 8);
        const int cols = 1 + static_cast<int>(rng.uniform01() * 8);
        const Matrix h = draw_iid_rayleigh(rows, cols, rng);

        const SvdFactors s = svd_ordered(h);
        CHECK((s.reconstruct() - h).norm() / h.norm() < 1e-10);
        CHECK(unitarity_error(s.u) < 1e-10);
        CHECK(unitarity_error(s.v) < 1e-10);
        const auto k = std::min(rows, cols);
        for (int i = 0; i < k; ++i) {
            CHECK(s.lambda(i, i) >= 0.0);
            if (i > 0) CHECK(s.lambda(i, i) <= s.lambda(i - 1, i - 1));
        }
        for (int r = 0; r < rows; ++r)
            for (int c = 0; c < k; ++c)
                if (r != c) CHECK(s.lambda(r, c) == 0.0);

        if (rows >= cols) {
            const QrFactors q = qr_tall(h);
            CHECK((q.reconstruct() - h).norm() / h.norm() < 1e-10);
            CHECK(unitarity_error(q.q) < 1e-10);
            for (int r = 0; r < rows; ++r)
                for (int c = 0; c < std::min(r, cols); ++c)
                    CHECK(q.r(r, c) == std::complex<double>(0.0, 0.0));
            for (int dgn = 0; dgn < cols; ++dgn) {
                CHECK(q.r(dgn, dgn).imag() == 0.0);
                CHECK(q.r(dgn, dgn).real() >= 0.0);
            }
        }
    }
}

TEST_CASE("isotropy test: iid Rayleigh passes, a column-scaled source fails") {
    RandomStream rng(2024);
    const Matrix u = draw_haar_unitary(3, rng);
    const MatrixSampler iid = [](RandomStream& r) { return draw_iid_rayleigh(3, 3, r); };

    const IsotropyReport pass = test_isotropy(iid, u, 10000, rng);
    CHECK(pass.pass);
    CHECK(pass.entries_p_value > 0.01);
    CHECK(pass.sv_p_value > 0.01);

    const IsotropyReport trivially =
        test_isotropy(iid, Matrix::Identity(3, 3), 10000, rng);
    CHECK(trivially.pass);

    const MatrixSampler scaled = [](RandomStream& r) {
        Matrix h = draw_iid_rayleigh(3, 3, r);
        h.col(0) *= 10.0;
        return h;
    };
    const IsotropyReport fail = test_isotropy(scaled, u, 10000, rng);
    CHECK_FALSE(fail.pass);

    CHECK_THROWS_AS(test_isotropy(iid, u, 100, rng), std::invalid_argument);
    CHECK_THROWS_AS(test_isotropy(iid, Matrix::Identity(4, 4), 10000, rng),
                    std::invalid_argument);
}

TEST_CASE("Haar draws are invariant under a fixed rotation") {
    RandomStream rng(77);
    const Matrix a = draw_haar_unitary(3, rng);
    const MatrixSampler haar = [](RandomStream& r) { return draw_haar_unitary(3, r); };
    const IsotropyReport report = test_isotropy(haar, a, 10000, rng);
    CHECK(report.entries_p_value > 0.01);
}

TEST_CASE("tall-QR thin columns match Stiefel-uniform frames") {
    // The data-determined part of Q (its leading M2 columns) should be
    // distributed like the leading columns of a Haar unitary.
    RandomStream rng(31337);
    std::vector<double> qr_entries, haar_entries;
    const int samples = 10000;
    for (int i = 0; i < samples; ++i) {
        const Matrix q = qr_tall(draw_iid_rayleigh(3, 2, rng)).q;
        for (Eigen::Index r = 0; r < 3; ++r)
            for (Eigen::Index c = 0; c < 2; ++c) {
                qr_entries.push_back(q(r, c).real());
                qr_entries.push_back(q(r, c).imag());
            }
    }
    for (int i = 0; i < samples; ++i) {
        const Matrix u = draw_haar_unitary(3, rng);
        for (Eigen::Index r = 0; r < 3; ++r)
            for (Eigen::Index c = 0; c < 2; ++c) {
                haar_entries.push_back(u(r, c).real());
                haar_entries.push_back(u(r, c).imag());
            }
    }
    const double stat = ks_statistic(qr_entries, haar_entries);
    CHECK(ks_pvalue(stat, qr_entries.size(), haar_entries.size()) > 0.01);
}

TEST_CASE("Q and R entries are uncorrelated (independence proxy)") {
    RandomStream rng(4096);
    const int samples = 10000;
    // Scalar streams per matrix position: 18 from Q, 4 nonzero from R.
    std::vector<std::vector<double>> q_streams(18), r_streams(4);
    for (int i = 0; i < samples; ++i) {
        const QrFactors f = qr_tall(draw_iid_rayleigh(3, 2, rng));
        int qi = 0;
        for (Eigen::Index r = 0; r < 3; ++r)
            for (Eigen::Index c = 0; c < 3; ++c) {
                q_streams[qi++].push_back(f.q(r, c).real());
                q_streams[qi++].push_back(f.q(r, c).imag());
            }
        r_streams[0].push_back(f.r(0, 0).real());
        r_streams[1].push_back(f.r(1, 1).real());
        r_streams[2].push_back(f.r(0, 1).real());
        r_streams[3].push_back(f.r(0, 1).imag());
    }
    double worst = 0.0;
    for (const auto& qs : q_streams)
        for (const auto& rs : r_streams)
            worst = std::max(worst, std::abs(pearson_correlation(qs, rs)));
    CHECK(worst < 0.05);
}

TEST_CASE("partition_plan follows the floor/remainder formulas") {
    const PartitionPlan table = partition_plan({5, 2, 7, 3});
    CHECK(table.m == 2);
    CHECK(table.n == 0);
    CHECK(table.actual_sets ==
          std::vector<std::vector<int>>{{1, 2}, {3, 4}, {5, 6, 7}});
    CHECK(table.fictitious_counts == std::vector<int>{1, 1, 0});

    const PartitionPlan small = partition_plan({2, 1, 3, 2});
    CHECK(small.m == 1);
    CHECK(small.n == 0);
    CHECK(small.actual_sets == std::vector<std::vector<int>>{{1}, {2, 3}});
    CHECK(small.fictitious_counts == std::vector<int>{1, 0});

    const PartitionPlan mid = partition_plan({3, 2, 5, 3});
    CHECK(mid.m == 1);
    CHECK(mid.n == 0);
    CHECK(mid.actual_sets == std::vector<std::vector<int>>{{1, 2}, {3, 4, 5}});
    CHECK(mid.fictitious_counts == std::vector<int>{1, 0});

    // A config with a nonzero remainder exercises the singleton sets.
    const PartitionPlan rem = partition_plan({5, 2, 7, 4});
    CHECK(rem.m == 1);
    CHECK(rem.n == 1);
    CHECK(rem.actual_sets == std::vector<std::vector<int>>{{1}, {2, 3}, {4, 5, 6, 7}});
    CHECK(rem.fictitious_counts == std::vector<int>{3, 2, 0});

    CHECK_THROWS_AS(partition_plan({4, 2, 7, 3}), std::invalid_argument);
    CHECK_THROWS_AS(partition_plan({2, 1, 3, 3}), std::invalid_argument);
}

TEST_CASE("partition invariants: disjoint cover and padded cardinality") {
    for (const AntennaConfig& config :
         {AntennaConfig{5, 2, 7, 3}, {2, 1, 3, 2}, {3, 2, 5, 3}, {5, 2, 7, 4},
          {6, 3, 9, 5}}) {
        const PartitionPlan plan = partition_plan(config);
        std::vector<int> all;
        for (std::size_t i = 0; i < plan.actual_sets.size(); ++i) {
            const auto& s = plan.actual_sets[i];
            all.insert(all.end(), s.begin(), s.end());
            CHECK(static_cast<int>(s.size()) + plan.fictitious_counts[i] == config.n2);
        }
        std::sort(all.begin(), all.end());
        std::vector<int> expected(config.n1);
        for (int i = 0; i < config.n1; ++i) expected[i] = i + 1;
        CHECK(all == expected);
        CHECK(plan.n + plan.m * config.m2 == config.n1 - config.n2);
    }
}

TEST_CASE("build_gk structure and almost-sure full rank") {
    const AntennaConfig table{5, 2, 7, 3};
    RandomStream rng(7);
    const Matrix g = build_gk(table, 1, rng);
    REQUIRE(g.rows() == 7);
    REQUIRE(g.cols() == 7);

    // Structural zeros of the stacked R rows survive verbatim: second row of
    // each M2-block has a zero in its first column, and the trailing set
    // contributes R's all-zero bottom row.
    CHECK(g(1, 5) == std::complex<double>(0.0, 0.0));
    CHECK(g(3, 5) == std::complex<double>(0.0, 0.0));
    CHECK(g(6, 5) == std::complex<double>(0.0, 0.0));
    CHECK(g(6, 6) == std::complex<double>(0.0, 0.0));

    for (int k : {1, 2}) {
        int full_rank = 0;
        const int draws = 1000;
        for (int i = 0; i < draws; ++i) {
            RandomStream draw_rng = RandomStream::derive(99, k, i);
            const Matrix gk = build_gk(table, k, draw_rng);
            Eigen::JacobiSVD<Matrix> svd(gk);
            if (svd.singularValues()(6) > 1e-10 * svd.singularValues()(0)) ++full_rank;
        }
        CHECK(full_rank == draws);
    }

    CHECK_THROWS_AS(build_gk({4, 2, 7, 3}, 1, rng), std::invalid_argument);
    CHECK_THROWS_AS(build_gk(table, 3, rng), std::invalid_argument);
    CHECK_THROWS_AS(build_gk(table, 0, rng), std::invalid_argument);
}
