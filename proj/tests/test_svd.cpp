#include <doctest.h>

#include "oracles.hpp"
#include "vartopic/errors.hpp"
#include "vartopic/svd.hpp"

#include <cmath>

using namespace vartopic;

namespace {

SparseMatrix to_sparse(const Eigen::MatrixXd& dense) {
    std::vector<std::string> rows, cols;
    for (Eigen::Index i = 0; i < dense.rows(); ++i)
        rows.push_back("r" + std::to_string(i));
    for (Eigen::Index j = 0; j < dense.cols(); ++j)
        cols.push_back("c" + std::to_string(j));
    return SparseMatrix(dense.sparseView(), rows, cols);
}

void check_orthonormal(const Eigen::MatrixXd& m) {
    const Eigen::MatrixXd gram = m.transpose() * m;
    CHECK((gram - Eigen::MatrixXd::Identity(m.cols(), m.cols())).cwiseAbs().maxCoeff() <= 1e-8);
}

} // namespace

TEST_CASE("centered operator matches the dense centered matrix") {
    const Eigen::MatrixXd x = oracle::random_sparse(30, 20, 0.2, 3);
    const CenteredOperator op(to_sparse(x));
    const Eigen::MatrixXd a = oracle::center_columns(x);
    CHECK((op.to_dense() - a).cwiseAbs().maxCoeff() < 1e-12);
    const Eigen::VectorXd v = Eigen::VectorXd::LinSpaced(20, -1.0, 2.0);
    const Eigen::VectorXd u = Eigen::VectorXd::LinSpaced(30, 0.5, -3.0);
    CHECK((op.apply(v) - a * v).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((op.apply_transpose(u) - a.transpose() * u).cwiseAbs().maxCoeff() < 1e-12);
    CHECK_FALSE(op.scale_flag());
}

TEST_CASE("diagonal matrix with zero means") {
    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(3, 3);
    x.diagonal() << 3, 2, 1;
    const CenteredOperator op(to_sparse(x), Eigen::VectorXd::Zero(3));
    const auto svd = truncated_svd(op, 2);
    CHECK(svd.sigma(0) == doctest::Approx(3.0).epsilon(1e-10));
    CHECK(svd.sigma(1) == doctest::Approx(2.0).epsilon(1e-10));
    for (int i = 0; i < 2; ++i) {
        CHECK(std::abs(svd.u(i, i)) == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(std::abs(svd.v(i, i)) == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("rank one matrix") {
    Eigen::VectorXd a(4), b(3);
    a << 1, -2, 3, 0.5;
    b << 2, 0, -1;
    const Eigen::MatrixXd m = a * b.transpose();
    const auto svd = truncated_svd(as_linear_map(m), 1);
    CHECK(svd.sigma(0) == doctest::Approx(a.norm() * b.norm()).epsilon(1e-12));
}

TEST_CASE("random sparse matrices match the dense oracle") {
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        const Eigen::MatrixXd x = oracle::random_sparse(200, 300, 0.02, seed);
        const CenteredOperator op(to_sparse(x));
        const auto svd = truncated_svd(op, 10);
        const auto ref = oracle::dense_svd(oracle::center_columns(x));
        for (int i = 0; i < 10; ++i)
            CHECK(std::abs(svd.sigma(i) - ref.sigma(i)) <= 1e-6 * ref.sigma(i));
        check_orthonormal(svd.u);
        check_orthonormal(svd.v);
        const Eigen::MatrixXd a = op.to_dense();
        for (int i = 0; i < 10; ++i)
            CHECK((a * svd.v.col(i) - svd.sigma(i) * svd.u.col(i)).norm() <= 1e-8 * svd.sigma(0) * 10);
    }
}

TEST_CASE("deterministic for a fixed seed") {
    const Eigen::MatrixXd x = oracle::random_sparse(60, 40, 0.1, 9);
    const CenteredOperator op(to_sparse(x));
    const auto a = truncated_svd(op, 5);
    const auto b = truncated_svd(op, 5);
    CHECK(a.sigma == b.sigma);
    CHECK(a.u == b.u);
    CHECK(a.v == b.v);
}

TEST_CASE("wide input is handled through the transpose") {
    const Eigen::MatrixXd x = oracle::random_sparse(15, 80, 0.2, 4);
    const auto svd = truncated_svd(as_linear_map(x), 4);
    const auto ref = oracle::dense_svd(x);
    for (int i = 0; i < 4; ++i)
        CHECK(svd.sigma(i) == doctest::Approx(ref.sigma(i)).epsilon(1e-9));
    CHECK(svd.u.rows() == 15);
    CHECK(svd.v.rows() == 80);
}

TEST_CASE("surplus components come back as zero with a warning") {
    Eigen::VectorXd a(6), b(5);
    a << 1, 2, 3, 4, 5, 6;
    b << 1, -1, 2, 0, 1;
    const Eigen::MatrixXd m = a * b.transpose();
    const auto svd = truncated_svd(as_linear_map(m), 3);
    CHECK(svd.sigma(1) == 0.0);
    CHECK(svd.sigma(2) == 0.0);
    CHECK_FALSE(svd.warnings.empty());
}

TEST_CASE("bad arguments") {
    const Eigen::MatrixXd m = Eigen::MatrixXd::Identity(3, 3);
    CHECK_THROWS_AS(truncated_svd(as_linear_map(m), 0), ValidationError);
    CHECK_THROWS_AS(truncated_svd(as_linear_map(m), 4), ValidationError);
    SvdOptions bad;
    bad.tol = 0.0;
    CHECK_THROWS_AS(truncated_svd(as_linear_map(m), 1, bad), ValidationError);
}

TEST_CASE("exhausted restarts raise a convergence error") {
    const Eigen::MatrixXd x = oracle::random_sparse(200, 300, 0.02, 5);
    SvdOptions opt;
    opt.tol = 1e-15;
    opt.max_restarts = 1;
    opt.buffer = 1;
    CHECK_THROWS_AS(truncated_svd(CenteredOperator(to_sparse(x)), 10, opt), ConvergenceError);
}

TEST_CASE("variance accounting") {
    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(5, 3);
    x.col(1) << 0, 2, 4, 6, 8; // variance 10
    x.col(2) << 1, 1, 1, 1, 1;
    const CenteredOperator op(to_sparse(x));
    CHECK(total_variance(op) == doctest::Approx(10.0).epsilon(1e-14));

    Eigen::MatrixXd y = Eigen::MatrixXd::Zero(3, 2);
    y.col(0) << 0, 0, 4; // sample variance of (0,0,4) is 16/3
    y(1, 1) = 2;         // (0,2,0): 4/3
    const CenteredOperator op2(to_sparse(y));
    CHECK(total_variance(op2) == doctest::Approx(20.0 / 3).epsilon(1e-14));

    const Eigen::MatrixXd z = oracle::random_sparse(40, 12, 0.3, 6);
    const CenteredOperator op3(to_sparse(z));
    const auto svd = truncated_svd(op3, 12);
    const auto v = variance_summary(svd, op3);
    double sum = 0.0;
    for (double s : v.sdev)
        sum += s * s;
    CHECK(sum == doctest::Approx(v.totalvar).epsilon(1e-10));
    const auto share = v.cumulative_share();
    CHECK(share.back() == doctest::Approx(1.0).epsilon(1e-10));
    for (std::size_t i = 1; i < share.size(); ++i)
        CHECK(share[i] >= share[i - 1]);
    CHECK(v.sdev[0] == doctest::Approx(svd.sigma(0) / std::sqrt(39.0)).epsilon(1e-14));
}
