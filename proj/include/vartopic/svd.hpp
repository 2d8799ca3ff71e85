#pragma once

#include "vartopic/corpus.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace vartopic {

/**
 * The column-centered matrix A = X - 1 m^T, applied without ever forming it.
 *
 *   apply(v)           = X v   - (m^T v) 1
 *   apply_transpose(u) = X^T u - (sum u) m
 *
 * Scaling is not supported; `scale_flag()` is always false.
 */
class CenteredOperator {
  public:
    /// Centers on the column means of `base`.
    explicit CenteredOperator(SparseMatrix base);
    CenteredOperator(SparseMatrix base, Eigen::VectorXd column_means);

    Eigen::Index rows() const noexcept { return base_.rows(); }
    Eigen::Index cols() const noexcept { return base_.cols(); }
    const SparseMatrix& base() const noexcept { return base_; }
    const Eigen::VectorXd& column_means() const noexcept { return means_; }
    bool scale_flag() const noexcept { return false; }

    Eigen::VectorXd apply(const Eigen::VectorXd& v) const;
    Eigen::VectorXd apply_transpose(const Eigen::VectorXd& u) const;

    /// Dense A. For tests and tiny problems only.
    Eigen::MatrixXd to_dense() const;

  private:
    SparseMatrix base_;
    Eigen::VectorXd means_;
};

/// Any matrix-free operator. The SVD engine only sees this.
struct LinearMap {
    Eigen::Index rows = 0;
    Eigen::Index cols = 0;
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> apply;
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> apply_transpose;
};

LinearMap as_linear_map(const CenteredOperator& op);
LinearMap as_linear_map(const Eigen::MatrixXd& dense);

struct SvdOptions {
    /// Converged when every wanted residual ||A^T u_i - s_i v_i|| <= tol * s_1.
    double tol = 1e-8;
    int max_restarts = 1000;
    std::uint64_t seed = 20220619;
    /// Extra Lanczos vectors kept beyond k.
    int buffer = 7;
};

struct PartialSVD {
    Eigen::MatrixXd u;     ///< rows x k, orthonormal columns
    Eigen::VectorXd sigma; ///< descending, >= 0
    Eigen::MatrixXd v;     ///< cols x k, orthonormal columns
    std::vector<double> residuals;
    int restarts = 0;
    std::vector<std::string> warnings;
};

/**
 * Top-k singular triplets by augmented implicitly restarted Lanczos
 * bidiagonalization (thick restart on the Ritz vectors, full
 * reorthogonalization). Deterministic for a fixed seed.
 *
 * Throws ValidationError for a bad k or tol and ConvergenceError when
 * max_restarts is exhausted. Singular values below 1e-12 * s_1 come back
 * as exactly 0 with a warning.
 */
PartialSVD truncated_svd(const LinearMap& op, int k, const SvdOptions& options = {});
PartialSVD truncated_svd(const CenteredOperator& op, int k, const SvdOptions& options = {});

struct VarianceSummary {
    std::vector<double> sdev;
    double totalvar = 0.0;

    /// cumsum(sdev^2) / totalvar
    std::vector<double> cumulative_share() const;
};

/// sdev_i = s_i / sqrt(n - 1); totalvar is the summed column variance of A, computed sparsely.
VarianceSummary variance_summary(const PartialSVD& svd, const CenteredOperator& op);

/// Summed sample variance of the columns of the centered matrix.
double total_variance(const CenteredOperator& op);

} // namespace vartopic
