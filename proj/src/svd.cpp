#include "vartopic/svd.hpp"

#include "vartopic/errors.hpp"
#include "vartopic/rng.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace vartopic {

CenteredOperator::CenteredOperator(SparseMatrix base)
    : base_(std::move(base)), means_(Eigen::VectorXd::Zero(base_.cols())) {
    if (base_.rows() < 1)
        throw ValidationError("cannot center a matrix with no rows");
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(base_.rows());
    means_ = (base_.values().transpose() * ones) / static_cast<double>(base_.rows());
}

CenteredOperator::CenteredOperator(SparseMatrix base, Eigen::VectorXd column_means)
    : base_(std::move(base)), means_(std::move(column_means)) {
    if (means_.size() != base_.cols())
        throw ValidationError("column_means length must equal the number of columns");
}

Eigen::VectorXd CenteredOperator::apply(const Eigen::VectorXd& v) const {
    Eigen::VectorXd out = base_.values() * v;
    out.array() -= means_.dot(v);
    return out;
}

Eigen::VectorXd CenteredOperator::apply_transpose(const Eigen::VectorXd& u) const {
    Eigen::VectorXd out = base_.values().transpose() * u;
    out -= u.sum() * means_;
    return out;
}

Eigen::MatrixXd CenteredOperator::to_dense() const {
    Eigen::MatrixXd dense = base_.to_dense();
    dense.rowwise() -= means_.transpose();
    return dense;
}

LinearMap as_linear_map(const CenteredOperator& op) {
    return {op.rows(), op.cols(), [&op](const Eigen::VectorXd& v) { return op.apply(v); },
            [&op](const Eigen::VectorXd& u) { return op.apply_transpose(u); }};
}

LinearMap as_linear_map(const Eigen::MatrixXd& dense) {
    return {dense.rows(), dense.cols(), [&dense](const Eigen::VectorXd& v) -> Eigen::VectorXd { return dense * v; },
            [&dense](const Eigen::VectorXd& u) -> Eigen::VectorXd { return dense.transpose() * u; }};
}

namespace {

// Two passes of classical Gram-Schmidt against the first `count` columns.
void orthogonalize(Eigen::VectorXd& x, const Eigen::MatrixXd& basis, Eigen::Index count) {
    if (count == 0)
        return;
    for (int pass = 0; pass < 2; ++pass)
        x -= basis.leftCols(count) * (basis.leftCols(count).transpose() * x);
}

Eigen::VectorXd random_direction(Philox& rng, const Eigen::MatrixXd& basis, Eigen::Index count) {
    Eigen::VectorXd x(basis.rows());
    for (Eigen::Index i = 0; i < x.size(); ++i)
        x(i) = standard_normal(rng);
    orthogonalize(x, basis, count);
    const double norm = x.norm();
    if (norm == 0.0)
        return Eigen::VectorXd::Zero(x.size());
    return x / norm;
}

} // namespace

PartialSVD truncated_svd(const LinearMap& input, int k, const SvdOptions& options) {
    const Eigen::Index min_dim = std::min(input.rows, input.cols);
    if (k < 1 || k > min_dim)
        throw ValidationError("k must lie in [1, min(rows, cols)]");
    if (!(options.tol > 0.0))
        throw ValidationError("tol must be positive");
    if (options.buffer < 1)
        throw ValidationError("buffer must be at least 1");

    // Bidiagonalize with the short dimension on the right so a full-size
    // Krylov basis spans it exactly.
    const bool transposed = input.cols > input.rows;
    const LinearMap op = transposed ? LinearMap{input.cols, input.rows, input.apply_transpose, input.apply} : input;
    const Eigen::Index n = op.cols;
    const Eigen::Index m = op.rows;
    const Eigen::Index work = std::min<Eigen::Index>(k + options.buffer, n);

    Philox rng(options.seed);
    Eigen::MatrixXd V = Eigen::MatrixXd::Zero(n, work);
    Eigen::MatrixXd W = Eigen::MatrixXd::Zero(m, work);
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(work, work);
    V.col(0) = random_direction(rng, V, 0);

    double norm_estimate = 0.0;
    auto broken_down = [&](double value) { return value <= 1e-14 * norm_estimate; };

    Eigen::VectorXd F;
    Eigen::VectorXd small_sigma;
    Eigen::MatrixXd small_u, small_v;
    std::vector<double> residuals(static_cast<std::size_t>(k));
    double sigma_max = 0.0;
    Eigen::Index kept = 0;
    int restart = 0;

    for (;; ++restart) {
        Eigen::VectorXd w = op.apply(V.col(kept));
        if (kept > 0)
            w -= W.leftCols(kept) * B.col(kept).head(kept);
        orthogonalize(w, W, kept);
        double s = w.norm();
        norm_estimate = std::max(norm_estimate, s);
        if (broken_down(s)) {
            W.col(kept) = random_direction(rng, W, kept);
            s = 0.0;
        } else {
            W.col(kept) = w / s;
        }

        for (Eigen::Index j = kept; j < work; ++j) {
            F = op.apply_transpose(W.col(j)) - s * V.col(j);
            orthogonalize(F, V, j + 1);
            double r = F.norm();
            norm_estimate = std::max(norm_estimate, r);
            B(j, j) = s;
            if (j + 1 == work)
                break;
            if (broken_down(r)) {
                V.col(j + 1) = random_direction(rng, V, j + 1);
                r = 0.0;
            } else {
                V.col(j + 1) = F / r;
            }
            B(j, j + 1) = r;

            w = op.apply(V.col(j + 1)) - r * W.col(j);
            orthogonalize(w, W, j + 1);
            s = w.norm();
            norm_estimate = std::max(norm_estimate, s);
            if (broken_down(s)) {
                W.col(j + 1) = random_direction(rng, W, j + 1);
                s = 0.0;
            } else {
                W.col(j + 1) = w / s;
            }
        }

        Eigen::JacobiSVD<Eigen::MatrixXd> small(B, Eigen::ComputeFullU | Eigen::ComputeFullV);
        small_sigma = small.singularValues();
        small_u = small.matrixU();
        small_v = small.matrixV();
        sigma_max = std::max(sigma_max, small_sigma(0));

        const double f_norm = broken_down(F.norm()) ? 0.0 : F.norm();
        bool converged = true;
        for (int i = 0; i < k; ++i) {
            residuals[static_cast<std::size_t>(i)] = std::fabs(f_norm * small_u(work - 1, i));
            if (residuals[static_cast<std::size_t>(i)] > options.tol * sigma_max)
                converged = false;
        }
        if (converged || sigma_max == 0.0)
            break;
        if (restart >= options.max_restarts) {
            std::ostringstream msg;
            msg << "truncated_svd did not converge in " << options.max_restarts << " restarts; residuals:";
            for (double r : residuals)
                msg << ' ' << r;
            throw ConvergenceError(msg.str(), residuals);
        }

        // Thick restart: keep the leading Ritz vectors, continue from the residual direction.
        const Eigen::Index keep = std::min<Eigen::Index>(k, work - 1);
        const Eigen::MatrixXd new_v = V * small_v.leftCols(keep);
        const Eigen::MatrixXd new_w = W * small_u.leftCols(keep);
        V.leftCols(keep) = new_v;
        W.leftCols(keep) = new_w;
        V.rightCols(work - keep).setZero();
        W.rightCols(work - keep).setZero();
        Eigen::VectorXd next = F / f_norm;
        orthogonalize(next, V, keep);
        V.col(keep) = next.normalized();
        B.setZero();
        for (Eigen::Index i = 0; i < keep; ++i) {
            B(i, i) = small_sigma(i);
            B(i, keep) = f_norm * small_u(work - 1, i);
        }
        kept = keep;
    }

    PartialSVD out;
    out.restarts = restart;
    out.residuals = residuals;
    Eigen::MatrixXd left = W * small_u.leftCols(k);
    Eigen::MatrixXd right = V * small_v.leftCols(k);
    out.sigma = small_sigma.head(k);
    const double top = out.sigma(0);
    int zeroed = 0;
    for (int i = 0; i < k; ++i)
        if (out.sigma(i) < 1e-12 * top || top == 0.0) {
            out.sigma(i) = 0.0;
            ++zeroed;
        }
    if (zeroed > 0)
        out.warnings.push_back(std::to_string(zeroed) + " of " + std::to_string(k) +
                               " requested singular values are numerically zero (k exceeds the rank)");
    if (transposed) {
        out.u = std::move(right);
        out.v = std::move(left);
    } else {
        out.u = std::move(left);
        out.v = std::move(right);
    }
    return out;
}

PartialSVD truncated_svd(const CenteredOperator& op, int k, const SvdOptions& options) {
    return truncated_svd(as_linear_map(op), k, options);
}

double total_variance(const CenteredOperator& op) {
    const auto n = op.rows();
    if (n < 2)
        throw ValidationError("variance needs at least two rows");
    const auto& x = op.base().values();
    const auto& m = op.column_means();
    double total = 0.0;
    for (Eigen::Index c = 0; c < x.outerSize(); ++c) {
        double sum = 0.0, sum_sq = 0.0;
        for (SparseMatrix::Storage::InnerIterator it(x, c); it; ++it) {
            sum += it.value();
            sum_sq += it.value() * it.value();
        }
        // sum over rows of (x - m)^2
        total += sum_sq - 2.0 * m(c) * sum + static_cast<double>(n) * m(c) * m(c);
    }
    return total / static_cast<double>(n - 1);
}

VarianceSummary variance_summary(const PartialSVD& svd, const CenteredOperator& op) {
    VarianceSummary out;
    out.totalvar = total_variance(op);
    const double scale = std::sqrt(static_cast<double>(op.rows() - 1));
    for (Eigen::Index i = 0; i < svd.sigma.size(); ++i)
        out.sdev.push_back(svd.sigma(i) / scale);
    return out;
}

std::vector<double> VarianceSummary::cumulative_share() const {
    std::vector<double> out;
    double running = 0.0;
    for (double s : sdev) {
        running += s * s;
        out.push_back(totalvar > 0.0 ? running / totalvar : 0.0);
    }
    return out;
}

} // namespace vartopic
