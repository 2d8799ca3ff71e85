#include "vartopic/varimax.hpp"

#include "vartopic/errors.hpp"

#include <cmath>

namespace vartopic {

double varimax_criterion(const Eigen::MatrixXd& loadings) {
    const double p = static_cast<double>(loadings.rows());
    const Eigen::ArrayXXd sq = loadings.array().square();
    double total = 0.0;
    for (Eigen::Index j = 0; j < sq.cols(); ++j) {
        const double m2 = sq.col(j).sum() / p;
        const double m4 = sq.col(j).square().sum() / p;
        total += m4 - m2 * m2;
    }
    return total;
}

VarimaxSolution varimax_rotate(const Eigen::MatrixXd& raw, const VarimaxOptions& options) {
    const Eigen::Index p = raw.rows();
    const Eigen::Index k = raw.cols();
    if (p < 2 || k < 1)
        throw ValidationError("varimax needs at least 2 rows and 1 column");
    if (!raw.allFinite())
        throw ValidationError("varimax input contains non-finite values");
    if (!(options.eps > 0.0))
        throw ValidationError("eps must be positive");

    VarimaxSolution sol;
    sol.rotmat = Eigen::MatrixXd::Identity(k, k);

    Eigen::MatrixXd x = raw;
    Eigen::VectorXd communality = Eigen::VectorXd::Ones(p);
    if (options.normalize) {
        communality = raw.rowwise().norm();
        for (Eigen::Index i = 0; i < p; ++i)
            if (communality(i) > 0.0)
                x.row(i) /= communality(i);
            else
                communality(i) = 1.0;
    }

    sol.criterion_trace.push_back(varimax_criterion(x));
    const double n = static_cast<double>(p);
    for (int sweep = 0; sweep < options.max_iter && k > 1; ++sweep) {
        for (Eigen::Index a = 0; a + 1 < k; ++a)
            for (Eigen::Index b = a + 1; b < k; ++b) {
                const Eigen::ArrayXd xa = x.col(a).array();
                const Eigen::ArrayXd xb = x.col(b).array();
                const Eigen::ArrayXd u = xa.square() - xb.square();
                const Eigen::ArrayXd v = 2.0 * xa * xb;
                const double A = u.sum();
                const double B = v.sum();
                const double C = (u.square() - v.square()).sum();
                const double D = 2.0 * (u * v).sum();
                const double phi = 0.25 * std::atan2(D - 2.0 * A * B / n, C - (A * A - B * B) / n);
                if (phi == 0.0)
                    continue;
                const double c = std::cos(phi);
                const double s = std::sin(phi);
                const Eigen::VectorXd ca = x.col(a);
                x.col(a) = c * ca + s * x.col(b);
                x.col(b) = -s * ca + c * x.col(b);
                const Eigen::VectorXd ta = sol.rotmat.col(a);
                sol.rotmat.col(a) = c * ta + s * sol.rotmat.col(b);
                sol.rotmat.col(b) = -s * ta + c * sol.rotmat.col(b);
            }
        ++sol.sweeps;
        const double before = sol.criterion_trace.back();
        const double after = varimax_criterion(x);
        sol.criterion_trace.push_back(after);
        if (std::fabs(after - before) <= options.eps * std::fabs(after))
            break;
        if (sol.sweeps == options.max_iter)
            sol.warnings.push_back("varimax stopped after max_iter sweeps");
    }

    sol.loadings = raw * sol.rotmat;
    return sol;
}

double skewness(const Eigen::VectorXd& x) {
    const double n = static_cast<double>(x.size());
    const Eigen::ArrayXd d = x.array() - x.mean();
    const double m2 = d.square().sum() / n;
    if (m2 <= 0.0)
        return 0.0;
    const double m3 = d.cube().sum() / n;
    return m3 / std::pow(m2, 1.5);
}

VarimaxSolution fix_signs(VarimaxSolution sol) {
    for (Eigen::Index j = 0; j < sol.loadings.cols(); ++j) {
        const Eigen::VectorXd col = sol.loadings.col(j);
        if ((col.array() - col.mean()).square().sum() <= 0.0) {
            sol.warnings.push_back("loadings column " + std::to_string(j + 1) + " has zero variance; sign left as is");
            continue;
        }
        if (skewness(col) < 0.0) {
            sol.loadings.col(j) *= -1.0;
            if (sol.rotmat.cols() > j)
                sol.rotmat.col(j) *= -1.0;
            if (sol.scores.cols() > j)
                sol.scores.col(j) *= -1.0;
        }
    }
    return sol;
}

} // namespace vartopic
