#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace vartopic {

struct VarimaxOptions {
    /// Kaiser normalization: divide rows by their communality before rotating.
    bool normalize = true;
    /// Stop when one sweep changes the criterion by less than eps (relative).
    double eps = 1e-5;
    int max_iter = 1000;
};

struct VarimaxSolution {
    Eigen::MatrixXd loadings; ///< p x k, raw * rotmat
    Eigen::MatrixXd rotmat;   ///< k x k orthogonal
    Eigen::MatrixXd scores;   ///< n x k, filled by the caller
    /// Criterion after each sweep; entry 0 is the starting value.
    std::vector<double> criterion_trace;
    int sweeps = 0;
    std::vector<std::string> warnings;
};

/// sum_j [ mean(l_.j^4) - mean(l_.j^2)^2 ]
double varimax_criterion(const Eigen::MatrixXd& loadings);

/**
 * Orthogonal rotation maximizing the varimax criterion by cyclic sweeps of
 * planar rotations, each at its closed-form optimal angle. With k = 1 the
 * rotation is the identity. Throws ValidationError on p < 2 or non-finite input.
 *
 * When normalize is on, the trace records the criterion of the normalized
 * rows, which is what the sweeps increase.
 */
VarimaxSolution varimax_rotate(const Eigen::MatrixXd& raw, const VarimaxOptions& options = {});

/// Biased sample skewness m3 / m2^1.5; 0 for a constant column.
double skewness(const Eigen::VectorXd& x);

/**
 * Negates every loadings column with negative skew together with the matching
 * columns of scores and rotmat. Constant columns are left alone with a warning.
 */
VarimaxSolution fix_signs(VarimaxSolution sol);

} // namespace vartopic
