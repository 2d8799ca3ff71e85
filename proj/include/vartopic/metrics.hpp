#pragma once

#include "vartopic/distributions.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace vartopic {

/// A probability vector: non-negative components summing to 1 within 1e-9.
class ProbVector {
  public:
    /// Throws ValidationError when `p` is empty, negative, non-finite or does not sum to 1.
    explicit ProbVector(Eigen::VectorXd p);

    /// Trims negatives to 0 and divides by the sum; uniform when nothing is positive.
    static ProbVector normalized(const Eigen::VectorXd& x);

    const Eigen::VectorXd& values() const noexcept { return p_; }
    Eigen::Index size() const noexcept { return p_.size(); }
    double operator[](Eigen::Index i) const { return p_(i); }

  private:
    struct Trusted {};
    ProbVector(Eigen::VectorXd p, Trusted) : p_(std::move(p)) {}

    Eigen::VectorXd p_;
};

/// Shannon entropy in bits, 0 log 0 = 0.
double entropy(const ProbVector& p);

/// Peak Dirichlet parameters: slot j (1-based) gets peak * scale, the rest share (1 - peak) * scale.
Eigen::VectorXd peak_alpha(int k, int j, double peak, double scale);

/// Mean entropy in bits of Dirichlet(alpha) draws, in closed form.
double expected_entropy(const Eigen::VectorXd& alpha);
/// Symmetric Dirichlet with all k parameters equal to alpha.
double expected_entropy(double alpha, int k);

/// p_i^beta / sum p^beta.
ProbVector renormalize(const ProbVector& p, double beta);

struct PowerSearch {
    double lower = 0x1.0p-16;
    double upper = 0x1.0p16;
    double tol_bits = 1e-9;
    int max_iter = 400;
};

/// Exponent beta with entropy(renormalize(p, beta)) == target_bits. NoSolutionError if unreachable.
double solve_power(const ProbVector& p, double target_bits, const PowerSearch& search = {});

struct PowerTarget {
    double exponent = 0.0; ///< mean of the per-document solutions
    std::size_t used = 0;
    std::size_t skipped = 0;
};

/// Per-document solve_power over a gamma set, averaged. Documents with no solution are skipped.
PowerTarget target_power(const TopicDistributions& gammas, double target_bits);

double hellinger(const ProbVector& p, const ProbVector& q);

/// Row i of P against row j of Q. Rows must be distributions over the same components.
Eigen::MatrixXd hellinger_cross(const Eigen::MatrixXd& P, const Eigen::MatrixXd& Q);

/**
 * Tidy form: distributions grouped as for distribution_matrix. Both sets must
 * list every component of the union; with `fill_missing` gaps count as 0.
 */
LabeledMatrix hellinger_cross(const TopicDistributions& P, const TopicDistributions& Q, bool fill_missing = false);

struct AssignmentSolution {
    /// assignment[i] = column chosen for row i
    std::vector<std::size_t> assignment;
    double total_cost = 0.0;

    /// k x k 0/1 matrix with a 1 at (i, assignment[i]).
    Eigen::MatrixXd permutation() const;
};

/// Minimum-cost perfect matching on a square cost matrix (Hungarian method, O(k^3)).
AssignmentSolution assign_topics(const Eigen::MatrixXd& cost);

/// Min, quartiles (R type 7), median, mean and max.
struct FiveNumber {
    double min = 0.0, q1 = 0.0, median = 0.0, mean = 0.0, q3 = 0.0, max = 0.0;
};
FiveNumber summarize(std::span<const double> values);

} // namespace vartopic
