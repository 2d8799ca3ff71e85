#pragma once

#include "vartopic/distributions.hpp"
#include "vartopic/metrics.hpp"
#include "vartopic/model.hpp"

#include <Eigen/Dense>

#include <iosfwd>
#include <string>
#include <vector>

namespace vartopic {

struct EvalOptions {
    int n = 0;
    /// Target entropy in bits for the gamma renormalization exponent.
    double target_bits = 0.0;
    /// Accept a model whose vocabulary differs from the truth's; missing terms count as 0.
    bool complete = false;
    GammaTransform gamma_transform = GammaTransform::softmax;
};

/**
 * Fitted topics scored against known generating distributions.
 *
 * beta_distance(i, j) is the Hellinger distance between true topic i and
 * fitted topic j; the assignment maps each true topic to a fitted one. The
 * gamma rows compare each document's true mixture with its fitted one after
 * relabeling the fitted topics by that assignment.
 */
struct EvalReport {
    int n = 0;
    std::vector<std::string> truth_topics;
    std::vector<std::string> fitted_topics;
    Eigen::MatrixXd beta_distance;
    AssignmentSolution assignment;
    std::vector<double> beta_diagonal;
    FiveNumber beta_summary;
    FiveNumber gamma_summary;
    FiveNumber gamma_renormalized_summary;
    double target_bits = 0.0;
    PowerTarget power;
    FiveNumber entropy_truth;
    FiveNumber entropy_fitted;
    FiveNumber entropy_renormalized;
    std::size_t documents = 0;
    std::size_t terms_missing_from_model = 0;
    std::vector<std::string> warnings;
};

/// theta: true topic-document distributions; phi: true word-topic distributions.
EvalReport evaluate(const TopicDistributions& theta, const TopicDistributions& phi, const FittedModel& model,
                    const EvalOptions& options);

void write_report(std::ostream& out, const EvalReport& report);

} // namespace vartopic
