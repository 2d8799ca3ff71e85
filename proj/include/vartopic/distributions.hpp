#pragma once

#include <Eigen/Dense>

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace vartopic {

/// Dense matrix with row and column labels.
struct LabeledMatrix {
    Eigen::MatrixXd values;
    std::vector<std::string> row_names;
    std::vector<std::string> col_names;
};

/// beta: one distribution per topic over term ids. gamma: one distribution per document over topics.
enum class DistributionKind { beta, gamma };

struct TopicProbability {
    std::string id;
    std::string topic;
    double probability = 0.0;
    /// Power-renormalized value, present when the original was kept alongside it.
    std::optional<double> renormalized;
};

/**
 * Tidy (id, topic, probability) distributions.
 *
 * For beta each topic sums to 1 over ids; for gamma each id sums to 1 over
 * topics. Exact zeros are usually omitted, so the set may be sparse.
 */
struct TopicDistributions {
    DistributionKind kind = DistributionKind::beta;
    std::vector<TopicProbability> entries;
    std::vector<std::string> warnings;

    /// Ids and topics in first-appearance order.
    std::vector<std::string> ids() const;
    std::vector<std::string> topics() const;
    bool has_renormalized() const;
};

/// "V01", "V02", ... for 0-based index 0, 1, ...
std::string topic_label(std::size_t index);

/**
 * Adds a zero entry for every (term, topic) pair of `full_vocab` missing from a
 * beta set and orders entries by topic, then by vocabulary position. Throws
 * ValidationError if the set mentions a term outside `full_vocab`.
 */
TopicDistributions complete_terms(const TopicDistributions& td, std::span<const std::string> full_vocab);

/**
 * One row per distribution (topics for beta, ids for gamma), one column per
 * component. Rows follow first appearance; columns follow `components` when
 * given, first appearance otherwise. Cells absent from the tidy set are an
 * error unless `fill_missing`, in which case they are 0.
 */
LabeledMatrix distribution_matrix(const TopicDistributions& td, bool fill_missing,
                                  std::span<const std::string> components = {}, bool use_renormalized = false);

/// Header `id,topic,probability` plus `probability_rn` when renormalized values are present.
void write_distributions(std::ostream& out, const TopicDistributions& td);
TopicDistributions read_distributions(std::istream& in, DistributionKind kind);

} // namespace vartopic
