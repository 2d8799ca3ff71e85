#include "vartopic/eval.hpp"

#include "vartopic/errors.hpp"

#include <json.hpp>

#include <ostream>
#include <unordered_map>
#include <unordered_set>

namespace vartopic {

namespace {

nlohmann::json summary_json(const FiveNumber& s) {
    return {{"min", s.min}, {"q1", s.q1}, {"median", s.median}, {"mean", s.mean}, {"q3", s.q3}, {"max", s.max}};
}

std::vector<std::string> labels(int n) {
    std::vector<std::string> out;
    for (int t = 0; t < n; ++t)
        out.push_back(topic_label(static_cast<std::size_t>(t)));
    return out;
}

// Rows of `td` (a gamma set) in the order of `ids`, columns in `topics`.
Eigen::MatrixXd gamma_rows(const TopicDistributions& td, const std::vector<std::string>& ids,
                           const std::vector<std::string>& topics, bool renormalized) {
    const auto m = distribution_matrix(td, true, topics, renormalized);
    std::unordered_map<std::string, Eigen::Index> at;
    for (std::size_t i = 0; i < m.row_names.size(); ++i)
        at.emplace(m.row_names[i], static_cast<Eigen::Index>(i));
    Eigen::MatrixXd out(static_cast<Eigen::Index>(ids.size()), m.values.cols());
    for (std::size_t i = 0; i < ids.size(); ++i) {
        const auto it = at.find(ids[i]);
        if (it == at.end())
            throw ValidationError("document '" + ids[i] + "' has no topic distribution");
        out.row(static_cast<Eigen::Index>(i)) = m.values.row(it->second);
    }
    return out;
}

std::vector<double> row_entropies(const Eigen::MatrixXd& m) {
    std::vector<double> out;
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        out.push_back(entropy(ProbVector::normalized(m.row(r).transpose())));
    return out;
}

std::vector<double> row_distances(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    std::vector<double> out;
    for (Eigen::Index r = 0; r < a.rows(); ++r)
        out.push_back(hellinger(ProbVector::normalized(a.row(r).transpose()),
                                ProbVector::normalized(b.row(r).transpose())));
    return out;
}

} // namespace

EvalReport evaluate(const TopicDistributions& theta, const TopicDistributions& phi, const FittedModel& model,
                    const EvalOptions& options) {
    if (theta.kind != DistributionKind::gamma || phi.kind != DistributionKind::beta)
        throw ValidationError("evaluate expects theta as gamma and phi as beta distributions");
    const int n = options.n;
    EvalReport report;
    report.n = n;
    report.target_bits = options.target_bits;

    // Word-topics.
    const auto vocab = phi.ids();
    const std::unordered_set<std::string> vocab_set(vocab.begin(), vocab.end());
    for (const auto& term : model.cols)
        if (!vocab_set.count(term))
            throw ValidationError("model term '" + term + "' is not in the true vocabulary");
    report.terms_missing_from_model = vocab.size() - model.cols.size();
    if (report.terms_missing_from_model > 0 && !options.complete)
        throw ValidationError(std::to_string(report.terms_missing_from_model) +
                              " true terms are absent from the model; pass --complete to treat them as 0");

    const TopicDistributions beta = complete_terms(tidy_beta(model, n), vocab);
    for (const auto& w : beta.warnings)
        report.warnings.push_back(w);
    const auto truth = distribution_matrix(phi, false, vocab);
    const auto fitted = distribution_matrix(beta, false, vocab);
    if (truth.values.rows() != n)
        throw ValidationError("truth has " + std::to_string(truth.values.rows()) + " topics but n = " +
                              std::to_string(n));
    report.truth_topics = truth.row_names;
    report.fitted_topics = fitted.row_names;
    report.beta_distance = hellinger_cross(truth.values, fitted.values);
    report.assignment = assign_topics(report.beta_distance);
    for (Eigen::Index i = 0; i < n; ++i)
        report.beta_diagonal.push_back(
            report.beta_distance(i, static_cast<Eigen::Index>(report.assignment.assignment[static_cast<std::size_t>(i)])));
    report.beta_summary = summarize(report.beta_diagonal);

    // Topic-documents, fitted topics relabeled to match the truth.
    GammaOptions plain;
    plain.transform = options.gamma_transform;
    plain.permutation = report.assignment.permutation();
    const TopicDistributions gamma = tidy_gamma(model, n, plain);
    report.power = target_power(gamma, options.target_bits);
    if (report.power.skipped > 0)
        report.warnings.push_back(std::to_string(report.power.skipped) +
                                  " document(s) cannot reach the target entropy and were left out of the exponent");

    GammaOptions renorm = plain;
    renorm.exponent = report.power.exponent;
    renorm.keep_original = true;
    const TopicDistributions gamma_rn = tidy_gamma(model, n, renorm);

    const auto topics = labels(n);
    const auto& docs = model.rows;
    report.documents = docs.size();
    const Eigen::MatrixXd true_rows = gamma_rows(theta, docs, topics, false);
    const Eigen::MatrixXd fitted_rows = gamma_rows(gamma_rn, docs, topics, false);
    const Eigen::MatrixXd renorm_rows = gamma_rows(gamma_rn, docs, topics, true);

    report.gamma_summary = summarize(row_distances(true_rows, fitted_rows));
    report.gamma_renormalized_summary = summarize(row_distances(true_rows, renorm_rows));
    report.entropy_truth = summarize(row_entropies(true_rows));
    report.entropy_fitted = summarize(row_entropies(fitted_rows));
    report.entropy_renormalized = summarize(row_entropies(renorm_rows));
    return report;
}

void write_report(std::ostream& out, const EvalReport& report) {
    using nlohmann::json;
    json distance = json::array();
    for (Eigen::Index i = 0; i < report.beta_distance.rows(); ++i) {
        std::vector<double> row(static_cast<std::size_t>(report.beta_distance.cols()));
        for (Eigen::Index j = 0; j < report.beta_distance.cols(); ++j)
            row[static_cast<std::size_t>(j)] = report.beta_distance(i, j);
        distance.push_back(row);
    }
    json assignment = json::object();
    for (std::size_t i = 0; i < report.assignment.assignment.size(); ++i)
        assignment[report.truth_topics[i]] = report.fitted_topics[report.assignment.assignment[i]];

    const json j = {
        {"n", report.n},
        {"documents", report.documents},
        {"terms_missing_from_model", report.terms_missing_from_model},
        {"assignment", assignment},
        {"assignment_cost", report.assignment.total_cost},
        {"beta",
         {{"truth_topics", report.truth_topics},
          {"fitted_topics", report.fitted_topics},
          {"distance", distance},
          {"diagonal", report.beta_diagonal},
          {"diagonal_summary", summary_json(report.beta_summary)}}},
        {"gamma",
         {{"diagonal_summary", summary_json(report.gamma_summary)},
          {"diagonal_summary_renormalized", summary_json(report.gamma_renormalized_summary)}}},
        {"renormalization",
         {{"target_entropy", report.target_bits},
          {"exponent", report.power.exponent},
          {"documents_used", report.power.used},
          {"documents_skipped", report.power.skipped}}},
        {"entropy",
         {{"truth", summary_json(report.entropy_truth)},
          {"fitted", summary_json(report.entropy_fitted)},
          {"renormalized", summary_json(report.entropy_renormalized)}}},
        {"warnings", report.warnings}};
    out << j.dump(2) << '\n';
}

} // namespace vartopic
