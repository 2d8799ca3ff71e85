#include "vartopic/model.hpp"

#include "vartopic/errors.hpp"
#include "vartopic/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace vartopic {

const VarimaxSolution& FittedModel::solution(int n) const {
    const auto it = solutions.find(n);
    if (it == solutions.end())
        throw ValidationError("no solution for n = " + std::to_string(n));
    return it->second;
}

FittedModel fit(const TripletCorpus& dtm, std::vector<int> n_values, const FitOptions& options) {
    if (n_values.empty())
        throw ValidationError("n_values is empty");
    for (int n : n_values)
        if (n < 1)
            throw ValidationError("every n must be positive");
    std::sort(n_values.begin(), n_values.end());
    n_values.erase(std::unique(n_values.begin(), n_values.end()), n_values.end());

    CenteredOperator op(build_matrix(dtm, MatrixRows::doc));
    if (op.rows() < 2)
        throw ValidationError("fitting needs at least two documents");
    const int k = n_values.back();
    if (k > std::min(op.rows(), op.cols()))
        throw ValidationError("n = " + std::to_string(k) + " exceeds min(#docs, #terms) = " +
                              std::to_string(std::min(op.rows(), op.cols())));

    FittedModel model;
    model.totalvar = total_variance(op);
    if (!(model.totalvar > 0.0))
        throw ValidationError("the centered matrix is identically zero");

    const PartialSVD svd = truncated_svd(op, k, options.svd);
    model.warnings = svd.warnings;
    const VarianceSummary variance = variance_summary(svd, op);
    model.sdev = variance.sdev;
    model.rows = op.base().row_names();
    model.cols = op.base().col_names();
    model.center = op.column_means();
    model.rotation = svd.v;
    model.n_values = n_values;

    const double root = std::sqrt(static_cast<double>(op.rows() - 1));
    const Eigen::VectorXd sdev = Eigen::Map<const Eigen::VectorXd>(model.sdev.data(), k);
    for (int n : n_values) {
        const Eigen::MatrixXd raw = svd.v.leftCols(n) * sdev.head(n).asDiagonal();
        VarimaxSolution sol = varimax_rotate(raw, options.varimax);
        sol.scores = svd.u.leftCols(n) * root * sol.rotmat;
        sol = fix_signs(std::move(sol));
        for (const auto& w : sol.warnings)
            model.warnings.push_back("n = " + std::to_string(n) + ": " + w);
        model.solutions.emplace(n, std::move(sol));
    }
    return model;
}

TopicDistributions tidy_beta(const FittedModel& model, int n) {
    const auto& loadings = model.solution(n).loadings;
    TopicDistributions td{DistributionKind::beta, {}, {}};
    for (Eigen::Index t = 0; t < loadings.cols(); ++t) {
        const std::string label = topic_label(static_cast<std::size_t>(t));
        if (!(loadings.col(t).array() > 0.0).any())
            td.warnings.push_back("topic " + label + " has no positive loadings; using a uniform distribution");
        const ProbVector p = ProbVector::normalized(loadings.col(t));
        for (Eigen::Index w = 0; w < p.size(); ++w)
            if (p[w] > 0.0)
                td.entries.push_back({model.cols[static_cast<std::size_t>(w)], label, p[w], std::nullopt});
    }
    return td;
}

GammaTransform parse_gamma_transform(std::string_view name) {
    if (name == "softmax")
        return GammaTransform::softmax;
    if (name == "trim")
        return GammaTransform::trim;
    throw ValidationError("unknown gamma transform '" + std::string(name) + "'; use softmax or trim");
}

TopicDistributions tidy_gamma(const FittedModel& model, int n, const GammaOptions& options) {
    Eigen::MatrixXd scores = model.solution(n).scores;
    TopicDistributions td{DistributionKind::gamma, {}, {}};
    if (options.exponent && !(*options.exponent > 0.0))
        throw ValidationError("exponent must be positive");
    if (options.permutation) {
        const auto& perm = *options.permutation;
        const bool shape_ok = perm.rows() == n && perm.cols() == n;
        const bool binary = shape_ok && ((perm.array() == 0.0) || (perm.array() == 1.0)).all();
        if (!binary || (perm.rowwise().sum().array() != 1.0).any() || (perm.colwise().sum().array() != 1.0).any())
            throw ValidationError("permutation must be an n x n 0/1 matrix with unit row and column sums");
        scores = scores * perm.transpose();
        td.warnings.push_back("Rotating scores");
    }

    std::size_t degenerate = 0;
    for (Eigen::Index d = 0; d < scores.rows(); ++d) {
        Eigen::VectorXd row = scores.row(d).transpose();
        if (options.transform == GammaTransform::softmax)
            row = (row.array() - row.maxCoeff()).exp().matrix();
        else if (!(row.array() > 0.0).any())
            ++degenerate;
        const ProbVector p = ProbVector::normalized(row);
        std::optional<ProbVector> q;
        if (options.exponent)
            q = renormalize(p, *options.exponent);
        for (Eigen::Index t = 0; t < p.size(); ++t) {
            if (p[t] <= 0.0)
                continue;
            TopicProbability e{model.rows[static_cast<std::size_t>(d)], topic_label(static_cast<std::size_t>(t)),
                               p[t], std::nullopt};
            if (q) {
                if (options.keep_original)
                    e.renormalized = (*q)[t];
                else
                    e.probability = (*q)[t];
            }
            td.entries.push_back(std::move(e));
        }
    }
    if (degenerate > 0)
        td.warnings.push_back(std::to_string(degenerate) +
                              " document(s) have no positive scores; using uniform distributions");
    return td;
}

std::vector<ScreePoint> screeplot_data(const FittedModel& model) {
    VarianceSummary v{model.sdev, model.totalvar};
    const auto share = v.cumulative_share();
    std::vector<ScreePoint> out;
    for (std::size_t i = 0; i < model.sdev.size(); ++i)
        out.push_back({static_cast<int>(i + 1), model.sdev[i], share[i]});
    return out;
}

} // namespace vartopic
