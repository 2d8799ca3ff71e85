#pragma once

#include "vartopic/corpus.hpp"
#include "vartopic/distributions.hpp"
#include "vartopic/svd.hpp"
#include "vartopic/varimax.hpp"

#include <Eigen/Dense>

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace vartopic {

struct FitOptions {
    SvdOptions svd;
    VarimaxOptions varimax;
};

/**
 * One centered SVD at max(n_values), and a varimax solution on the leading
 * n components for each requested n.
 *
 * Conventions: loadings = V_n diag(sdev_n) T and scores = U_n sqrt(rows - 1) T,
 * so scores * loadings^T is the rank-n approximation of the centered matrix.
 */
struct FittedModel {
    double totalvar = 0.0;
    std::vector<double> sdev;
    std::vector<std::string> rows; ///< document ids
    std::vector<std::string> cols; ///< term ids
    Eigen::VectorXd center;
    bool scale = false;
    Eigen::MatrixXd rotation; ///< terms x max(n_values), the right singular vectors
    std::vector<int> n_values;
    std::map<int, VarimaxSolution> solutions;
    std::vector<std::string> warnings;

    const VarimaxSolution& solution(int n) const;
};

/// The corpus should already be transformed (log1p). Throws ValidationError on bad n_values or an all-zero matrix.
FittedModel fit(const TripletCorpus& dtm, std::vector<int> n_values, const FitOptions& options = {});

/// Loadings trimmed at 0 and normalized per topic; zero entries omitted.
TopicDistributions tidy_beta(const FittedModel& model, int n);

/**
 * How a document's scores become a distribution. softmax: exp(s) / sum exp(s).
 * trim: negatives to 0, then divide by the sum (uniform if nothing is positive).
 */
enum class GammaTransform { softmax, trim };

GammaTransform parse_gamma_transform(std::string_view name);

struct GammaOptions {
    GammaTransform transform = GammaTransform::softmax;
    /// n x n permutation applied as scores * permutation^T before normalizing.
    std::optional<Eigen::MatrixXd> permutation;
    /// Power renormalization exponent, > 0.
    std::optional<double> exponent;
    /// With an exponent: report both the plain and the renormalized values.
    bool keep_original = false;
};

/// Scores converted per document by `transform`; zero entries omitted.
TopicDistributions tidy_gamma(const FittedModel& model, int n, const GammaOptions& options = {});

struct ScreePoint {
    int component = 0;
    double sdev = 0.0;
    double cumulative_share = 0.0;
};

std::vector<ScreePoint> screeplot_data(const FittedModel& model);

} // namespace vartopic
