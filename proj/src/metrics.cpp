#include "vartopic/metrics.hpp"

#include "vartopic/errors.hpp"

#include <boost/math/special_functions/digamma.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_set>

namespace vartopic {

namespace {

constexpr double kLn2 = 0.693147180559945309417232121458176568;

// Entropy in bits of p^beta / Z, evaluated in log space so extreme exponents stay finite.
double powered_entropy(const Eigen::VectorXd& log_p, double beta) {
    double top = -std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < log_p.size(); ++i)
        top = std::max(top, beta * log_p(i));
    double z = 0.0;
    for (Eigen::Index i = 0; i < log_p.size(); ++i)
        z += std::exp(beta * log_p(i) - top);
    const double log_z = std::log(z);
    double h = 0.0;
    for (Eigen::Index i = 0; i < log_p.size(); ++i) {
        const double lq = beta * log_p(i) - top - log_z;
        h -= std::exp(lq) * lq;
    }
    return h / kLn2;
}

} // namespace

ProbVector::ProbVector(Eigen::VectorXd p) : p_(std::move(p)) {
    if (p_.size() == 0)
        throw ValidationError("probability vector is empty");
    if (!p_.allFinite() || (p_.array() < 0.0).any())
        throw ValidationError("probability vector has negative or non-finite components");
    if (std::fabs(p_.sum() - 1.0) > 1e-9)
        throw ValidationError("probability vector does not sum to 1");
}

ProbVector ProbVector::normalized(const Eigen::VectorXd& x) {
    if (x.size() == 0)
        throw ValidationError("probability vector is empty");
    if (!x.allFinite())
        throw ValidationError("cannot normalize non-finite values");
    Eigen::VectorXd p = x.cwiseMax(0.0);
    const double total = p.sum();
    if (total > 0.0)
        p /= total;
    else
        p.setConstant(1.0 / static_cast<double>(x.size()));
    return ProbVector(std::move(p), Trusted{});
}

double entropy(const ProbVector& p) {
    double h = 0.0;
    for (Eigen::Index i = 0; i < p.size(); ++i)
        if (p[i] > 0.0)
            h -= p[i] * std::log2(p[i]);
    return h;
}

Eigen::VectorXd peak_alpha(int k, int j, double peak, double scale) {
    if (k < 1 || j < 1 || j > k)
        throw ValidationError("peak_alpha needs 1 <= j <= k");
    if (!(peak > 0.0 && peak <= 1.0) || !(scale > 0.0))
        throw ValidationError("peak must lie in (0, 1] and scale must be positive");
    if (k == 1) {
        if (peak < 1.0)
            throw ValidationError("k = 1 leaves no component for the remainder 1 - peak");
        return Eigen::VectorXd::Constant(1, scale);
    }
    Eigen::VectorXd alpha = Eigen::VectorXd::Constant(k, (1.0 - peak) * scale / (k - 1));
    alpha(j - 1) = peak * scale;
    return alpha;
}

double expected_entropy(const Eigen::VectorXd& alpha) {
    if (alpha.size() == 0)
        throw ValidationError("alpha is empty");
    if (!alpha.allFinite() || (alpha.array() <= 0.0).any())
        throw ValidationError("alpha components must be positive");
    if (alpha.size() == 1)
        return 0.0;
    const double a0 = alpha.sum();
    double weighted = 0.0;
    for (Eigen::Index i = 0; i < alpha.size(); ++i)
        weighted += alpha(i) / a0 * boost::math::digamma(alpha(i) + 1.0);
    return (boost::math::digamma(a0 + 1.0) - weighted) / kLn2;
}

double expected_entropy(double alpha, int k) {
    if (k < 1)
        throw ValidationError("k must be positive");
    if (!(alpha > 0.0) || !std::isfinite(alpha))
        throw ValidationError("alpha must be positive");
    if (k == 1)
        return 0.0;
    const double a0 = alpha * k;
    return (boost::math::digamma(a0 + 1.0) - boost::math::digamma(alpha + 1.0)) / kLn2;
}

ProbVector renormalize(const ProbVector& p, double beta) {
    if (!(beta > 0.0) || !std::isfinite(beta))
        throw ValidationError("renormalization exponent must be positive");
    double top = -std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < p.size(); ++i)
        if (p[i] > 0.0)
            top = std::max(top, beta * std::log(p[i]));
    Eigen::VectorXd q(p.size());
    for (Eigen::Index i = 0; i < p.size(); ++i)
        q(i) = p[i] > 0.0 ? std::exp(beta * std::log(p[i]) - top) : 0.0;
    return ProbVector::normalized(q);
}

double solve_power(const ProbVector& p, double target_bits, const PowerSearch& search) {
    if (!std::isfinite(target_bits))
        throw ValidationError("target entropy must be finite");
    std::vector<double> logs;
    for (Eigen::Index i = 0; i < p.size(); ++i)
        if (p[i] > 0.0)
            logs.push_back(std::log(p[i]));
    const Eigen::VectorXd log_p = Eigen::Map<const Eigen::VectorXd>(logs.data(), static_cast<Eigen::Index>(logs.size()));
    const double top = log_p.maxCoeff();
    const auto ties = (log_p.array() == top).count();
    const double h_max = std::log2(static_cast<double>(log_p.size()));
    const double h_min = std::log2(static_cast<double>(ties));
    if (ties == log_p.size())
        throw NoSolutionError("distribution is uniform on its support; every exponent gives the same entropy");
    if (!(target_bits > h_min && target_bits < h_max))
        throw NoSolutionError("target entropy lies outside the attainable range (" + std::to_string(h_min) + ", " +
                              std::to_string(h_max) + ") bits");

    // Entropy decreases in beta. Widen the bracket until it straddles the target.
    double lo = search.lower;
    double hi = search.upper;
    while (powered_entropy(log_p, lo) < target_bits && lo > 1e-300)
        lo /= 65536.0;
    while (powered_entropy(log_p, hi) > target_bits && hi < 1e300)
        hi *= 65536.0;
    if (powered_entropy(log_p, lo) < target_bits || powered_entropy(log_p, hi) > target_bits)
        throw NoSolutionError("could not bracket the target entropy");

    double log_lo = std::log(lo);
    double log_hi = std::log(hi);
    double mid = 0.5 * (log_lo + log_hi);
    for (int iter = 0; iter < search.max_iter; ++iter) {
        mid = 0.5 * (log_lo + log_hi);
        const double h = powered_entropy(log_p, std::exp(mid));
        if (std::fabs(h - target_bits) <= search.tol_bits)
            break;
        if (h > target_bits)
            log_lo = mid;
        else
            log_hi = mid;
        if (log_hi - log_lo < 1e-15)
            break;
    }
    return std::exp(mid);
}

PowerTarget target_power(const TopicDistributions& gammas, double target_bits) {
    if (gammas.kind != DistributionKind::gamma)
        throw ValidationError("target_power expects topic-document (gamma) distributions");
    const auto m = distribution_matrix(gammas, true);
    if (m.values.rows() == 0)
        throw ValidationError("target_power needs at least one document");
    PowerTarget out;
    double sum = 0.0;
    for (Eigen::Index d = 0; d < m.values.rows(); ++d) {
        try {
            sum += solve_power(ProbVector::normalized(m.values.row(d).transpose()), target_bits);
            ++out.used;
        } catch (const NoSolutionError&) {
            ++out.skipped;
        }
    }
    if (out.used == 0)
        throw NoSolutionError("no document can reach the target entropy");
    out.exponent = sum / static_cast<double>(out.used);
    return out;
}

double hellinger(const ProbVector& p, const ProbVector& q) {
    if (p.size() != q.size())
        throw ValidationError("hellinger: dimension mismatch");
    return (p.values().cwiseSqrt() - q.values().cwiseSqrt()).norm() / std::sqrt(2.0);
}

Eigen::MatrixXd hellinger_cross(const Eigen::MatrixXd& P, const Eigen::MatrixXd& Q) {
    if (P.cols() != Q.cols())
        throw ValidationError("hellinger_cross: component counts differ");
    if (!P.allFinite() || !Q.allFinite() || (P.array() < 0.0).any() || (Q.array() < 0.0).any())
        throw ValidationError("hellinger_cross: distributions must be finite and non-negative");
    const Eigen::MatrixXd rp = P.cwiseSqrt(), rq = Q.cwiseSqrt();
    Eigen::MatrixXd d = (1.0 - (rp * rq.transpose()).array()).cwiseMax(0.0).sqrt().matrix();
    // sqrt(1 - affinity) magnifies rounding near 0; redo those entries as a sum of squares.
    const double near = 1e-6;
    for (Eigen::Index j = 0; j < d.cols(); ++j)
        for (Eigen::Index i = 0; i < d.rows(); ++i)
            if (d(i, j) < near)
                d(i, j) = (rp.row(i) - rq.row(j)).norm() / std::sqrt(2.0);
    return d;
}

LabeledMatrix hellinger_cross(const TopicDistributions& P, const TopicDistributions& Q, bool fill_missing) {
    if (P.kind != Q.kind)
        throw ValidationError("hellinger_cross: cannot compare beta with gamma");
    const bool by_topic = P.kind == DistributionKind::beta;
    std::vector<std::string> components;
    std::unordered_set<std::string> seen;
    for (const auto* set : {&P, &Q})
        for (const auto& name : by_topic ? set->ids() : set->topics())
            if (seen.insert(name).second)
                components.push_back(name);
    const auto p = distribution_matrix(P, fill_missing, components);
    const auto q = distribution_matrix(Q, fill_missing, components);
    return {hellinger_cross(p.values, q.values), p.row_names, q.row_names};
}

Eigen::MatrixXd AssignmentSolution::permutation() const {
    const auto k = static_cast<Eigen::Index>(assignment.size());
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(k, k);
    for (Eigen::Index i = 0; i < k; ++i)
        out(i, static_cast<Eigen::Index>(assignment[static_cast<std::size_t>(i)])) = 1.0;
    return out;
}

AssignmentSolution assign_topics(const Eigen::MatrixXd& cost) {
    if (cost.rows() != cost.cols())
        throw ValidationError("assign_topics needs a square cost matrix");
    if (!cost.allFinite())
        throw ValidationError("assign_topics: costs must be finite");
    const auto n = static_cast<std::size_t>(cost.rows());
    AssignmentSolution out;
    if (n == 0)
        return out;

    // Shortest augmenting paths with row/column potentials; 1-based with a virtual column 0.
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<std::size_t> match(n + 1, 0), way(n + 1, 0);
    for (std::size_t i = 1; i <= n; ++i) {
        match[0] = i;
        std::size_t j0 = 0;
        std::vector<double> minv(n + 1, inf);
        std::vector<bool> used(n + 1, false);
        do {
            used[j0] = true;
            const std::size_t i0 = match[j0];
            double delta = inf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= n; ++j) {
                if (used[j])
                    continue;
                const double reduced = cost(static_cast<Eigen::Index>(i0 - 1), static_cast<Eigen::Index>(j - 1)) -
                                       u[i0] - v[j];
                if (reduced < minv[j]) {
                    minv[j] = reduced;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[match[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (match[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            match[j0] = match[j1];
            j0 = j1;
        } while (j0 != 0);
    }

    out.assignment.assign(n, 0);
    for (std::size_t j = 1; j <= n; ++j)
        out.assignment[match[j] - 1] = j - 1;
    for (std::size_t i = 0; i < n; ++i)
        out.total_cost += cost(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(out.assignment[i]));
    return out;
}

FiveNumber summarize(std::span<const double> values) {
    if (values.empty())
        throw ValidationError("cannot summarize an empty set");
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    auto quantile = [&](double prob) {
        const double h = (static_cast<double>(sorted.size()) - 1.0) * prob;
        const auto lo = static_cast<std::size_t>(std::floor(h));
        const auto hi = std::min(lo + 1, sorted.size() - 1);
        return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
    };
    FiveNumber out;
    out.min = sorted.front();
    out.q1 = quantile(0.25);
    out.median = quantile(0.5);
    out.q3 = quantile(0.75);
    out.max = sorted.back();
    out.mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) / static_cast<double>(sorted.size());
    return out;
}

} // namespace vartopic
