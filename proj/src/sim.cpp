#include "vartopic/sim.hpp"

#include "vartopic/errors.hpp"
#include "vartopic/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <thread>

namespace vartopic {

namespace {

constexpr std::uint64_t kThetaStream = 0;
constexpr std::uint64_t kPhiStream = 1;
constexpr std::uint64_t kLengthStream = 2;
constexpr std::uint64_t kDocStreamBase = 1000;

void check_shapes(const std::vector<std::uint64_t>& lengths, const Eigen::MatrixXd& theta, const Eigen::MatrixXd& phi,
                  const std::vector<std::string>& doc_ids, const std::vector<std::string>& term_ids) {
    if (static_cast<Eigen::Index>(lengths.size()) != theta.rows() || doc_ids.size() != lengths.size())
        throw ValidationError("lengths, theta rows and doc ids must agree");
    if (theta.cols() != phi.rows())
        throw ValidationError("theta columns must equal phi rows");
    if (static_cast<Eigen::Index>(term_ids.size()) != phi.cols())
        throw ValidationError("phi columns must equal the number of term ids");
    auto rows_are_distributions = [](const Eigen::MatrixXd& m) {
        return m.allFinite() && (m.array() >= 0.0).all() &&
               ((m.rowwise().sum().array() - 1.0).abs() <= 1e-9).all();
    };
    if (!rows_are_distributions(theta) || !rows_are_distributions(phi))
        throw ValidationError("theta and phi rows must be probability distributions");
}

template <typename Sampler>
TripletCorpus assemble(std::size_t n_docs, const std::vector<std::string>& doc_ids,
                       const std::vector<std::string>& term_ids, unsigned threads, Sampler&& sample) {
    std::vector<std::vector<std::uint32_t>> counts(n_docs);
    if (threads == 0)
        threads = default_threads();
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(n_docs, 1))));
    if (threads == 1) {
        for (std::size_t d = 0; d < n_docs; ++d)
            counts[d] = sample(d);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < threads; ++w)
            pool.emplace_back([&, w] {
                for (std::size_t d = w; d < n_docs; d += threads)
                    counts[d] = sample(d);
            });
        for (auto& t : pool)
            t.join();
    }
    std::vector<Triplet> triplets;
    for (std::size_t d = 0; d < n_docs; ++d)
        for (std::size_t t = 0; t < counts[d].size(); ++t)
            if (counts[d][t] > 0)
                triplets.push_back({doc_ids[d], term_ids[t], static_cast<double>(counts[d][t])});
    return TripletCorpus::from_triplets(triplets);
}

std::size_t draw_index(const std::vector<double>& cumulative, Philox& rng) {
    const double u = rng.uniform() * cumulative.back();
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    return std::min(static_cast<std::size_t>(it - cumulative.begin()), cumulative.size() - 1);
}

std::vector<double> cumulate(const Eigen::VectorXd& weights) {
    std::vector<double> out(static_cast<std::size_t>(weights.size()));
    double running = 0.0;
    for (Eigen::Index i = 0; i < weights.size(); ++i) {
        running += weights(i);
        out[static_cast<std::size_t>(i)] = running;
    }
    return out;
}

} // namespace

void SimConfig::validate() const {
    if (k < 1 || Mj < 1 || vocab < 1)
        throw ValidationError("k, Mj and vocab must be positive");
    if (!(size > 0.0) || !(mu > 0.0) || !(topic_scale > 0.0) || !(word_beta > 0.0))
        throw ValidationError("size, mu, topic_scale and word_beta must be positive");
    if (!(topic_peak > 0.0 && topic_peak < 1.0))
        throw ValidationError("topic_peak must lie in (0, 1)");
}

Eigen::MatrixXd rdirichlet(int n, const Eigen::VectorXd& alpha, Philox& rng) {
    if (n < 0)
        throw ValidationError("n must be non-negative");
    if (alpha.size() == 0 || !alpha.allFinite() || (alpha.array() <= 0.0).any())
        throw ValidationError("Dirichlet parameters must be positive");
    const Eigen::Index k = alpha.size();
    Eigen::MatrixXd out(n, k);
    Eigen::VectorXd logs(k);
    for (int r = 0; r < n; ++r) {
        for (Eigen::Index i = 0; i < k; ++i)
            logs(i) = log_gamma_variate(rng, alpha(i));
        const double top = logs.maxCoeff();
        const Eigen::VectorXd w = (logs.array() - top).exp().matrix();
        out.row(r) = (w / w.sum()).transpose();
    }
    return out;
}

std::vector<std::uint64_t> rnbinom(int n, double size, double mu, Philox& rng) {
    if (n < 0)
        throw ValidationError("n must be non-negative");
    if (!(size > 0.0) || !(mu > 0.0))
        throw ValidationError("size and mu must be positive");
    std::vector<std::uint64_t> out(static_cast<std::size_t>(n));
    for (auto& x : out)
        x = negative_binomial_variate(rng, size, mu);
    return out;
}

TripletCorpus draw_corpus(const std::vector<std::uint64_t>& lengths, const Eigen::MatrixXd& theta,
                          const Eigen::MatrixXd& phi, const Philox& rng, const std::vector<std::string>& doc_ids,
                          const std::vector<std::string>& term_ids, unsigned threads) {
    check_shapes(lengths, theta, phi, doc_ids, term_ids);
    return assemble(lengths.size(), doc_ids, term_ids, threads, [&](std::size_t d) {
        std::vector<std::uint32_t> counts(static_cast<std::size_t>(phi.cols()), 0);
        if (lengths[d] == 0)
            return counts;
        Philox stream = rng.stream(kDocStreamBase + d);
        const Eigen::VectorXd mixture = phi.transpose() * theta.row(static_cast<Eigen::Index>(d)).transpose();
        const auto cumulative = cumulate(mixture);
        for (std::uint64_t token = 0; token < lengths[d]; ++token)
            ++counts[draw_index(cumulative, stream)];
        return counts;
    });
}

TripletCorpus draw_corpus_per_token(const std::vector<std::uint64_t>& lengths, const Eigen::MatrixXd& theta,
                                    const Eigen::MatrixXd& phi, const Philox& rng,
                                    const std::vector<std::string>& doc_ids,
                                    const std::vector<std::string>& term_ids) {
    check_shapes(lengths, theta, phi, doc_ids, term_ids);
    std::vector<std::vector<double>> topic_cumulative;
    for (Eigen::Index t = 0; t < phi.rows(); ++t)
        topic_cumulative.push_back(cumulate(phi.row(t).transpose()));
    return assemble(lengths.size(), doc_ids, term_ids, 1, [&](std::size_t d) {
        std::vector<std::uint32_t> counts(static_cast<std::size_t>(phi.cols()), 0);
        Philox stream = rng.stream(kDocStreamBase + d);
        const auto doc_cumulative = cumulate(theta.row(static_cast<Eigen::Index>(d)).transpose());
        for (std::uint64_t token = 0; token < lengths[d]; ++token) {
            const std::size_t topic = draw_index(doc_cumulative, stream);
            ++counts[draw_index(topic_cumulative[topic], stream)];
        }
        return counts;
    });
}

std::vector<std::string> numbered_ids(std::size_t n) {
    std::vector<std::string> out;
    out.reserve(n);
    for (std::size_t i = 1; i <= n; ++i)
        out.push_back(std::to_string(i));
    return out;
}

unsigned default_threads() {
    unsigned threads = std::max(1u, std::thread::hardware_concurrency());
    if (const char* cap = std::getenv("VARTOPIC_THREADS")) {
        char* end = nullptr;
        const long value = std::strtol(cap, &end, 10);
        if (end != cap && *end == '\0' && value >= 1)
            threads = std::min(threads, static_cast<unsigned>(value));
    }
    return threads;
}

SimTruth simulate(const SimConfig& config, unsigned threads) {
    config.validate();
    const Philox root(config.seed);
    const int n_docs = config.k * config.Mj;

    SimTruth truth;
    truth.theta.resize(n_docs, config.k);
    if (config.k == 1) {
        truth.theta.setOnes();
    } else {
        Philox stream = root.stream(kThetaStream);
        for (int j = 1; j <= config.k; ++j) {
            const Eigen::VectorXd alpha = peak_alpha(config.k, j, config.topic_peak, config.topic_scale);
            truth.theta.middleRows((j - 1) * config.Mj, config.Mj) = rdirichlet(config.Mj, alpha, stream);
        }
    }
    {
        Philox stream = root.stream(kPhiStream);
        truth.phi = rdirichlet(config.k, Eigen::VectorXd::Constant(config.vocab, config.word_beta), stream);
    }
    {
        Philox stream = root.stream(kLengthStream);
        truth.lengths = rnbinom(n_docs, config.size, config.mu, stream);
    }
    truth.doc_ids = numbered_ids(static_cast<std::size_t>(n_docs));
    truth.term_ids = numbered_ids(static_cast<std::size_t>(config.vocab));
    truth.corpus = draw_corpus(truth.lengths, truth.theta, truth.phi, root, truth.doc_ids, truth.term_ids, threads);
    return truth;
}

TopicDistributions theta_distributions(const SimTruth& truth) {
    TopicDistributions td{DistributionKind::gamma, {}, {}};
    for (Eigen::Index d = 0; d < truth.theta.rows(); ++d)
        for (Eigen::Index t = 0; t < truth.theta.cols(); ++t)
            td.entries.push_back({truth.doc_ids[static_cast<std::size_t>(d)], topic_label(static_cast<std::size_t>(t)),
                                  truth.theta(d, t), std::nullopt});
    return td;
}

TopicDistributions phi_distributions(const SimTruth& truth) {
    TopicDistributions td{DistributionKind::beta, {}, {}};
    for (Eigen::Index t = 0; t < truth.phi.rows(); ++t)
        for (Eigen::Index w = 0; w < truth.phi.cols(); ++w)
            td.entries.push_back({truth.term_ids[static_cast<std::size_t>(w)], topic_label(static_cast<std::size_t>(t)),
                                  truth.phi(t, w), std::nullopt});
    return td;
}

} // namespace vartopic
