#pragma once

#include "vartopic/corpus.hpp"
#include "vartopic/distributions.hpp"
#include "vartopic/rng.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

namespace vartopic {

struct SimConfig {
    int k = 10;         ///< topics, and journals
    int Mj = 100;       ///< documents per journal
    int vocab = 1000;
    double size = 10.0; ///< negative binomial dispersion
    double mu = 300.0;  ///< mean document length
    double topic_peak = 0.8;
    double topic_scale = 10.0;
    double word_beta = 0.1;
    std::uint64_t seed = 20220619;

    void validate() const;
};

struct SimTruth {
    Eigen::MatrixXd theta; ///< documents x k
    Eigen::MatrixXd phi;   ///< k x vocab
    std::vector<std::uint64_t> lengths;
    std::vector<std::string> doc_ids;
    std::vector<std::string> term_ids;
    TripletCorpus corpus;
};

/// n independent Dirichlet(alpha) rows, from Gamma variates normalized in log space.
Eigen::MatrixXd rdirichlet(int n, const Eigen::VectorXd& alpha, Philox& rng);

/// n negative binomial draws with mean mu and variance mu + mu^2 / size.
std::vector<std::uint64_t> rnbinom(int n, double size, double mu, Philox& rng);

/**
 * Document d gets lengths[d] tokens drawn from its mixture row theta_d^T phi,
 * using the stream `1000 + d` of `rng`'s seed. The result does not depend on
 * the thread count. Documents of length 0 contribute no entries.
 */
TripletCorpus draw_corpus(const std::vector<std::uint64_t>& lengths, const Eigen::MatrixXd& theta,
                          const Eigen::MatrixXd& phi, const Philox& rng, const std::vector<std::string>& doc_ids,
                          const std::vector<std::string>& term_ids, unsigned threads = 0);

/// Same distribution as draw_corpus, one topic draw then one term draw per token. Slow; for testing.
TripletCorpus draw_corpus_per_token(const std::vector<std::uint64_t>& lengths, const Eigen::MatrixXd& theta,
                                    const Eigen::MatrixXd& phi, const Philox& rng,
                                    const std::vector<std::string>& doc_ids,
                                    const std::vector<std::string>& term_ids);

/// Ids "1", "2", ..., "n".
std::vector<std::string> numbered_ids(std::size_t n);

/// Threads to use: hardware concurrency, capped by VARTOPIC_THREADS when set.
unsigned default_threads();

SimTruth simulate(const SimConfig& config, unsigned threads = 0);

/// theta as topic-document distributions, phi as word-topic distributions, zeros included.
TopicDistributions theta_distributions(const SimTruth& truth);
TopicDistributions phi_distributions(const SimTruth& truth);

} // namespace vartopic
