#pragma once

#include "vartopic/corpus.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace vartopic {

/**
 * How much a term tells about which document it came from, in bits.
 *
 * H is the entropy of p(d | t) = n_dt / n_t. dH is the KL divergence of
 * p(d | t) from the uniform document prior (= log2 M - H); dR is the
 * divergence from the length prior r(d) = N_d / N. ndH and ndR weight the
 * gains by log2 n_t.
 */
struct TermScore {
    std::string term;
    double n = 0.0;
    double H = 0.0;
    double dH = 0.0;
    double dR = 0.0;
    double ndH = 0.0;
    double ndR = 0.0;
};

enum class VocabMethod { ndH, ndR };

VocabMethod parse_vocab_method(std::string_view name);

/// Every term with a positive total, in corpus term order. Counts must be whole numbers.
std::vector<TermScore> score_terms(const TripletCorpus& counts);

/// score_terms sorted by descending ndH (ties by term id).
std::vector<TermScore> score_ndH(const TripletCorpus& counts);
/// score_terms sorted by descending ndR (ties by term id).
std::vector<TermScore> score_ndR(const TripletCorpus& counts);

/// Sorts by the method's score, descending, ties by term id.
void rank_scores(std::vector<TermScore>& scores, VocabMethod method);

/// The `size` best terms under `method`. ValidationError if size exceeds the number of scores.
std::vector<std::string> select_vocab(std::span<const TermScore> scores, VocabMethod method, std::size_t size);

} // namespace vartopic
