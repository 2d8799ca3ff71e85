#include "vartopic/vocab.hpp"

#include "vartopic/errors.hpp"

#include <algorithm>
#include <cmath>

namespace vartopic {

VocabMethod parse_vocab_method(std::string_view name) {
    if (name == "ndH")
        return VocabMethod::ndH;
    if (name == "ndR")
        return VocabMethod::ndR;
    throw ValidationError("unknown vocabulary method '" + std::string(name) + "'; use ndH or ndR");
}

std::vector<TermScore> score_terms(const TripletCorpus& counts) {
    if (counts.empty())
        throw ValidationError("cannot score an empty corpus");
    const std::size_t n_docs = counts.docs().size();
    const std::size_t n_terms = counts.terms().size();
    std::vector<double> doc_length(n_docs, 0.0), term_total(n_terms, 0.0);
    for (const auto& e : counts.entries()) {
        if (e.value != std::floor(e.value))
            throw ValidationError("vocabulary scoring needs whole-number counts; got " + std::to_string(e.value));
        doc_length[e.doc] += e.value;
        term_total[e.term] += e.value;
    }
    double grand_total = 0.0;
    for (double len : doc_length)
        grand_total += len;

    // Accumulate sum p log2 p and sum p log2 r per term in one pass.
    std::vector<double> plogp(n_terms, 0.0), plogr(n_terms, 0.0);
    for (const auto& e : counts.entries()) {
        if (e.value <= 0.0)
            continue;
        const double p = e.value / term_total[e.term];
        plogp[e.term] += p * std::log2(p);
        plogr[e.term] += p * std::log2(doc_length[e.doc] / grand_total);
    }

    const double log_m = std::log2(static_cast<double>(n_docs));
    std::vector<TermScore> out;
    for (std::size_t t = 0; t < n_terms; ++t) {
        if (term_total[t] <= 0.0)
            continue;
        TermScore s;
        s.term = counts.terms()[t];
        s.n = term_total[t];
        s.H = -plogp[t];
        s.dH = log_m - s.H;
        s.dR = plogp[t] - plogr[t];
        const double weight = std::log2(s.n);
        s.ndH = weight * s.dH;
        s.ndR = weight * s.dR;
        out.push_back(std::move(s));
    }
    return out;
}

void rank_scores(std::vector<TermScore>& scores, VocabMethod method) {
    const auto key = method == VocabMethod::ndH ? &TermScore::ndH : &TermScore::ndR;
    std::sort(scores.begin(), scores.end(), [key](const TermScore& a, const TermScore& b) {
        if (a.*key != b.*key)
            return a.*key > b.*key;
        return a.term < b.term;
    });
}

std::vector<TermScore> score_ndH(const TripletCorpus& counts) {
    auto scores = score_terms(counts);
    rank_scores(scores, VocabMethod::ndH);
    return scores;
}

std::vector<TermScore> score_ndR(const TripletCorpus& counts) {
    auto scores = score_terms(counts);
    rank_scores(scores, VocabMethod::ndR);
    return scores;
}

std::vector<std::string> select_vocab(std::span<const TermScore> scores, VocabMethod method, std::size_t size) {
    if (size > scores.size())
        throw ValidationError("vocabulary size " + std::to_string(size) + " exceeds the " +
                              std::to_string(scores.size()) + " scored terms");
    std::vector<TermScore> ranked(scores.begin(), scores.end());
    rank_scores(ranked, method);
    std::vector<std::string> out;
    out.reserve(size);
    for (std::size_t i = 0; i < size; ++i)
        out.push_back(ranked[i].term);
    return out;
}

} // namespace vartopic
