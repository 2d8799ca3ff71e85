#include "vartopic/distributions.hpp"

#include "vartopic/errors.hpp"
#include "vartopic/text_io.hpp"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <unordered_map>
#include <unordered_set>

namespace vartopic {

namespace {

std::vector<std::string> first_appearance(const std::vector<TopicProbability>& entries,
                                          const std::string TopicProbability::*field) {
    std::vector<std::string> out;
    std::unordered_set<std::string> seen;
    for (const auto& e : entries)
        if (seen.insert(e.*field).second)
            out.push_back(e.*field);
    return out;
}

} // namespace

std::vector<std::string> TopicDistributions::ids() const { return first_appearance(entries, &TopicProbability::id); }

std::vector<std::string> TopicDistributions::topics() const {
    return first_appearance(entries, &TopicProbability::topic);
}

bool TopicDistributions::has_renormalized() const {
    return std::any_of(entries.begin(), entries.end(), [](const auto& e) { return e.renormalized.has_value(); });
}

std::string topic_label(std::size_t index) {
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "V%02zu", index + 1);
    return buffer;
}

TopicDistributions complete_terms(const TopicDistributions& td, std::span<const std::string> full_vocab) {
    std::unordered_map<std::string, std::size_t> position;
    for (std::size_t i = 0; i < full_vocab.size(); ++i)
        position.emplace(full_vocab[i], i);

    const auto topics = td.topics();
    std::unordered_map<std::string, std::size_t> topic_position;
    for (std::size_t i = 0; i < topics.size(); ++i)
        topic_position.emplace(topics[i], i);

    std::vector<std::vector<std::optional<TopicProbability>>> grid(
        topics.size(), std::vector<std::optional<TopicProbability>>(full_vocab.size()));
    for (const auto& e : td.entries) {
        const auto it = position.find(e.id);
        if (it == position.end())
            throw ValidationError("term '" + e.id + "' is not in the vocabulary");
        grid[topic_position.at(e.topic)][it->second] = e;
    }

    const bool renormalized = td.has_renormalized();
    TopicDistributions out{td.kind, {}, td.warnings};
    out.entries.reserve(topics.size() * full_vocab.size());
    for (std::size_t t = 0; t < topics.size(); ++t)
        for (std::size_t w = 0; w < full_vocab.size(); ++w) {
            if (grid[t][w]) {
                out.entries.push_back(*grid[t][w]);
            } else {
                TopicProbability filled{full_vocab[w], topics[t], 0.0, std::nullopt};
                if (renormalized)
                    filled.renormalized = 0.0;
                out.entries.push_back(std::move(filled));
            }
        }
    return out;
}

LabeledMatrix distribution_matrix(const TopicDistributions& td, bool fill_missing,
                                  std::span<const std::string> components, bool use_renormalized) {
    const bool by_topic = td.kind == DistributionKind::beta;
    const auto groups = by_topic ? td.topics() : td.ids();
    std::vector<std::string> cols;
    if (components.empty())
        cols = by_topic ? td.ids() : td.topics();
    else
        cols.assign(components.begin(), components.end());

    std::unordered_map<std::string, Eigen::Index> row_at, col_at;
    for (std::size_t i = 0; i < groups.size(); ++i)
        row_at.emplace(groups[i], static_cast<Eigen::Index>(i));
    for (std::size_t i = 0; i < cols.size(); ++i)
        col_at.emplace(cols[i], static_cast<Eigen::Index>(i));

    LabeledMatrix out{Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(groups.size()),
                                            static_cast<Eigen::Index>(cols.size())),
                      groups, cols};
    Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> seen =
        Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>::Constant(out.values.rows(), out.values.cols(), false);
    for (const auto& e : td.entries) {
        const auto& group = by_topic ? e.topic : e.id;
        const auto& component = by_topic ? e.id : e.topic;
        const auto c = col_at.find(component);
        if (c == col_at.end())
            throw ValidationError("component '" + component + "' is not in the component list");
        const auto r = row_at.at(group);
        double value = e.probability;
        if (use_renormalized) {
            if (!e.renormalized)
                throw ValidationError("entry without a renormalized value");
            value = *e.renormalized;
        }
        out.values(r, c->second) = value;
        seen(r, c->second) = true;
    }
    if (!fill_missing && !seen.all())
        throw ValidationError("distribution set is incomplete; complete it explicitly to treat gaps as 0");
    return out;
}

void write_distributions(std::ostream& out, const TopicDistributions& td) {
    const bool rn = td.has_renormalized();
    out << "id,topic,probability" << (rn ? ",probability_rn" : "") << '\n';
    for (const auto& e : td.entries) {
        out << text::csv_field(e.id) << ',' << text::csv_field(e.topic) << ',' << text::format_double(e.probability);
        if (rn)
            out << ',' << text::format_double(e.renormalized.value_or(0.0));
        out << '\n';
    }
}

TopicDistributions read_distributions(std::istream& in, DistributionKind kind) {
    TopicDistributions td{kind, {}, {}};
    std::string line;
    std::size_t line_number = 0;
    if (!text::read_line(in, line))
        return td;
    ++line_number;
    const auto header = text::split_csv_line(line, line_number);
    auto column = [&](const char* name) -> std::optional<std::size_t> {
        const auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end())
            return std::nullopt;
        return static_cast<std::size_t>(it - header.begin());
    };
    const auto id_col = column("id");
    const auto topic_col = column("topic");
    const auto prob_col = column("probability");
    const auto rn_col = column("probability_rn");
    if (!id_col || !topic_col || !prob_col)
        throw ParseError("header must contain id,topic,probability", line_number);

    while (text::read_line(in, line)) {
        ++line_number;
        if (line.empty())
            continue;
        const auto fields = text::split_csv_line(line, line_number);
        if (fields.size() != header.size())
            throw ParseError("expected " + std::to_string(header.size()) + " fields", line_number);
        TopicProbability entry{fields[*id_col], fields[*topic_col], text::parse_double(fields[*prob_col], line_number),
                               std::nullopt};
        if (rn_col)
            entry.renormalized = text::parse_double(fields[*rn_col], line_number);
        if (entry.probability < 0.0 || entry.probability > 1.0 + 1e-12)
            throw ValidationError("line " + std::to_string(line_number) + ": probability outside [0, 1]");
        td.entries.push_back(std::move(entry));
    }
    return td;
}

} // namespace vartopic
