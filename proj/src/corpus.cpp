#include "vartopic/corpus.hpp"

#include "vartopic/errors.hpp"
#include "vartopic/text_io.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <ostream>
#include <unordered_map>

namespace vartopic {

namespace {

std::size_t intern(std::unordered_map<std::string, std::size_t>& index, std::vector<std::string>& names,
                   const std::string& name) {
    const auto [it, inserted] = index.try_emplace(name, names.size());
    if (inserted)
        names.push_back(name);
    return it->second;
}

struct PairHash {
    std::size_t operator()(const std::pair<std::size_t, std::size_t>& p) const noexcept {
        return std::hash<std::size_t>{}(p.first * 0x9E3779B97F4A7C15ull ^ p.second);
    }
};

void check_value(double value, std::size_t line) {
    if (!std::isfinite(value))
        throw ValidationError((line ? "line " + std::to_string(line) + ": " : std::string()) +
                              "non-finite value");
    if (value < 0.0)
        throw ValidationError((line ? "line " + std::to_string(line) + ": " : std::string()) +
                              "negative value " + text::format_double(value));
}

std::string json_id(const nlohmann::json& value, const char* key, std::size_t line) {
    if (value.is_string())
        return value.get<std::string>();
    if (value.is_number_integer() || value.is_number_unsigned())
        return value.dump();
    if (value.is_number_float()) {
        const double d = value.get<double>();
        if (std::floor(d) == d && std::fabs(d) < 1e15)
            return std::to_string(static_cast<long long>(d));
        return text::format_double(d);
    }
    throw ParseError(std::string("field '") + key + "' must be a string or number", line);
}

} // namespace

TripletCorpus TripletCorpus::from_triplets(std::span<const Triplet> triplets) {
    TripletCorpus corpus;
    std::unordered_map<std::string, std::size_t> doc_index, term_index;
    std::unordered_map<std::pair<std::size_t, std::size_t>, std::size_t, PairHash> cell;
    for (const auto& t : triplets) {
        check_value(t.value, 0);
        const auto d = intern(doc_index, corpus.docs_, t.doc);
        const auto w = intern(term_index, corpus.terms_, t.term);
        const auto [it, inserted] = cell.try_emplace({d, w}, corpus.entries_.size());
        if (inserted)
            corpus.entries_.push_back({d, w, t.value});
        else
            corpus.entries_[it->second].value += t.value;
    }
    return corpus;
}

void TripletCorpus::validate() const {
    for (const auto& e : entries_)
        check_value(e.value, 0);
}

double TripletCorpus::total() const noexcept {
    return std::accumulate(entries_.begin(), entries_.end(), 0.0,
                           [](double acc, const Entry& e) { return acc + e.value; });
}

std::vector<Triplet> TripletCorpus::triplets() const {
    std::vector<Triplet> out;
    out.reserve(entries_.size());
    for (const auto& e : entries_)
        out.push_back({docs_[e.doc], terms_[e.term], e.value});
    return out;
}

TripletCorpus TripletCorpus::sorted() const {
    auto order = [](const std::vector<std::string>& names) {
        std::vector<std::size_t> perm(names.size());
        std::iota(perm.begin(), perm.end(), 0);
        std::sort(perm.begin(), perm.end(), [&](auto a, auto b) { return names[a] < names[b]; });
        std::vector<std::size_t> rank(names.size());
        for (std::size_t i = 0; i < perm.size(); ++i)
            rank[perm[i]] = i;
        return std::pair{perm, rank};
    };
    const auto [doc_perm, doc_rank] = order(docs_);
    const auto [term_perm, term_rank] = order(terms_);

    TripletCorpus out;
    for (auto i : doc_perm)
        out.docs_.push_back(docs_[i]);
    for (auto i : term_perm)
        out.terms_.push_back(terms_[i]);
    out.entries_ = entries_;
    for (auto& e : out.entries_) {
        e.doc = doc_rank[e.doc];
        e.term = term_rank[e.term];
    }
    std::sort(out.entries_.begin(), out.entries_.end(),
              [](const Entry& a, const Entry& b) { return std::tie(a.doc, a.term) < std::tie(b.doc, b.term); });
    return out;
}

TripletFormat format_from_extension(const std::filesystem::path& path) {
    const auto ext = path.extension().string();
    if (ext == ".csv")
        return TripletFormat::csv;
    if (ext == ".jsonl" || ext == ".json" || ext == ".ndjson")
        return TripletFormat::jsonl;
    throw ValidationError("cannot infer format from '" + path.string() + "'; use csv or jsonl");
}

TripletCorpus read_triplets(std::istream& in, TripletFormat format) {
    std::vector<Triplet> rows;
    std::string line;
    std::size_t line_number = 0;

    if (format == TripletFormat::csv) {
        if (!text::read_line(in, line))
            return {};
        ++line_number;
        const auto header = text::split_csv_line(line, line_number);
        auto column = [&](const char* name) {
            const auto it = std::find(header.begin(), header.end(), name);
            if (it == header.end())
                throw ParseError(std::string("missing column '") + name + "' in header", line_number);
            return static_cast<std::size_t>(it - header.begin());
        };
        const auto doc_col = column("doc");
        const auto term_col = column("term");
        const auto n_col = column("n");
        while (text::read_line(in, line)) {
            ++line_number;
            if (line.empty())
                continue;
            const auto fields = text::split_csv_line(line, line_number);
            if (fields.size() != header.size())
                throw ParseError("expected " + std::to_string(header.size()) + " fields, found " +
                                     std::to_string(fields.size()),
                                 line_number);
            const double value = text::parse_double(fields[n_col], line_number);
            check_value(value, line_number);
            rows.push_back({fields[doc_col], fields[term_col], value});
        }
    } else {
        while (text::read_line(in, line)) {
            ++line_number;
            if (line.find_first_not_of(" \t") == std::string::npos)
                continue;
            nlohmann::json obj;
            try {
                obj = nlohmann::json::parse(line);
            } catch (const nlohmann::json::parse_error& e) {
                throw ParseError(std::string("invalid JSON: ") + e.what(), line_number);
            }
            if (!obj.is_object())
                throw ParseError("expected a JSON object", line_number);
            for (const char* key : {"doc", "term", "n"})
                if (!obj.contains(key))
                    throw ParseError(std::string("missing key '") + key + "'", line_number);
            if (!obj["n"].is_number())
                throw ParseError("key 'n' must be a number", line_number);
            const double value = obj["n"].get<double>();
            check_value(value, line_number);
            rows.push_back({json_id(obj["doc"], "doc", line_number), json_id(obj["term"], "term", line_number),
                            value});
        }
    }
    return TripletCorpus::from_triplets(rows);
}

TripletCorpus load_triplets(const std::filesystem::path& path, TripletFormat format) {
    std::ifstream in(path);
    if (!in)
        throw ValidationError("cannot open '" + path.string() + "'");
    return read_triplets(in, format);
}

void write_triplets(std::ostream& out, const TripletCorpus& corpus) {
    out << "doc,term,n\n";
    for (const auto& e : corpus.entries())
        out << text::csv_field(corpus.docs()[e.doc]) << ',' << text::csv_field(corpus.terms()[e.term]) << ','
            << text::format_double(e.value) << '\n';
}

TripletCorpus log1p_transform(const TripletCorpus& corpus) {
    return corpus.map_values([](double v) { return std::log1p(v); });
}

SparseMatrix::SparseMatrix(Storage values, std::vector<std::string> row_names, std::vector<std::string> col_names)
    : values_(std::move(values)), row_names_(std::move(row_names)), col_names_(std::move(col_names)) {
    if (static_cast<Eigen::Index>(row_names_.size()) != values_.rows() ||
        static_cast<Eigen::Index>(col_names_.size()) != values_.cols())
        throw ValidationError("dimension names do not match matrix shape");
    values_.prune(0.0, 0.0);
    values_.makeCompressed();
}

SparseMatrix SparseMatrix::transpose() const {
    return SparseMatrix(Storage(values_.transpose()), col_names_, row_names_);
}

SparseMatrix build_matrix(const TripletCorpus& corpus, MatrixRows rows) {
    if (corpus.empty())
        throw ValidationError("cannot build a matrix from an empty corpus");
    const bool by_doc = rows == MatrixRows::doc;
    const auto n_rows = static_cast<Eigen::Index>(by_doc ? corpus.docs().size() : corpus.terms().size());
    const auto n_cols = static_cast<Eigen::Index>(by_doc ? corpus.terms().size() : corpus.docs().size());
    std::vector<Eigen::Triplet<double>> cells;
    cells.reserve(corpus.size());
    for (const auto& e : corpus.entries()) {
        const auto r = static_cast<Eigen::Index>(by_doc ? e.doc : e.term);
        const auto c = static_cast<Eigen::Index>(by_doc ? e.term : e.doc);
        cells.emplace_back(r, c, e.value);
    }
    SparseMatrix::Storage storage(n_rows, n_cols);
    storage.setFromTriplets(cells.begin(), cells.end());
    return SparseMatrix(std::move(storage), by_doc ? corpus.docs() : corpus.terms(),
                        by_doc ? corpus.terms() : corpus.docs());
}

TripletCorpus flatten(const SparseMatrix& matrix) {
    std::vector<Triplet> out;
    out.reserve(static_cast<std::size_t>(matrix.values().nonZeros()));
    for (Eigen::Index c = 0; c < matrix.values().outerSize(); ++c)
        for (SparseMatrix::Storage::InnerIterator it(matrix.values(), c); it; ++it)
            out.push_back({matrix.row_names()[static_cast<std::size_t>(it.row())],
                           matrix.col_names()[static_cast<std::size_t>(it.col())], it.value()});
    return TripletCorpus::from_triplets(out);
}

} // namespace vartopic
