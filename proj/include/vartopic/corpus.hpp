#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace vartopic {

struct Triplet {
    std::string doc;
    std::string term;
    double value = 0.0;

    friend bool operator==(const Triplet&, const Triplet&) = default;
};

/**
 * Long-format document-term data.
 *
 * Documents and terms are indexed in first-appearance order; each
 * (doc, term) pair occurs at most once and every value is finite and
 * non-negative. Immutable once built.
 */
class TripletCorpus {
  public:
    struct Entry {
        std::size_t doc;
        std::size_t term;
        double value;
    };

    TripletCorpus() = default;

    /// Sums duplicate pairs. Throws ValidationError on negative or non-finite values.
    static TripletCorpus from_triplets(std::span<const Triplet> triplets);

    const std::vector<std::string>& docs() const noexcept { return docs_; }
    const std::vector<std::string>& terms() const noexcept { return terms_; }
    const std::vector<Entry>& entries() const noexcept { return entries_; }

    std::size_t size() const noexcept { return entries_.size(); }
    bool empty() const noexcept { return entries_.empty(); }
    double total() const noexcept;

    std::vector<Triplet> triplets() const;

    /// Same data with doc and term indices in lexicographic order.
    TripletCorpus sorted() const;

    /// Same pattern and ordering, values replaced by `f(value)`.
    template <typename F> TripletCorpus map_values(F&& f) const {
        TripletCorpus out = *this;
        for (auto& e : out.entries_)
            e.value = f(e.value);
        out.validate();
        return out;
    }

  private:
    void validate() const;

    std::vector<std::string> docs_;
    std::vector<std::string> terms_;
    std::vector<Entry> entries_;
};

enum class TripletFormat { csv, jsonl };

/// csv for ".csv", jsonl for ".jsonl"/".json"; anything else is a ValidationError.
TripletFormat format_from_extension(const std::filesystem::path& path);

/// Columns/keys `doc`, `term`, `n`. CSV requires a header row.
TripletCorpus read_triplets(std::istream& in, TripletFormat format);
TripletCorpus load_triplets(const std::filesystem::path& path, TripletFormat format);
void write_triplets(std::ostream& out, const TripletCorpus& corpus);

/// v -> ln(1 + v). Zeros stay zero, so the sparsity pattern is unchanged.
TripletCorpus log1p_transform(const TripletCorpus& corpus);

/// A compressed sparse matrix with named rows and columns. Stored zeros are dropped.
class SparseMatrix {
  public:
    using Storage = Eigen::SparseMatrix<double, Eigen::ColMajor>;

    SparseMatrix(Storage values, std::vector<std::string> row_names, std::vector<std::string> col_names);

    Eigen::Index rows() const noexcept { return values_.rows(); }
    Eigen::Index cols() const noexcept { return values_.cols(); }
    const Storage& values() const noexcept { return values_; }
    const std::vector<std::string>& row_names() const noexcept { return row_names_; }
    const std::vector<std::string>& col_names() const noexcept { return col_names_; }

    Eigen::MatrixXd to_dense() const { return Eigen::MatrixXd(values_); }
    SparseMatrix transpose() const;

  private:
    Storage values_;
    std::vector<std::string> row_names_;
    std::vector<std::string> col_names_;
};

enum class MatrixRows { doc, term };

SparseMatrix build_matrix(const TripletCorpus& corpus, MatrixRows rows = MatrixRows::doc);

/// Inverse of build_matrix (doc rows): nonzero cells as a corpus, column-major order.
TripletCorpus flatten(const SparseMatrix& matrix);

} // namespace vartopic
