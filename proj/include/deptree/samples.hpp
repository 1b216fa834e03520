#pragma once

/**
 * @file samples.hpp
 * @brief Dataset ingestion and per-column rank transformation.
 *
 * Every copula computation in this library consumes ranks only. A Dataset
 * holds validated raw samples (T rows, N named columns); rank_transform
 * turns each column into a permutation of 1..T.
 */

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace deptree {

using Rank = std::uint32_t;

/// T x N matrix of finite reals with unique, nonempty column names. T >= 2, N >= 2.
class Dataset {
public:
    /// Validates and takes ownership. Columns must share one length.
    static Dataset from_columns(std::vector<std::string> names,
                                std::vector<std::vector<double>> columns);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return names_.size(); }
    const std::vector<std::string>& names() const noexcept { return names_; }
    std::span<const double> column(std::size_t j) const { return columns_.at(j); }
    double at(std::size_t row, std::size_t col) const { return columns_.at(col).at(row); }
    std::optional<std::size_t> index_of(std::string_view name) const;

private:
    Dataset() = default;

    std::vector<std::string> names_;
    std::vector<std::vector<double>> columns_;
    std::size_t rows_ = 0;
};

/// Per-column ranks; each column is a permutation of 1..T.
class RankMatrix {
public:
    /// Throws ValidationError unless every column is a permutation of 1..T.
    static RankMatrix from_columns(std::vector<std::vector<Rank>> columns);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return columns_.size(); }
    std::span<const Rank> column(std::size_t j) const { return columns_.at(j); }
    Rank at(std::size_t row, std::size_t col) const { return columns_.at(col).at(row); }

    /// Copy of the listed columns, in the given order.
    RankMatrix select(std::span<const std::size_t> cols) const;

private:
    RankMatrix() = default;

    std::vector<std::vector<Rank>> columns_;
    std::size_t rows_ = 0;
};

/// How equal values within a column are ordered.
enum class TieBreak {
    /// Ties ordered by a seeded random permutation, independent per column.
    random,
    /// Ties ordered by ascending row index.
    stable,
};

struct RankOptions {
    TieBreak ties = TieBreak::random;
    std::uint64_t seed = 0;
};

/// Parses comma-separated text with one header row. Rejects non-numeric
/// cells (reporting row and column), ragged rows, duplicate names, T < 2, N < 2.
Dataset load_dataset(std::istream& in);
Dataset load_dataset_file(const std::string& path);

/// Writes the header and rows; values use the shortest round-trip form, so
/// load_dataset reproduces them exactly.
void write_dataset(const Dataset& data, std::ostream& out);

/// Ordinal ranks of one column: rank 1 is the smallest value. `stream`
/// selects the random tie-break stream so distinct columns get independent
/// orderings under TieBreak::random.
std::vector<Rank> rank_column(std::span<const double> values, const RankOptions& options = {},
                              std::uint64_t stream = 0);

RankMatrix rank_transform(const Dataset& data, const RankOptions& options = {});

/// True when `ranks` is a permutation of 1..ranks.size().
bool is_rank_permutation(std::span<const Rank> ranks);

}  // namespace deptree
