#include "deptree/samples.hpp"

#include "deptree/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <numeric>
#include <random>
#include <unordered_set>

namespace deptree {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(trim(line.substr(start)));
            return fields;
        }
        fields.push_back(trim(line.substr(start, comma - start)));
        start = comma + 1;
    }
}

std::optional<double> parse_real(std::string_view field) {
    if (!field.empty() && field.front() == '+') field.remove_prefix(1);
    double value = 0.0;
    const auto* end = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(field.data(), end, value);
    if (field.empty() || ec != std::errc{} || ptr != end || !std::isfinite(value)) {
        return std::nullopt;
    }
    return value;
}

}  // namespace

Dataset Dataset::from_columns(std::vector<std::string> names,
                              std::vector<std::vector<double>> columns) {
    if (names.size() != columns.size()) {
        throw ValidationError("dataset has " + std::to_string(names.size()) + " names but " +
                              std::to_string(columns.size()) + " columns");
    }
    if (names.size() < 2) {
        throw ValidationError("dataset needs at least 2 columns, got " +
                              std::to_string(names.size()));
    }
    std::unordered_set<std::string> seen;
    for (const auto& name : names) {
        if (name.empty()) throw ValidationError("empty column name");
        if (!seen.insert(name).second) {
            throw ValidationError("duplicate column name \"" + name + "\"");
        }
    }
    const std::size_t rows = columns.front().size();
    for (std::size_t j = 0; j < columns.size(); ++j) {
        if (columns[j].size() != rows) {
            throw ValidationError("column \"" + names[j] + "\" has " +
                                  std::to_string(columns[j].size()) + " rows, expected " +
                                  std::to_string(rows));
        }
        for (std::size_t t = 0; t < rows; ++t) {
            if (!std::isfinite(columns[j][t])) {
                throw ValidationError("non-finite value at row " + std::to_string(t + 1) +
                                      ", column \"" + names[j] + "\"");
            }
        }
    }
    if (rows < 2) {
        throw ValidationError("dataset needs at least 2 rows, got " + std::to_string(rows));
    }
    Dataset d;
    d.names_ = std::move(names);
    d.columns_ = std::move(columns);
    d.rows_ = rows;
    return d;
}

std::optional<std::size_t> Dataset::index_of(std::string_view name) const {
    const auto it = std::find(names_.begin(), names_.end(), name);
    if (it == names_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - names_.begin());
}

RankMatrix RankMatrix::from_columns(std::vector<std::vector<Rank>> columns) {
    if (columns.empty()) throw ValidationError("rank matrix has no columns");
    const std::size_t rows = columns.front().size();
    for (std::size_t j = 0; j < columns.size(); ++j) {
        if (columns[j].size() != rows) {
            throw ValidationError("rank columns have different lengths");
        }
        if (!is_rank_permutation(columns[j])) {
            throw ValidationError("rank column " + std::to_string(j) +
                                  " is not a permutation of 1.." + std::to_string(rows));
        }
    }
    RankMatrix m;
    m.columns_ = std::move(columns);
    m.rows_ = rows;
    return m;
}

RankMatrix RankMatrix::select(std::span<const std::size_t> cols) const {
    RankMatrix m;
    m.rows_ = rows_;
    m.columns_.reserve(cols.size());
    for (const auto j : cols) m.columns_.push_back(columns_.at(j));
    return m;
}

bool is_rank_permutation(std::span<const Rank> ranks) {
    std::vector<bool> seen(ranks.size() + 1, false);
    for (const auto r : ranks) {
        if (r < 1 || r > ranks.size() || seen[r]) return false;
        seen[r] = true;
    }
    return true;
}

Dataset load_dataset(std::istream& in) {
    std::string line;
    std::vector<std::string> names;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        for (auto field : split_fields(line)) names.emplace_back(field);
        break;
    }
    if (names.empty()) throw ValidationError("input has no header row");

    std::vector<std::vector<double>> columns(names.size());
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        ++row;
        const auto fields = split_fields(line);
        if (fields.size() != names.size()) {
            throw ValidationError("row " + std::to_string(row) + " has " +
                                  std::to_string(fields.size()) + " fields, expected " +
                                  std::to_string(names.size()));
        }
        for (std::size_t j = 0; j < fields.size(); ++j) {
            const auto value = parse_real(fields[j]);
            if (!value) {
                throw ValidationError("row " + std::to_string(row) + ", column \"" + names[j] +
                                      "\": cannot parse '" + std::string(fields[j]) +
                                      "' as a finite number");
            }
            columns[j].push_back(*value);
        }
    }
    return Dataset::from_columns(std::move(names), std::move(columns));
}

Dataset load_dataset_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open \"" + path + "\"");
    return load_dataset(in);
}

void write_dataset(const Dataset& data, std::ostream& out) {
    for (std::size_t j = 0; j < data.cols(); ++j) {
        out << (j ? "," : "") << data.names()[j];
    }
    out << '\n';
    char buffer[64];
    for (std::size_t t = 0; t < data.rows(); ++t) {
        for (std::size_t j = 0; j < data.cols(); ++j) {
            const auto [end, ec] = std::to_chars(buffer, buffer + sizeof buffer, data.at(t, j));
            if (j) out << ',';
            out.write(buffer, end - buffer);
        }
        out << '\n';
    }
}

std::vector<Rank> rank_column(std::span<const double> values, const RankOptions& options,
                              std::uint64_t stream) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});

    if (options.ties == TieBreak::random) {
        std::vector<std::size_t> key(n);
        std::iota(key.begin(), key.end(), std::size_t{0});
        std::seed_seq seq{static_cast<std::uint32_t>(options.seed),
                          static_cast<std::uint32_t>(options.seed >> 32),
                          static_cast<std::uint32_t>(stream),
                          static_cast<std::uint32_t>(stream >> 32)};
        std::mt19937_64 rng(seq);
        std::shuffle(key.begin(), key.end(), rng);
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (values[a] != values[b]) return values[a] < values[b];
            return key[a] < key[b];
        });
    } else {
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    }

    std::vector<Rank> ranks(n);
    for (std::size_t pos = 0; pos < n; ++pos) ranks[order[pos]] = static_cast<Rank>(pos + 1);
    return ranks;
}

RankMatrix rank_transform(const Dataset& data, const RankOptions& options) {
    std::vector<std::vector<Rank>> columns;
    columns.reserve(data.cols());
    for (std::size_t j = 0; j < data.cols(); ++j) {
        columns.push_back(rank_column(data.column(j), options, j));
    }
    return RankMatrix::from_columns(std::move(columns));
}

}  // namespace deptree
