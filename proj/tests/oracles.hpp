#pragma once

// Brute-force reference computations for the test suites. Nothing here calls
// into the library's estimators.

#include "deptree/samples.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <span>
#include <vector>

namespace deptree::oracle {

using RankColumns = std::vector<std::vector<Rank>>;

// Smallest c with c * T >= r * K, found by counting up.
inline std::size_t cell_by_search(Rank r, std::size_t order, std::size_t samples) {
    std::size_t c = 1;
    while (c * samples < static_cast<std::size_t>(r) * order) ++c;
    return c;
}

// Fraction of rows with every rank <= bound[n].
inline double count_below(const RankColumns& ranks, std::span<const std::size_t> bound) {
    const std::size_t rows = ranks.front().size();
    std::size_t hits = 0;
    for (std::size_t t = 0; t < rows; ++t) {
        bool all = true;
        for (std::size_t n = 0; n < ranks.size(); ++n) all = all && ranks[n][t] <= bound[n];
        hits += all;
    }
    return static_cast<double>(hits) / static_cast<double>(rows);
}

// Row-major cell counts (cells 1..K, stored 0-based) by direct binning.
inline std::vector<std::uint64_t> binned_counts(const RankColumns& ranks, std::size_t order) {
    const std::size_t dims = ranks.size();
    const std::size_t rows = ranks.front().size();
    std::size_t cells = 1;
    for (std::size_t n = 0; n < dims; ++n) cells *= order;
    std::vector<std::uint64_t> counts(cells, 0);
    for (std::size_t t = 0; t < rows; ++t) {
        std::size_t flat = 0;
        for (std::size_t n = 0; n < dims; ++n) {
            flat = flat * order + (cell_by_search(ranks[n][t], order, rows) - 1);
        }
        ++counts[flat];
    }
    return counts;
}

// Spearman's rho as the literal lattice double sum
// 12/(T^2-1) * sum_{t1,t2} [C(t1/T, t2/T) - t1 t2 / T^2], C by counting.
inline double spearman_double_sum(std::span<const Rank> x, std::span<const Rank> y) {
    const std::size_t n = x.size();
    const auto T = static_cast<double>(n);
    double total = 0.0;
    for (std::size_t t1 = 1; t1 <= n; ++t1) {
        for (std::size_t t2 = 1; t2 <= n; ++t2) {
            std::size_t hits = 0;
            for (std::size_t s = 0; s < n; ++s) hits += (x[s] <= t1 && y[s] <= t2);
            total += static_cast<double>(hits) / T -
                     static_cast<double>(t1) * static_cast<double>(t2) / (T * T);
        }
    }
    return 12.0 / (T * T - 1.0) * total;
}

inline double pearson(std::span<const double> x, std::span<const double> y) {
    const auto n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    return sxy / std::sqrt(sxx * syy);
}

// Best spanning-tree weight over all n^(n-2) labelled trees (Pruefer codes).
inline double best_spanning_tree_weight(std::size_t n, const std::vector<double>& w) {
    if (n == 2) return w[1];
    std::vector<std::size_t> code(n - 2, 0);
    double best = -std::numeric_limits<double>::infinity();
    while (true) {
        std::vector<std::size_t> degree(n, 1);
        for (const auto c : code) ++degree[c];
        double total = 0.0;
        for (const auto c : code) {
            std::size_t leaf = 0;
            while (degree[leaf] != 1) ++leaf;
            total += w[leaf * n + c];
            --degree[leaf];
            --degree[c];
        }
        std::size_t a = n, b = n;
        for (std::size_t v = 0; v < n; ++v) {
            if (degree[v] == 1) (a == n ? a : b) = v;
        }
        total += w[a * n + b];
        best = std::max(best, total);

        std::size_t pos = 0;
        while (pos < code.size() && ++code[pos] == n) code[pos++] = 0;
        if (pos == code.size()) break;
    }
    return best;
}

inline std::vector<Rank> random_permutation(std::size_t n, std::mt19937_64& rng) {
    std::vector<Rank> p(n);
    std::iota(p.begin(), p.end(), Rank{1});
    std::shuffle(p.begin(), p.end(), rng);
    return p;
}

}  // namespace deptree::oracle
