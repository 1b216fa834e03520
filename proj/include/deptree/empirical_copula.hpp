#pragma once

/**
 * @file empirical_copula.hpp
 * @brief Rank-based empirical copula and its lattice cell masses.
 *
 * For ranks r_n^t (t = 1..T, n = 1..N) the empirical copula is
 *
 *     C(u) = (1/T) * #{ t : r_n^t <= floor(u_n * T) for every n }.
 *
 * On a lattice of order K the grid value at (t_1, ..., t_N) is C(t_1/K, ..., t_N/K).
 * A sample with rank r falls in cell ceil(r * K / T) along each coordinate, so
 * lattice cells are half-open and binning agrees exactly with differencing the
 * cdf grid.
 *
 * Grids hold integer sample counts; values are counts / T. All equality
 * checks between construction routes are therefore exact.
 */

#include "deptree/samples.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace deptree {

/// Grids larger than this many cells are rejected.
inline constexpr std::size_t kMaxGridCells = 100'000'000;

class CopulaGrid {
public:
    enum class Kind {
        cdf,   ///< indices t_n in 0..K
        mass,  ///< indices t_n in 1..K
    };

    CopulaGrid(Kind kind, std::size_t order, std::size_t dim, std::size_t samples,
               std::vector<std::uint64_t> counts);

    Kind kind() const noexcept { return kind_; }
    std::size_t order() const noexcept { return order_; }
    std::size_t dim() const noexcept { return dim_; }
    std::size_t samples() const noexcept { return samples_; }
    /// Number of index values per coordinate: K + 1 for cdf, K for mass.
    std::size_t extent() const noexcept { return kind_ == Kind::cdf ? order_ + 1 : order_; }
    std::size_t size() const noexcept { return counts_.size(); }

    /// Row-major flat storage; the last coordinate varies fastest.
    const std::vector<std::uint64_t>& counts() const noexcept { return counts_; }

    std::uint64_t count(std::span<const std::size_t> index) const;
    double value(std::span<const std::size_t> index) const;
    double value_at(std::size_t flat) const {
        return static_cast<double>(counts_.at(flat)) / static_cast<double>(samples_);
    }

    std::size_t flat_index(std::span<const std::size_t> index) const;
    /// Inverse of flat_index, in the grid's own index convention.
    std::vector<std::size_t> unflatten(std::size_t flat) const;

private:
    Kind kind_;
    std::size_t order_;
    std::size_t dim_;
    std::size_t samples_;
    std::vector<std::uint64_t> counts_;
};

/// Lattice cell (1..K) containing rank r of T.
constexpr std::size_t lattice_cell(Rank r, std::size_t order, std::size_t samples) {
    return (static_cast<std::size_t>(r) * order + samples - 1) / samples;
}

/// Default lattice order: the largest K with at least 20 expected samples
/// per bivariate cell, K = floor(sqrt(T / 20)), clamped to [2, T].
std::size_t default_lattice_order(std::size_t samples);

/// C(u) by a single pass over the samples, O(T * N).
double empirical_copula_eval(const RankMatrix& ranks, std::span<const double> u);

/// Cdf grid on the order-K lattice, built by binning then prefix sums.
CopulaGrid empirical_copula_grid(const RankMatrix& ranks, std::size_t order);

/// Cell masses on the order-K lattice by direct binning, O(T * N + K^N).
CopulaGrid empirical_copula_mass(const RankMatrix& ranks, std::size_t order);

/// N-dimensional backward difference of a cdf grid: the mass of each cell.
/// Per cell this is sum over i in {0,1}^N of (-1)^(sum i) * C(t - i), which is
/// nonnegative for any grounded N-increasing grid.
CopulaGrid difference(const CopulaGrid& cdf);

/// Mass of one cell (indices 1..K) from 2^N evaluations of the empirical
/// copula, O(T * N * 2^N). Useful when only a few cells are needed.
double empirical_copula_cell(const RankMatrix& ranks, std::span<const std::size_t> cell,
                             std::size_t order);

}  // namespace deptree
