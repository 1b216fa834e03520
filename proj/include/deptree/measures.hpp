#pragma once

/**
 * @file measures.hpp
 * @brief Copula-based pairwise dependence measures.
 *
 * Spearman's rho is the lattice sum of C(t1/T, t2/T) - t1*t2/T^2 over the
 * order-T lattice, scaled by 12/(T^2 - 1). Mutual information is the
 * plug-in divergence of the bivariate cell-mass grid from the product of
 * its margins. The kernel variant combines lattice cell densities with
 * Gaussian-kernel marginal densities.
 *
 * All quantities are in nats.
 */

#include "deptree/samples.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace deptree {

enum class Measure {
    rho_abs,  ///< |Spearman's rho|
    mi_cell,  ///< plug-in mutual information of the cell-mass grid
    mi_kde,   ///< kernel-margin mutual information
};

/// "rho_abs", "mi_cell" or "mi_kde".
std::string_view measure_tag(Measure m);
/// Accepts the tags above and the CLI spellings "rho", "mi-cell", "mi-kde".
Measure parse_measure(std::string_view text);

/// Spearman's rho of two rank columns. O(T).
double spearman_rho(std::span<const Rank> x, std::span<const Rank> y);

/// Plug-in mutual information of the order-K cell masses, 2 <= K <= T.
/// Exactly symmetric in its arguments and never negative.
double mutual_info_cell(std::span<const Rank> x, std::span<const Rank> y, std::size_t order);

/// Gaussian kernel density estimate.
class KernelDensity {
public:
    /// Bandwidth from silverman_bandwidth.
    explicit KernelDensity(std::vector<double> samples);
    KernelDensity(std::vector<double> samples, double bandwidth);

    /// 1.06 * sd * T^(-1/5), sd with the n-1 denominator. Throws
    /// ValidationError for fewer than two samples or zero spread.
    static double silverman_bandwidth(std::span<const double> samples);

    double bandwidth() const noexcept { return bandwidth_; }
    std::span<const double> samples() const noexcept { return samples_; }
    double operator()(double x) const;

private:
    std::vector<double> samples_;
    double bandwidth_;
};

enum class KdeEstimator {
    /// Sum over all (x_s, y_t) sample combinations of
    /// p(x_s) p(y_t) c ln c, each weighted by 1 / (T p(x_s)) * 1 / (T p(y_t)).
    weighted,
    /// Sum over the observed pairs of p(x_t) p(y_t) c ln c, no weights.
    literal,
};

/// Kernel-margin mutual information, T >= 10, 2 <= K <= T. The lattice
/// cell density c is cell mass * K^2; empty cells contribute nothing.
/// Ranks come from rank_column with streams 0 and 1.
double mutual_info_kde(std::span<const double> x, std::span<const double> y, std::size_t order,
                       KdeEstimator estimator = KdeEstimator::weighted,
                       const RankOptions& options = {});

/// Same, with ranks supplied by the caller.
double mutual_info_kde(std::span<const double> x, std::span<const double> y,
                       std::span<const Rank> rx, std::span<const Rank> ry, std::size_t order,
                       KdeEstimator estimator = KdeEstimator::weighted);

/// Symmetric N x N pairwise weights with zero diagonal and nonnegative
/// entries. `signed_value` keeps the signed rho for rho_abs and equals the
/// weight otherwise.
class WeightMatrix {
public:
    /// Row-major weights. Throws ValidationError unless square, finite,
    /// symmetric within 1e-12, zero on the diagonal and nonnegative.
    WeightMatrix(std::size_t n, std::vector<double> weights, Measure measure = Measure::mi_cell,
                 std::size_t lattice_order = 0, std::vector<double> signed_values = {});

    std::size_t size() const noexcept { return n_; }
    Measure measure() const noexcept { return measure_; }
    std::size_t lattice_order() const noexcept { return lattice_order_; }
    double operator()(std::size_t i, std::size_t j) const { return weights_.at(i * n_ + j); }
    double signed_value(std::size_t i, std::size_t j) const { return signed_.at(i * n_ + j); }
    /// Sum over unordered pairs i < j.
    double pair_total() const;

private:
    std::size_t n_;
    std::vector<double> weights_;
    std::vector<double> signed_;
    Measure measure_;
    std::size_t lattice_order_;
};

/// The lattice order a measure actually uses: T for rho_abs, otherwise
/// `requested` or default_lattice_order(T) when requested is 0.
std::size_t resolve_lattice_order(Measure measure, std::size_t requested, std::size_t samples);

/// All N(N-1)/2 pairwise measures. Pairs are evaluated concurrently; the
/// result does not depend on evaluation order.
WeightMatrix weight_matrix(const Dataset& data, Measure measure, std::size_t order = 0,
                           const RankOptions& options = {});

}  // namespace deptree
