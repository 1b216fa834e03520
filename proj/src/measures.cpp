#include "deptree/measures.hpp"

#include "deptree/empirical_copula.hpp"
#include "deptree/error.hpp"
#include "deptree/normal.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <numbers>
#include <numeric>
#include <string>
#include <thread>
#include <utility>

namespace deptree {

namespace {

__extension__ using Wide = __int128;

void check_rank_pair(std::span<const Rank> x, std::span<const Rank> y) {
    if (x.size() != y.size()) {
        throw ValidationError("rank columns differ in length: " + std::to_string(x.size()) +
                              " vs " + std::to_string(y.size()));
    }
    if (x.size() < 2) throw ValidationError("need at least 2 samples");
    if (!is_rank_permutation(x) || !is_rank_permutation(y)) {
        throw ValidationError("rank column is not a permutation of 1..T");
    }
}

void check_order(std::size_t order, std::size_t samples) {
    if (order < 2 || order > samples) {
        throw ValidationError("lattice order " + std::to_string(order) + " outside [2, " +
                              std::to_string(samples) + "]");
    }
}

// Runs task(i) for i in [0, count) on a few threads. Rethrows the exception
// of the lowest failing index so errors are deterministic too.
template <class Task>
void parallel_for(std::size_t count, Task task) {
    std::vector<std::exception_ptr> errors(count);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                task(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const std::size_t threads =
        std::min<std::size_t>(count, std::max(1U, std::thread::hardware_concurrency()));
    {
        std::vector<std::jthread> pool;
        for (std::size_t k = 1; k < threads; ++k) pool.emplace_back(worker);
        worker();
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

std::vector<double> densities_at_samples(const KernelDensity& kde) {
    std::vector<double> out;
    out.reserve(kde.samples().size());
    for (const double x : kde.samples()) out.push_back(kde(x));
    return out;
}

double kde_mi_from(std::span<const Rank> rx, std::span<const Rank> ry, std::span<const double> px,
                   std::span<const double> py, std::size_t order, KdeEstimator estimator) {
    const std::size_t samples = rx.size();
    const auto pair = RankMatrix::from_columns({{rx.begin(), rx.end()}, {ry.begin(), ry.end()}});
    const auto mass = empirical_copula_mass(pair, order);
    const double cells = static_cast<double>(order * order);

    auto c_log_c = [&](std::size_t i, std::size_t j) {
        const std::size_t index[] = {i, j};
        const double c = mass.value(index) * cells;
        return c > 0.0 ? c * std::log(c) : 0.0;
    };

    if (estimator == KdeEstimator::literal) {
        double total = 0.0;
        for (std::size_t t = 0; t < samples; ++t) {
            total += px[t] * py[t] *
                     c_log_c(lattice_cell(rx[t], order, samples), lattice_cell(ry[t], order, samples));
        }
        return total;
    }

    // Over all (x_s, y_t) combinations the summand depends on s only through
    // its cell, so the double sum collapses onto per-cell weight totals.
    std::vector<double> wx(order + 1, 0.0);
    std::vector<double> wy(order + 1, 0.0);
    const auto n = static_cast<double>(samples);
    for (std::size_t t = 0; t < samples; ++t) {
        wx[lattice_cell(rx[t], order, samples)] += px[t] / (n * px[t]);
        wy[lattice_cell(ry[t], order, samples)] += py[t] / (n * py[t]);
    }
    double total = 0.0;
    for (std::size_t i = 1; i <= order; ++i) {
        for (std::size_t j = 1; j <= order; ++j) total += wx[i] * wy[j] * c_log_c(i, j);
    }
    return total;
}

}  // namespace

std::string_view measure_tag(Measure m) {
    switch (m) {
        case Measure::rho_abs: return "rho_abs";
        case Measure::mi_cell: return "mi_cell";
        case Measure::mi_kde: return "mi_kde";
    }
    throw InvariantError("unknown measure");
}

Measure parse_measure(std::string_view text) {
    if (text == "rho" || text == "rho_abs") return Measure::rho_abs;
    if (text == "mi-cell" || text == "mi_cell") return Measure::mi_cell;
    if (text == "mi-kde" || text == "mi_kde") return Measure::mi_kde;
    throw ValidationError("unknown measure \"" + std::string(text) + "\"");
}

double spearman_rho(std::span<const Rank> x, std::span<const Rank> y) {
    check_rank_pair(x, y);
    // sum_{t1,t2} C(t1/T, t2/T) = (1/T) sum_t (T + 1 - x_t)(T + 1 - y_t) and
    // sum_{t1,t2} t1 t2 / T^2 = (T + 1)^2 / 4, so the lattice double sum
    // reduces to one pass. Integer arithmetic keeps it exact until the final
    // division.
    const auto n = static_cast<Wide>(x.size());
    Wide s = 0;
    for (std::size_t t = 0; t < x.size(); ++t) {
        s += (n + 1 - x[t]) * (n + 1 - y[t]);
    }
    const Wide numerator = 3 * (4 * s - n * (n + 1) * (n + 1));
    const Wide denominator = n * (n * n - 1);
    return static_cast<double>(static_cast<long double>(numerator) /
                               static_cast<long double>(denominator));
}

double mutual_info_cell(std::span<const Rank> x, std::span<const Rank> y, std::size_t order) {
    check_rank_pair(x, y);
    check_order(order, x.size());
    const auto pair = RankMatrix::from_columns({{x.begin(), x.end()}, {y.begin(), y.end()}});
    const auto mass = empirical_copula_mass(pair, order);

    const auto& counts = mass.counts();
    std::vector<std::uint64_t> row(order, 0);
    std::vector<std::uint64_t> col(order, 0);
    for (std::size_t i = 0; i < order; ++i) {
        for (std::size_t j = 0; j < order; ++j) {
            row[i] += counts[i * order + j];
            col[j] += counts[i * order + j];
        }
    }

    // Each term depends only on (n_ij, n_i * n_j), and summing the sorted
    // terms makes the result independent of argument order.
    const auto n = static_cast<double>(x.size());
    std::vector<double> terms;
    for (std::size_t i = 0; i < order; ++i) {
        for (std::size_t j = 0; j < order; ++j) {
            const auto c = static_cast<double>(counts[i * order + j]);
            if (c == 0.0) continue;
            const double expected = static_cast<double>(row[i]) * static_cast<double>(col[j]);
            terms.push_back(c / n * std::log(c * n / expected));
        }
    }
    std::sort(terms.begin(), terms.end());
    const double total = std::accumulate(terms.begin(), terms.end(), 0.0);
    return std::max(total, 0.0);
}

KernelDensity::KernelDensity(std::vector<double> samples)
    : samples_(std::move(samples)), bandwidth_(silverman_bandwidth(samples_)) {}

KernelDensity::KernelDensity(std::vector<double> samples, double bandwidth)
    : samples_(std::move(samples)), bandwidth_(bandwidth) {
    if (samples_.empty()) throw ValidationError("kernel density needs samples");
    if (!(bandwidth_ > 0.0) || !std::isfinite(bandwidth_)) {
        throw ValidationError("kernel bandwidth must be positive");
    }
}

double KernelDensity::silverman_bandwidth(std::span<const double> samples) {
    if (samples.size() < 2) throw ValidationError("bandwidth rule needs at least 2 samples");
    const auto n = static_cast<double>(samples.size());
    const double mean = std::accumulate(samples.begin(), samples.end(), 0.0) / n;
    double ss = 0.0;
    for (const double v : samples) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / (n - 1.0));
    if (!(sd > 0.0)) throw ValidationError("degenerate column: zero variance gives zero bandwidth");
    return 1.06 * sd * std::pow(n, -0.2);
}

double KernelDensity::operator()(double x) const {
    double total = 0.0;
    for (const double s : samples_) total += normal_pdf((x - s) / bandwidth_);
    return total / (static_cast<double>(samples_.size()) * bandwidth_);
}

double mutual_info_kde(std::span<const double> x, std::span<const double> y,
                       std::span<const Rank> rx, std::span<const Rank> ry, std::size_t order,
                       KdeEstimator estimator) {
    if (x.size() != y.size() || rx.size() != x.size() || ry.size() != y.size()) {
        throw ValidationError("kernel MI inputs differ in length");
    }
    if (x.size() < 10) throw ValidationError("kernel MI needs at least 10 samples");
    check_rank_pair(rx, ry);
    check_order(order, x.size());
    const KernelDensity kx({x.begin(), x.end()});
    const KernelDensity ky({y.begin(), y.end()});
    return kde_mi_from(rx, ry, densities_at_samples(kx), densities_at_samples(ky), order, estimator);
}

double mutual_info_kde(std::span<const double> x, std::span<const double> y, std::size_t order,
                       KdeEstimator estimator, const RankOptions& options) {
    const auto rx = rank_column(x, options, 0);
    const auto ry = rank_column(y, options, 1);
    return mutual_info_kde(x, y, rx, ry, order, estimator);
}

WeightMatrix::WeightMatrix(std::size_t n, std::vector<double> weights, Measure measure,
                           std::size_t lattice_order, std::vector<double> signed_values)
    : n_(n),
      weights_(std::move(weights)),
      signed_(std::move(signed_values)),
      measure_(measure),
      lattice_order_(lattice_order) {
    if (weights_.size() != n_ * n_) throw ValidationError("weight matrix must be N x N");
    if (signed_.empty()) signed_ = weights_;
    if (signed_.size() != weights_.size()) {
        throw ValidationError("signed values must match the weight matrix shape");
    }
    for (std::size_t i = 0; i < n_; ++i) {
        if (weights_[i * n_ + i] != 0.0) {
            throw ValidationError("weight matrix diagonal must be zero");
        }
        for (std::size_t j = 0; j < n_; ++j) {
            const double w = weights_[i * n_ + j];
            if (!std::isfinite(w)) throw ValidationError("weight matrix has a non-finite entry");
            if (w < 0.0) {
                throw ValidationError("weight (" + std::to_string(i) + ", " + std::to_string(j) +
                                      ") is negative");
            }
            if (std::abs(w - weights_[j * n_ + i]) > 1e-12) {
                throw ValidationError("weight matrix is not symmetric at (" + std::to_string(i) +
                                      ", " + std::to_string(j) + ")");
            }
        }
    }
}

double WeightMatrix::pair_total() const {
    double total = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t j = i + 1; j < n_; ++j) total += weights_[i * n_ + j];
    }
    return total;
}

std::size_t resolve_lattice_order(Measure measure, std::size_t requested, std::size_t samples) {
    if (measure == Measure::rho_abs) return samples;
    return requested == 0 ? default_lattice_order(samples) : requested;
}

WeightMatrix weight_matrix(const Dataset& data, Measure measure, std::size_t order,
                           const RankOptions& options) {
    const std::size_t n = data.cols();
    const std::size_t samples = data.rows();
    if (measure != Measure::rho_abs || order != 0) {
        check_order(order == 0 ? default_lattice_order(samples) : order, samples);
    }
    const std::size_t lattice = resolve_lattice_order(measure, order, samples);
    const auto ranks = rank_transform(data, options);

    std::vector<double> column_densities;  // mi_kde only: p(x_t) per column
    if (measure == Measure::mi_kde) {
        if (samples < 10) throw ValidationError("kernel MI needs at least 10 samples");
        column_densities.resize(n * samples);
        parallel_for(n, [&](std::size_t j) {
            const auto col = data.column(j);
            const KernelDensity kde({col.begin(), col.end()});
            const auto p = densities_at_samples(kde);
            std::copy(p.begin(), p.end(), column_densities.begin() + static_cast<std::ptrdiff_t>(j * samples));
        });
    }

    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
    }

    std::vector<double> weights(n * n, 0.0);
    std::vector<double> signed_values(n * n, 0.0);
    parallel_for(pairs.size(), [&](std::size_t k) {
        const auto [i, j] = pairs[k];
        double value = 0.0;
        switch (measure) {
            case Measure::rho_abs:
                value = spearman_rho(ranks.column(i), ranks.column(j));
                break;
            case Measure::mi_cell:
                value = mutual_info_cell(ranks.column(i), ranks.column(j), lattice);
                break;
            case Measure::mi_kde: {
                const std::span<const double> all(column_densities);
                value = kde_mi_from(ranks.column(i), ranks.column(j), all.subspan(i * samples, samples),
                                    all.subspan(j * samples, samples), lattice, KdeEstimator::weighted);
                break;
            }
        }
        // The kernel estimator can dip just below zero near independence.
        const double weight = measure == Measure::rho_abs ? std::abs(value) : std::max(value, 0.0);
        weights[i * n + j] = weights[j * n + i] = weight;
        signed_values[i * n + j] = signed_values[j * n + i] = value;
    });
    return WeightMatrix(n, std::move(weights), measure, lattice, std::move(signed_values));
}

}  // namespace deptree
