#include "deptree/empirical_copula.hpp"

#include "deptree/error.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace deptree {

namespace {

std::size_t checked_cells(std::size_t extent, std::size_t dim) {
    std::size_t cells = 1;
    for (std::size_t n = 0; n < dim; ++n) {
        if (cells > kMaxGridCells / extent) {
            throw ValidationError("lattice grid with extent " + std::to_string(extent) +
                                  " in " + std::to_string(dim) + " dimensions exceeds " +
                                  std::to_string(kMaxGridCells) + " cells");
        }
        cells *= extent;
    }
    return cells;
}

void check_order(const RankMatrix& ranks, std::size_t order) {
    if (order < 1 || order > ranks.rows()) {
        throw ValidationError("lattice order " + std::to_string(order) +
                              " outside [1, " + std::to_string(ranks.rows()) + "]");
    }
}

// Fraction of samples with r_n <= bound_n for all n.
double fraction_below(const RankMatrix& ranks, std::span<const std::size_t> bounds) {
    const std::size_t dims = ranks.cols();
    std::size_t hits = 0;
    for (std::size_t t = 0; t < ranks.rows(); ++t) {
        std::size_t n = 0;
        while (n < dims && ranks.at(t, n) <= bounds[n]) ++n;
        if (n == dims) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(ranks.rows());
}

std::vector<std::size_t> strides(std::size_t extent, std::size_t dim) {
    std::vector<std::size_t> s(dim, 1);
    for (std::size_t n = dim; n-- > 1;) s[n - 1] = s[n] * extent;
    return s;
}

}  // namespace

CopulaGrid::CopulaGrid(Kind kind, std::size_t order, std::size_t dim, std::size_t samples,
                       std::vector<std::uint64_t> counts)
    : kind_(kind), order_(order), dim_(dim), samples_(samples), counts_(std::move(counts)) {
    if (order_ < 1 || dim_ < 1 || samples_ < 1) {
        throw ValidationError("copula grid needs order, dimension and sample count >= 1");
    }
    if (counts_.size() != checked_cells(extent(), dim_)) {
        throw ValidationError("copula grid storage does not match its shape");
    }
}

std::size_t CopulaGrid::flat_index(std::span<const std::size_t> index) const {
    if (index.size() != dim_) throw ValidationError("grid index has wrong dimension");
    const std::size_t base = kind_ == Kind::cdf ? 0 : 1;
    std::size_t flat = 0;
    for (const auto t : index) {
        if (t < base || t > order_) {
            throw ValidationError("grid index " + std::to_string(t) + " out of range");
        }
        flat = flat * extent() + (t - base);
    }
    return flat;
}

std::vector<std::size_t> CopulaGrid::unflatten(std::size_t flat) const {
    const std::size_t base = kind_ == Kind::cdf ? 0 : 1;
    std::vector<std::size_t> index(dim_);
    for (std::size_t n = dim_; n-- > 0;) {
        index[n] = flat % extent() + base;
        flat /= extent();
    }
    return index;
}

std::uint64_t CopulaGrid::count(std::span<const std::size_t> index) const {
    return counts_[flat_index(index)];
}

double CopulaGrid::value(std::span<const std::size_t> index) const {
    return value_at(flat_index(index));
}

std::size_t default_lattice_order(std::size_t samples) {
    const auto k = static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(samples) / 20.0)));
    return std::min(std::max<std::size_t>(k, 2), std::max<std::size_t>(samples, 1));
}

double empirical_copula_eval(const RankMatrix& ranks, std::span<const double> u) {
    if (u.size() != ranks.cols()) {
        throw ValidationError("point has " + std::to_string(u.size()) + " coordinates, expected " +
                              std::to_string(ranks.cols()));
    }
    const auto samples = static_cast<double>(ranks.rows());
    std::vector<std::size_t> bounds(u.size());
    for (std::size_t n = 0; n < u.size(); ++n) {
        if (!(u[n] >= 0.0 && u[n] <= 1.0)) {
            throw ValidationError("coordinate " + std::to_string(n) + " outside [0, 1]");
        }
        // floor(u * T), forgiving rounding just below a lattice point.
        const double scaled = u[n] * samples;
        double whole = std::floor(scaled);
        if (whole + 1.0 - scaled <= 1e-9 * std::max(1.0, scaled)) whole += 1.0;
        bounds[n] = static_cast<std::size_t>(whole);
    }
    return fraction_below(ranks, bounds);
}

CopulaGrid empirical_copula_grid(const RankMatrix& ranks, std::size_t order) {
    check_order(ranks, order);
    const std::size_t dim = ranks.cols();
    const std::size_t extent = order + 1;
    const auto stride = strides(extent, dim);
    std::vector<std::uint64_t> counts(checked_cells(extent, dim), 0);

    for (std::size_t t = 0; t < ranks.rows(); ++t) {
        std::size_t flat = 0;
        for (std::size_t n = 0; n < dim; ++n) {
            flat += lattice_cell(ranks.at(t, n), order, ranks.rows()) * stride[n];
        }
        ++counts[flat];
    }
    // Prefix sums along each axis; index 0 slices stay zero.
    for (std::size_t n = 0; n < dim; ++n) {
        for (std::size_t flat = 0; flat < counts.size(); ++flat) {
            if ((flat / stride[n]) % extent != 0) counts[flat] += counts[flat - stride[n]];
        }
    }
    return CopulaGrid(CopulaGrid::Kind::cdf, order, dim, ranks.rows(), std::move(counts));
}

CopulaGrid empirical_copula_mass(const RankMatrix& ranks, std::size_t order) {
    check_order(ranks, order);
    const std::size_t dim = ranks.cols();
    const auto stride = strides(order, dim);
    std::vector<std::uint64_t> counts(checked_cells(order, dim), 0);
    for (std::size_t t = 0; t < ranks.rows(); ++t) {
        std::size_t flat = 0;
        for (std::size_t n = 0; n < dim; ++n) {
            flat += (lattice_cell(ranks.at(t, n), order, ranks.rows()) - 1) * stride[n];
        }
        ++counts[flat];
    }
    return CopulaGrid(CopulaGrid::Kind::mass, order, dim, ranks.rows(), std::move(counts));
}

CopulaGrid difference(const CopulaGrid& cdf) {
    if (cdf.kind() != CopulaGrid::Kind::cdf) {
        throw ValidationError("difference expects a cdf grid");
    }
    const std::size_t dim = cdf.dim();
    const std::size_t extent = cdf.extent();
    const auto stride = strides(extent, dim);

    // Backward difference along one axis at a time; the composition over all
    // axes is the signed 2^N-term sum per cell.
    std::vector<std::int64_t> work(cdf.counts().begin(), cdf.counts().end());
    for (std::size_t n = 0; n < dim; ++n) {
        for (std::size_t flat = work.size(); flat-- > 0;) {
            if ((flat / stride[n]) % extent != 0) work[flat] -= work[flat - stride[n]];
        }
    }

    const std::size_t order = cdf.order();
    const auto mass_stride = strides(order, dim);
    std::vector<std::uint64_t> masses(checked_cells(order, dim), 0);
    for (std::size_t flat = 0; flat < work.size(); ++flat) {
        std::size_t mass_flat = 0;
        bool interior = true;
        for (std::size_t n = 0; n < dim && interior; ++n) {
            const std::size_t t = (flat / stride[n]) % extent;
            interior = t != 0;
            if (interior) mass_flat += (t - 1) * mass_stride[n];
        }
        if (!interior) continue;
        if (work[flat] < 0) {
            throw ValidationError("cdf grid is not N-increasing: negative cell mass");
        }
        masses[mass_flat] = static_cast<std::uint64_t>(work[flat]);
    }
    return CopulaGrid(CopulaGrid::Kind::mass, order, dim, cdf.samples(), std::move(masses));
}

double empirical_copula_cell(const RankMatrix& ranks, std::span<const std::size_t> cell,
                             std::size_t order) {
    check_order(ranks, order);
    const std::size_t dim = ranks.cols();
    if (cell.size() != dim) throw ValidationError("cell index has wrong dimension");
    for (const auto t : cell) {
        if (t < 1 || t > order) throw ValidationError("cell index outside 1..K");
    }
    if (dim >= std::numeric_limits<std::size_t>::digits) {
        throw ValidationError("dimension too large for corner enumeration");
    }

    const std::size_t samples = ranks.rows();
    std::vector<std::size_t> bounds(dim);
    double mass = 0.0;
    for (std::size_t corner = 0; corner < (std::size_t{1} << dim); ++corner) {
        std::size_t lowered = 0;
        for (std::size_t n = 0; n < dim; ++n) {
            const bool lower = (corner >> n) & 1U;
            lowered += lower;
            // floor(t' * T / K) as an integer rank bound.
            bounds[n] = (cell[n] - (lower ? 1 : 0)) * samples / order;
        }
        const double term = fraction_below(ranks, bounds);
        mass += (lowered % 2 == 0) ? term : -term;
    }
    return mass;
}

}  // namespace deptree
