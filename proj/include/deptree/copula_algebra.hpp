#pragma once

/**
 * @file copula_algebra.hpp
 * @brief Evaluable copula densities and synthetic data generation.
 *
 * Densities compose: a mixture is a convex combination of densities over the
 * same dimension, a product multiplies densities over disjoint blocks of
 * variables. A tree of bivariate blocks is the product-copula form of a
 * tree-structured graphical model.
 *
 * Synthetic data come from a Gaussian copula (Cholesky factor of a
 * correlation matrix applied to independent normals, mapped through the
 * normal CDF) followed by per-column inverse-CDF margins.
 */

#include "deptree/samples.hpp"

#include <Eigen/Core>

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace deptree {

/// Bivariate reference copula.
struct PairCopula {
    enum class Family { independence, gaussian };

    Family family = Family::independence;
    double theta = 0.0;  ///< gaussian correlation, strictly inside (-1, 1)

    static PairCopula independence() { return {}; }
    /// Throws ValidationError unless theta is in (-1, 1).
    static PairCopula gaussian(double theta);

    /// Density at (u, v), both strictly inside (0, 1).
    double density(double u, double v) const;
};

/// A copula density over a fixed dimension, evaluable on the open unit cube.
class CopulaDensity {
public:
    using Fn = std::function<double(std::span<const double>)>;

    CopulaDensity(std::size_t dim, Fn fn);

    static CopulaDensity independence(std::size_t dim);
    static CopulaDensity from_pair(const PairCopula& pair);

    std::size_t dim() const noexcept { return dim_; }

    /// Throws ValidationError on a dimension mismatch or a coordinate
    /// outside (0, 1).
    double operator()(std::span<const double> u) const;

private:
    std::size_t dim_;
    Fn fn_;
};

/// sum_k w_k * c_k(u). Weights are nonnegative and sum to 1 within 1e-12.
class MixtureCopulaDensity {
public:
    MixtureCopulaDensity(std::vector<CopulaDensity> components, std::vector<double> weights);

    std::size_t dim() const noexcept { return components_.front().dim(); }
    const std::vector<double>& weights() const noexcept { return weights_; }
    double operator()(std::span<const double> u) const;
    CopulaDensity as_density() const;

private:
    std::vector<CopulaDensity> components_;
    std::vector<double> weights_;
};

/// prod_m c_m(u restricted to block m). Blocks hold 0-based variable indices
/// and partition 0..dim-1; block m's density has dimension |block m|.
class ProductCopulaDensity {
public:
    ProductCopulaDensity(std::size_t dim, std::vector<std::vector<std::size_t>> blocks,
                         std::vector<CopulaDensity> densities);

    std::size_t dim() const noexcept { return dim_; }
    const std::vector<std::vector<std::size_t>>& blocks() const noexcept { return blocks_; }
    double operator()(std::span<const double> u) const;
    CopulaDensity as_density() const;

private:
    std::size_t dim_;
    std::vector<std::vector<std::size_t>> blocks_;
    std::vector<CopulaDensity> densities_;
};

/// Marginal distribution used to push uniforms onto the real line.
struct MarginSpec {
    enum class Family { standard_normal, exponential };

    Family family = Family::standard_normal;
    double rate = 1.0;  ///< exponential only, > 0

    static MarginSpec standard_normal() { return {}; }
    static MarginSpec exponential(double rate);

    /// Inverse CDF at u in (0, 1).
    double quantile(double u) const;
};

/// T x N matrix of uniforms in (0, 1) from the Gaussian copula with
/// correlation `sigma`. Deterministic for a given seed. Throws
/// ValidationError for a non-symmetric matrix, non-unit diagonal, or a
/// failed Cholesky factorization.
Eigen::MatrixXd sample_gaussian_copula(const Eigen::MatrixXd& sigma, std::size_t samples,
                                       std::uint64_t seed);

/// Column j becomes margins[j].quantile(u). Names default to X1..XN.
Dataset push_margins(const Eigen::MatrixXd& uniforms, std::span<const MarginSpec> margins,
                     std::vector<std::string> names = {});

// Synthetic-spec file

struct SyntheticBlock {
    std::vector<std::size_t> vars;  ///< 0-based; 1-based in the JSON file
    PairCopula::Family family = PairCopula::Family::gaussian;
    double theta = 0.0;  ///< pairwise correlation inside a gaussian block
};

struct SyntheticSpec {
    std::vector<SyntheticBlock> blocks;
    std::vector<MarginSpec> margins;  ///< one per variable; defines the dimension
    std::vector<std::string> names;   ///< optional; X1..XN when empty
    std::size_t samples = 1000;
    std::uint64_t seed = 42;

    std::size_t dim() const noexcept { return margins.size(); }
};

/// Parses the JSON synthetic spec:
/// {"blocks":[{"vars":[1,2],"family":"gaussian","theta":0.8}],
///  "margins":[{"family":"standard_normal"},{"family":"exponential","rate":1.0}],
///  "names":["A","B"], "samples":1000, "seed":42}
/// Variables outside every block are independent of the rest.
SyntheticSpec parse_synthetic_spec(std::string_view json_text);
SyntheticSpec load_synthetic_spec(std::istream& in);
std::string synthetic_spec_to_json(const SyntheticSpec& spec);

/// Block-diagonal correlation matrix: equicorrelation theta inside gaussian
/// blocks, identity elsewhere. Throws on overlapping or out-of-range blocks.
Eigen::MatrixXd correlation_matrix(const SyntheticSpec& spec);

/// Samples spec.samples rows using spec.seed.
Dataset generate_synthetic(const SyntheticSpec& spec);

/// Five variables: G1..G3 jointly Gaussian with pairwise correlation 0.8;
/// Cn, Ce coupled by a Gaussian copula with theta 0.8 and standard normal /
/// exponential(1) margins; the two blocks independent. 1000 samples.
SyntheticSpec five_variable_recipe(std::uint64_t seed = 42);

}  // namespace deptree
