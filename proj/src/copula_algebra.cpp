#include "deptree/copula_algebra.hpp"

#include "deptree/error.hpp"
#include "deptree/normal.hpp"

#include <Eigen/Cholesky>
#include <json.hpp>

#include <cmath>
#include <istream>
#include <iterator>
#include <limits>
#include <random>
#include <sstream>

namespace deptree {

using json = nlohmann::json;

namespace {

constexpr double kWeightTolerance = 1e-12;

void check_open_unit(double u, const char* what) {
    if (!(u > 0.0 && u < 1.0)) {
        throw ValidationError(std::string(what) + " must lie strictly inside (0, 1)");
    }
}

}  // namespace

PairCopula PairCopula::gaussian(double theta) {
    if (!(theta > -1.0 && theta < 1.0)) {
        throw ValidationError("gaussian copula parameter must lie in (-1, 1)");
    }
    return {Family::gaussian, theta};
}

double PairCopula::density(double u, double v) const {
    check_open_unit(u, "u");
    check_open_unit(v, "v");
    if (family == Family::independence) return 1.0;
    const double zu = normal_quantile(u);
    const double zv = normal_quantile(v);
    const double one_minus = 1.0 - theta * theta;
    const double exponent =
        -(theta * theta * (zu * zu + zv * zv) - 2.0 * theta * zu * zv) / (2.0 * one_minus);
    return std::exp(exponent) / std::sqrt(one_minus);
}

CopulaDensity::CopulaDensity(std::size_t dim, Fn fn) : dim_(dim), fn_(std::move(fn)) {
    if (dim_ < 1) throw ValidationError("copula density needs dimension >= 1");
    if (!fn_) throw ValidationError("copula density needs an evaluator");
}

CopulaDensity CopulaDensity::independence(std::size_t dim) {
    return CopulaDensity(dim, [](std::span<const double>) { return 1.0; });
}

CopulaDensity CopulaDensity::from_pair(const PairCopula& pair) {
    if (pair.family == PairCopula::Family::gaussian) PairCopula::gaussian(pair.theta);
    return CopulaDensity(2, [pair](std::span<const double> u) { return pair.density(u[0], u[1]); });
}

double CopulaDensity::operator()(std::span<const double> u) const {
    if (u.size() != dim_) {
        throw ValidationError("density of dimension " + std::to_string(dim_) +
                              " evaluated at a point of dimension " + std::to_string(u.size()));
    }
    for (const double x : u) check_open_unit(x, "copula argument");
    return fn_(u);
}

MixtureCopulaDensity::MixtureCopulaDensity(std::vector<CopulaDensity> components,
                                           std::vector<double> weights)
    : components_(std::move(components)), weights_(std::move(weights)) {
    if (components_.empty()) throw ValidationError("mixture needs at least one component");
    if (components_.size() != weights_.size()) {
        throw ValidationError("mixture needs one weight per component");
    }
    double total = 0.0;
    for (const double w : weights_) {
        if (!(w >= 0.0)) throw ValidationError("mixture weights must be nonnegative");
        total += w;
    }
    if (std::abs(total - 1.0) > kWeightTolerance) {
        throw ValidationError("mixture weights must sum to 1");
    }
    for (const auto& c : components_) {
        if (c.dim() != components_.front().dim()) {
            throw ValidationError("mixture components have different dimensions");
        }
    }
}

double MixtureCopulaDensity::operator()(std::span<const double> u) const {
    double value = 0.0;
    for (std::size_t k = 0; k < components_.size(); ++k) {
        if (weights_[k] != 0.0) value += weights_[k] * components_[k](u);
    }
    return value;
}

CopulaDensity MixtureCopulaDensity::as_density() const {
    return CopulaDensity(dim(), [self = *this](std::span<const double> u) { return self(u); });
}

ProductCopulaDensity::ProductCopulaDensity(std::size_t dim,
                                           std::vector<std::vector<std::size_t>> blocks,
                                           std::vector<CopulaDensity> densities)
    : dim_(dim), blocks_(std::move(blocks)), densities_(std::move(densities)) {
    if (blocks_.size() != densities_.size()) {
        throw ValidationError("product needs one density per block");
    }
    std::vector<bool> covered(dim_, false);
    for (std::size_t m = 0; m < blocks_.size(); ++m) {
        if (blocks_[m].empty()) throw ValidationError("product block is empty");
        if (densities_[m].dim() != blocks_[m].size()) {
            throw ValidationError("product block " + std::to_string(m) +
                                  " size does not match its density dimension");
        }
        for (const auto v : blocks_[m]) {
            if (v >= dim_) throw ValidationError("product block index out of range");
            if (covered[v]) throw ValidationError("product blocks overlap");
            covered[v] = true;
        }
    }
    for (std::size_t v = 0; v < dim_; ++v) {
        if (!covered[v]) {
            throw ValidationError("product blocks do not cover variable " + std::to_string(v));
        }
    }
}

double ProductCopulaDensity::operator()(std::span<const double> u) const {
    if (u.size() != dim_) throw ValidationError("product density evaluated at wrong dimension");
    double value = 1.0;
    std::vector<double> sub;
    for (std::size_t m = 0; m < blocks_.size(); ++m) {
        sub.clear();
        for (const auto v : blocks_[m]) sub.push_back(u[v]);
        value *= densities_[m](sub);
    }
    return value;
}

CopulaDensity ProductCopulaDensity::as_density() const {
    return CopulaDensity(dim_, [self = *this](std::span<const double> u) { return self(u); });
}

MarginSpec MarginSpec::exponential(double rate) {
    if (!(rate > 0.0) || !std::isfinite(rate)) {
        throw ValidationError("exponential margin needs a positive rate");
    }
    return {Family::exponential, rate};
}

double MarginSpec::quantile(double u) const {
    check_open_unit(u, "margin argument");
    switch (family) {
        case Family::standard_normal:
            return normal_quantile(u);
        case Family::exponential:
            if (!(rate > 0.0)) throw ValidationError("exponential margin needs a positive rate");
            return -std::log1p(-u) / rate;
    }
    throw InvariantError("unknown margin family");
}

Eigen::MatrixXd sample_gaussian_copula(const Eigen::MatrixXd& sigma, std::size_t samples,
                                       std::uint64_t seed) {
    const auto dim = sigma.rows();
    if (dim < 1 || sigma.cols() != dim) throw ValidationError("correlation matrix must be square");
    for (Eigen::Index i = 0; i < dim; ++i) {
        if (std::abs(sigma(i, i) - 1.0) > 1e-12) {
            throw ValidationError("correlation matrix must have a unit diagonal");
        }
        for (Eigen::Index j = 0; j < i; ++j) {
            if (std::abs(sigma(i, j) - sigma(j, i)) > 1e-12) {
                throw ValidationError("correlation matrix must be symmetric");
            }
        }
    }
    const Eigen::LLT<Eigen::MatrixXd> llt(sigma);
    if (llt.info() != Eigen::Success) {
        throw ValidationError("correlation matrix is not positive definite (Cholesky failed)");
    }
    const Eigen::MatrixXd lower = llt.matrixL();

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    const double below_one = std::nextafter(1.0, 0.0);
    Eigen::MatrixXd out(static_cast<Eigen::Index>(samples), dim);
    Eigen::VectorXd z(dim);
    for (Eigen::Index t = 0; t < out.rows(); ++t) {
        for (Eigen::Index n = 0; n < dim; ++n) z(n) = normal(rng);
        const Eigen::VectorXd x = lower * z;
        for (Eigen::Index n = 0; n < dim; ++n) {
            const double u = normal_cdf(x(n));
            out(t, n) = std::clamp(u, std::numeric_limits<double>::min(), below_one);
        }
    }
    return out;
}

Dataset push_margins(const Eigen::MatrixXd& uniforms, std::span<const MarginSpec> margins,
                     std::vector<std::string> names) {
    const auto dim = static_cast<std::size_t>(uniforms.cols());
    if (margins.size() != dim) {
        throw ValidationError("need one margin per column: got " + std::to_string(margins.size()) +
                              " for " + std::to_string(dim));
    }
    if (names.empty()) {
        for (std::size_t n = 0; n < dim; ++n) names.push_back("X" + std::to_string(n + 1));
    }
    std::vector<std::vector<double>> columns(dim);
    for (std::size_t n = 0; n < dim; ++n) {
        auto& col = columns[n];
        col.reserve(static_cast<std::size_t>(uniforms.rows()));
        for (Eigen::Index t = 0; t < uniforms.rows(); ++t) {
            col.push_back(margins[n].quantile(uniforms(t, static_cast<Eigen::Index>(n))));
        }
    }
    return Dataset::from_columns(std::move(names), std::move(columns));
}

namespace {

PairCopula::Family parse_family(const std::string& name) {
    if (name == "gaussian") return PairCopula::Family::gaussian;
    if (name == "independence") return PairCopula::Family::independence;
    throw ValidationError("unknown copula family \"" + name + "\"");
}

MarginSpec parse_margin(const json& j) {
    const auto family = j.at("family").get<std::string>();
    if (family == "standard_normal") return MarginSpec::standard_normal();
    if (family == "exponential") return MarginSpec::exponential(j.value("rate", 1.0));
    throw ValidationError("unknown margin family \"" + family + "\"");
}

}  // namespace

SyntheticSpec parse_synthetic_spec(std::string_view json_text) {
    SyntheticSpec spec;
    try {
        const auto doc = json::parse(json_text);
        for (const auto& m : doc.at("margins")) spec.margins.push_back(parse_margin(m));
        for (const auto& b : doc.value("blocks", json::array())) {
            SyntheticBlock block;
            for (const auto& v : b.at("vars")) {
                const auto index = v.get<long long>();
                if (index < 1 || static_cast<std::size_t>(index) > spec.margins.size()) {
                    throw ValidationError("block variable " + std::to_string(index) +
                                          " outside 1.." + std::to_string(spec.margins.size()));
                }
                block.vars.push_back(static_cast<std::size_t>(index - 1));
            }
            block.family = parse_family(b.value("family", std::string("gaussian")));
            block.theta = b.value("theta", 0.0);
            if (block.family == PairCopula::Family::gaussian) PairCopula::gaussian(block.theta);
            spec.blocks.push_back(std::move(block));
        }
        if (doc.contains("names")) spec.names = doc.at("names").get<std::vector<std::string>>();
        const auto samples = doc.value("samples", 1000LL);
        if (samples < 2) throw ValidationError("synthetic spec needs samples >= 2");
        spec.samples = static_cast<std::size_t>(samples);
        const auto seed = doc.value("seed", 42LL);
        if (seed < 0) throw ValidationError("seed must be nonnegative");
        spec.seed = static_cast<std::uint64_t>(seed);
    } catch (const json::exception& e) {
        throw ValidationError(std::string("bad synthetic spec: ") + e.what());
    }
    if (spec.margins.size() < 2) throw ValidationError("synthetic spec needs at least 2 margins");
    if (!spec.names.empty() && spec.names.size() != spec.margins.size()) {
        throw ValidationError("synthetic spec needs one name per margin");
    }
    correlation_matrix(spec);  // validates block layout
    return spec;
}

SyntheticSpec load_synthetic_spec(std::istream& in) {
    const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    return parse_synthetic_spec(text);
}

std::string synthetic_spec_to_json(const SyntheticSpec& spec) {
    json doc;
    doc["blocks"] = json::array();
    for (const auto& b : spec.blocks) {
        json block;
        block["vars"] = json::array();
        for (const auto v : b.vars) block["vars"].push_back(v + 1);
        block["family"] = b.family == PairCopula::Family::gaussian ? "gaussian" : "independence";
        block["theta"] = b.theta;
        doc["blocks"].push_back(block);
    }
    doc["margins"] = json::array();
    for (const auto& m : spec.margins) {
        if (m.family == MarginSpec::Family::standard_normal) {
            doc["margins"].push_back({{"family", "standard_normal"}});
        } else {
            doc["margins"].push_back({{"family", "exponential"}, {"rate", m.rate}});
        }
    }
    if (!spec.names.empty()) doc["names"] = spec.names;
    doc["samples"] = spec.samples;
    doc["seed"] = spec.seed;
    return doc.dump(2);
}

Eigen::MatrixXd correlation_matrix(const SyntheticSpec& spec) {
    const auto dim = static_cast<Eigen::Index>(spec.dim());
    Eigen::MatrixXd sigma = Eigen::MatrixXd::Identity(dim, dim);
    std::vector<bool> used(spec.dim(), false);
    for (const auto& block : spec.blocks) {
        for (const auto v : block.vars) {
            if (v >= spec.dim()) throw ValidationError("block variable out of range");
            if (used[v]) throw ValidationError("variable appears in more than one block");
            used[v] = true;
        }
        if (block.family != PairCopula::Family::gaussian) continue;
        for (const auto a : block.vars) {
            for (const auto b : block.vars) {
                if (a != b) sigma(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = block.theta;
            }
        }
    }
    return sigma;
}

Dataset generate_synthetic(const SyntheticSpec& spec) {
    const auto uniforms = sample_gaussian_copula(correlation_matrix(spec), spec.samples, spec.seed);
    return push_margins(uniforms, spec.margins, spec.names);
}

SyntheticSpec five_variable_recipe(std::uint64_t seed) {
    SyntheticSpec spec;
    spec.blocks.push_back({{0, 1, 2}, PairCopula::Family::gaussian, 0.8});
    spec.blocks.push_back({{3, 4}, PairCopula::Family::gaussian, 0.8});
    spec.margins = {MarginSpec::standard_normal(), MarginSpec::standard_normal(),
                    MarginSpec::standard_normal(), MarginSpec::standard_normal(),
                    MarginSpec::exponential(1.0)};
    spec.names = {"G1", "G2", "G3", "Cn", "Ce"};
    spec.samples = 1000;
    spec.seed = seed;
    return spec;
}

}  // namespace deptree
