#include "deptree/copula_algebra.hpp"
#include "deptree/error.hpp"
#include "deptree/structure.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

namespace deptree {
namespace {

WeightMatrix three_node() { return WeightMatrix(3, {0, 0.9, 0.5, 0.9, 0, 0.1, 0.5, 0.1, 0}); }

std::vector<std::pair<std::size_t, std::size_t>> edge_pairs(const DependenceTree& tree) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (const auto& e : tree.edges) out.emplace_back(e.u, e.v);
    std::ranges::sort(out);
    return out;
}

TEST(MaximumSpanningTree, ThreeNodeExample) {
    const auto w = three_node();
    const auto tree = maximum_spanning_tree(w);
    EXPECT_EQ(edge_pairs(tree), (std::vector<std::pair<std::size_t, std::size_t>>{{0, 1}, {0, 2}}));
    EXPECT_DOUBLE_EQ(tree.total_weight(), 1.4);
    EXPECT_EQ(tree.nodes, (std::vector<std::string>{"1", "2", "3"}));
    EXPECT_FALSE(tree.coverage_ratio.has_value());
    // The heaviest edge comes first.
    EXPECT_EQ(tree.edges.front().weight, 0.9);
    EXPECT_NEAR(coverage_ratio(tree, w), 1.4 / 1.5, 1e-15);
    EXPECT_NEAR(coverage_ratio(tree, w), 0.9333, 1e-4);
}

TEST(MaximumSpanningTree, TwoNodes) {
    const WeightMatrix w(2, {0, 0.3, 0.3, 0});
    const auto tree = maximum_spanning_tree(w, {"a", "b"});
    ASSERT_EQ(tree.edges.size(), 1u);
    EXPECT_EQ(tree.edges[0], (TreeEdge{0, 1, 0.3, 0.3}));
    EXPECT_EQ(tree.nodes, (std::vector<std::string>{"a", "b"}));
    EXPECT_EQ(coverage_ratio(tree, w), 1.0);
}

TEST(MaximumSpanningTree, EqualWeightsGiveStarAtFirstNode) {
    for (std::size_t n = 2; n <= 9; ++n) {
        std::vector<double> flat(n * n, 0.25);
        for (std::size_t i = 0; i < n; ++i) flat[i * n + i] = 0.0;
        const auto tree = maximum_spanning_tree(WeightMatrix(n, flat));
        ASSERT_EQ(tree.edges.size(), n - 1);
        for (std::size_t k = 0; k < n - 1; ++k) {
            EXPECT_EQ(tree.edges[k].u, 0u);
            EXPECT_EQ(tree.edges[k].v, k + 1);
        }
    }
}

TEST(MaximumSpanningTree, ZeroWeightsStillSpan) {
    const auto tree = maximum_spanning_tree(WeightMatrix(4, std::vector<double>(16, 0.0)));
    EXPECT_TRUE(is_spanning_tree(4, tree.edges));
    EXPECT_THROW(coverage_ratio(tree, WeightMatrix(4, std::vector<double>(16, 0.0))), ValidationError);
}

TEST(MaximumSpanningTree, IsolatedVariableIsStillSpanned) {
    // Node 3 has no dependence on anything.
    const WeightMatrix w(4, {0, 0.8, 0.6, 0, 0.8, 0, 0.7, 0, 0.6, 0.7, 0, 0, 0, 0, 0, 0});
    const auto tree = maximum_spanning_tree(w);
    EXPECT_TRUE(is_spanning_tree(4, tree.edges));
    const double ratio = coverage_ratio(tree, w);
    EXPECT_LT(ratio, 1.0);
    EXPECT_GT(ratio, 0.0);
}

TEST(MaximumSpanningTree, RejectsBadInput) {
    EXPECT_THROW(maximum_spanning_tree(WeightMatrix(1, {0.0})), ValidationError);
    EXPECT_THROW(maximum_spanning_tree(three_node(), {"a", "b"}), ValidationError);
    EXPECT_THROW(WeightMatrix(3, {0, 0.9, 0.5, 0.9 + 1e-9, 0, 0.1, 0.5, 0.1, 0}), ValidationError);
}

TEST(MaximumSpanningTree, OptimalAgainstEnumeration) {
    std::mt19937_64 rng(2718);
    std::uniform_real_distribution<double> unit;
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 2 + trial % 5;
        std::vector<double> w(n * n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                // Coarse values so ties are common.
                w[i * n + j] = w[j * n + i] = trial % 2 ? unit(rng) : std::floor(unit(rng) * 4) / 4;
            }
        }
        const WeightMatrix matrix(n, w);
        const auto tree = maximum_spanning_tree(matrix);
        ASSERT_TRUE(is_spanning_tree(n, tree.edges));
        ASSERT_NEAR(tree.total_weight(), oracle::best_spanning_tree_weight(n, w), 1e-12);
        for (const auto& e : tree.edges) {
            ASSERT_LT(e.u, e.v);
            ASSERT_EQ(e.weight, matrix(e.u, e.v));
        }
        if (matrix.pair_total() > 0.0) {
            const double ratio = coverage_ratio(tree, matrix);
            ASSERT_GT(ratio, 0.0);
            ASSERT_LE(ratio, 1.0);
        }
    }
}

TEST(IsSpanningTree, DetectsCyclesAndGaps) {
    const std::vector<TreeEdge> path{{0, 1}, {1, 2}, {2, 3}};
    EXPECT_TRUE(is_spanning_tree(4, path));
    EXPECT_FALSE(is_spanning_tree(5, path));
    const std::vector<TreeEdge> cycle{{0, 1}, {1, 2}, {0, 2}};
    EXPECT_FALSE(is_spanning_tree(4, cycle));
    const std::vector<TreeEdge> loop{{1, 1}};
    EXPECT_FALSE(is_spanning_tree(2, loop));
    const std::vector<TreeEdge> outside{{0, 2}};
    EXPECT_FALSE(is_spanning_tree(2, outside));
}

TEST(CoverageRatio, RejectsInconsistentTrees) {
    const auto w = three_node();
    auto tree = maximum_spanning_tree(w);
    tree.edges[0].weight += 0.1;
    EXPECT_THROW(coverage_ratio(tree, w), ValidationError);
    EXPECT_THROW(coverage_ratio(maximum_spanning_tree(w), WeightMatrix(2, {0, 1, 1, 0})),
                 ValidationError);
}

TEST(LearnStructure, RecoversSyntheticBlocks) {
    const auto tree = learn_structure(generate_synthetic(five_variable_recipe()), Measure::mi_cell);
    ASSERT_EQ(tree.edges.size(), 4u);
    EXPECT_EQ(tree.nodes, (std::vector<std::string>{"G1", "G2", "G3", "Cn", "Ce"}));
    EXPECT_EQ(tree.lattice_order, 7u);
    ASSERT_TRUE(tree.coverage_ratio.has_value());
    // Removing the lightest edge splits the blocks.
    const auto lightest = std::ranges::min_element(tree.edges, {}, &TreeEdge::weight);
    EXPECT_TRUE(lightest->u <= 2 && lightest->v >= 3);
    std::size_t cross = 0;
    for (const auto& e : tree.edges) cross += (e.u <= 2) != (e.v <= 2);
    EXPECT_EQ(cross, 1u);
}

TEST(LearnStructure, InvariantUnderIncreasingTransforms) {
    const auto data = generate_synthetic(five_variable_recipe(13));
    std::vector<std::vector<double>> moved(data.cols());
    for (std::size_t j = 0; j < data.cols(); ++j) {
        for (const double v : data.column(j)) moved[j].push_back(j % 2 ? std::exp(v) : v * v * v + v);
    }
    const auto other = Dataset::from_columns(data.names(), moved);
    for (const auto m : {Measure::rho_abs, Measure::mi_cell}) {
        EXPECT_EQ(learn_structure(data, m), learn_structure(other, m)) << measure_tag(m);
    }
}

TEST(LearnStructure, Deterministic) {
    const auto data = generate_synthetic(five_variable_recipe(1));
    for (const auto m : {Measure::rho_abs, Measure::mi_cell, Measure::mi_kde}) {
        const auto first = learn_structure(data, m, 0, {TieBreak::random, 4});
        for (int run = 0; run < 3; ++run) {
            EXPECT_EQ(learn_structure(data, m, 0, {TieBreak::random, 4}), first);
        }
    }
}

TEST(LearnStructure, RhoKeepsSign) {
    SyntheticSpec spec;
    spec.margins.assign(3, MarginSpec::standard_normal());
    spec.blocks.push_back({{0, 1}, PairCopula::Family::gaussian, -0.9});
    const auto tree = learn_structure(generate_synthetic(spec), Measure::rho_abs);
    const auto strongest = std::ranges::max_element(tree.edges, {}, &TreeEdge::weight);
    EXPECT_EQ(strongest->u, 0u);
    EXPECT_EQ(strongest->v, 1u);
    EXPECT_GT(strongest->weight, 0.8);
    EXPECT_EQ(strongest->signed_value, -strongest->weight);
}

}  // namespace
}  // namespace deptree
