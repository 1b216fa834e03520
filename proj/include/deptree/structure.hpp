#pragma once

/**
 * @file structure.hpp
 * @brief Maximum spanning dependence trees over a pairwise weight matrix.
 */

#include "deptree/measures.hpp"
#include "deptree/samples.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace deptree {

struct TreeEdge {
    std::size_t u = 0;  ///< smaller node index
    std::size_t v = 0;  ///< larger node index
    double weight = 0.0;
    double signed_value = 0.0;

    friend bool operator==(const TreeEdge&, const TreeEdge&) = default;
};

/// N nodes joined by N - 1 weighted edges, listed in the order Prim added them.
struct DependenceTree {
    std::vector<std::string> nodes;
    std::vector<TreeEdge> edges;
    Measure measure = Measure::mi_cell;
    std::size_t lattice_order = 0;
    std::optional<double> coverage_ratio;

    double total_weight() const;

    friend bool operator==(const DependenceTree&, const DependenceTree&) = default;
};

/// True when `edges` form a spanning tree on nodes 0..n-1.
bool is_spanning_tree(std::size_t n, std::span<const TreeEdge> edges);

/// Prim's algorithm seeded with the globally heaviest edge, O(N^2). Ties go
/// to the lexicographically smallest (min index, max index) pair. `names`
/// defaults to "1".."N". Leaves coverage_ratio unset.
DependenceTree maximum_spanning_tree(const WeightMatrix& weights,
                                     std::vector<std::string> names = {});

/// Tree weight over the sum of all N(N-1)/2 pair weights. Throws
/// ValidationError if the edges disagree with `weights` or every weight is 0.
double coverage_ratio(const DependenceTree& tree, const WeightMatrix& weights);

/// Ranks, pairwise weights, maximum spanning tree, coverage ratio.
/// `order` 0 selects the default lattice order.
DependenceTree learn_structure(const Dataset& data, Measure measure, std::size_t order = 0,
                               const RankOptions& options = {});

}  // namespace deptree
