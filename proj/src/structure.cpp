#include "deptree/structure.hpp"

#include "deptree/error.hpp"

#include <cmath>
#include <numeric>
#include <utility>

namespace deptree {

namespace {

using EdgeKey = std::pair<std::size_t, std::size_t>;

EdgeKey key(std::size_t a, std::size_t b) { return {std::min(a, b), std::max(a, b)}; }

// Heavier wins; equal weights go to the smaller key.
bool better(double w, EdgeKey k, double best_w, EdgeKey best_k) {
    if (w != best_w) return w > best_w;
    return k < best_k;
}

}  // namespace

double DependenceTree::total_weight() const {
    double total = 0.0;
    for (const auto& e : edges) total += e.weight;
    return total;
}

bool is_spanning_tree(std::size_t n, std::span<const TreeEdge> edges) {
    if (n == 0 || edges.size() != n - 1) return false;
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const auto& e : edges) {
        if (e.u >= n || e.v >= n) return false;
        const auto a = find(e.u);
        const auto b = find(e.v);
        if (a == b) return false;
        parent[a] = b;
    }
    return true;
}

DependenceTree maximum_spanning_tree(const WeightMatrix& weights, std::vector<std::string> names) {
    const std::size_t n = weights.size();
    if (n < 2) throw ValidationError("spanning tree needs at least 2 nodes");
    if (names.empty()) {
        for (std::size_t i = 0; i < n; ++i) names.push_back(std::to_string(i + 1));
    }
    if (names.size() != n) throw ValidationError("need one name per node");

    DependenceTree tree;
    tree.nodes = std::move(names);
    tree.measure = weights.measure();
    tree.lattice_order = weights.lattice_order();

    auto add_edge = [&](std::size_t a, std::size_t b) {
        const auto [u, v] = key(a, b);
        tree.edges.push_back({u, v, weights(u, v), weights.signed_value(u, v)});
    };

    // Seed with the heaviest edge.
    EdgeKey seed{0, 1};
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (better(weights(i, j), {i, j}, weights(seed.first, seed.second), seed)) seed = {i, j};
        }
    }
    std::vector<bool> in_tree(n, false);
    in_tree[seed.first] = in_tree[seed.second] = true;
    add_edge(seed.first, seed.second);

    // best_partner[b]: tree vertex giving b its best connecting edge.
    std::vector<std::size_t> best_partner(n, seed.first);
    for (std::size_t b = 0; b < n; ++b) {
        if (in_tree[b]) continue;
        if (better(weights(seed.second, b), key(seed.second, b), weights(seed.first, b),
                   key(seed.first, b))) {
            best_partner[b] = seed.second;
        }
    }

    for (std::size_t added = 2; added < n; ++added) {
        std::size_t pick = n;
        for (std::size_t b = 0; b < n; ++b) {
            if (in_tree[b]) continue;
            if (pick == n || better(weights(best_partner[b], b), key(best_partner[b], b),
                                    weights(best_partner[pick], pick),
                                    key(best_partner[pick], pick))) {
                pick = b;
            }
        }
        in_tree[pick] = true;
        add_edge(best_partner[pick], pick);
        for (std::size_t b = 0; b < n; ++b) {
            if (in_tree[b]) continue;
            if (better(weights(pick, b), key(pick, b), weights(best_partner[b], b),
                       key(best_partner[b], b))) {
                best_partner[b] = pick;
            }
        }
    }
    return tree;
}

double coverage_ratio(const DependenceTree& tree, const WeightMatrix& weights) {
    if (tree.nodes.size() != weights.size()) {
        throw ValidationError("tree and weight matrix have different node counts");
    }
    for (const auto& e : tree.edges) {
        if (e.u >= weights.size() || e.v >= weights.size() ||
            std::abs(e.weight - weights(e.u, e.v)) > 1e-12) {
            throw ValidationError("tree edge does not match the weight matrix");
        }
    }
    const double total = weights.pair_total();
    if (!(total > 0.0)) throw ValidationError("zero total weight: coverage ratio undefined");
    return tree.total_weight() / total;
}

DependenceTree learn_structure(const Dataset& data, Measure measure, std::size_t order,
                               const RankOptions& options) {
    const auto weights = weight_matrix(data, measure, order, options);
    auto tree = maximum_spanning_tree(weights, data.names());
    if (!is_spanning_tree(data.cols(), tree.edges)) {
        throw InvariantError("learned edges do not form a spanning tree");
    }
    tree.coverage_ratio = coverage_ratio(tree, weights);
    return tree;
}

}  // namespace deptree
