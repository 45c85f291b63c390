#include "astbench/tree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "astbench/errors.hpp"

namespace astbench {

namespace {

struct SplitChoice {
    int feature = -1;
    double threshold = 0.0;
    double cost = std::numeric_limits<double>::infinity();
};

double subset_mean(const std::vector<double>& y, const std::vector<std::size_t>& idx) {
    double s = 0.0;
    for (std::size_t i : idx) s += y[i];
    return s / static_cast<double>(idx.size());
}

double subset_sse(const std::vector<double>& y, const std::vector<std::size_t>& idx) {
    const double mean = subset_mean(y, idx);
    double acc = 0.0;
    for (std::size_t i : idx) acc += (y[i] - mean) * (y[i] - mean);
    return acc;
}

SplitChoice find_best_split(const Matrix& x, const std::vector<double>& y,
                            const std::vector<std::size_t>& idx, int min_leaf) {
    const std::size_t n = idx.size();
    SplitChoice best;
    std::vector<std::size_t> sorted(idx);
    for (std::size_t f = 0; f < x.cols(); ++f) {
        // Total order (value, index) keeps the scan deterministic.
        std::sort(sorted.begin(), sorted.end(), [&](std::size_t a, std::size_t b) {
            const double va = x(a, f);
            const double vb = x(b, f);
            return va < vb || (va == vb && a < b);
        });
        double sum_left = 0.0;
        double sumsq_left = 0.0;
        double sum_right = 0.0;
        double sumsq_right = 0.0;
        for (std::size_t i : sorted) {
            sum_right += y[i];
            sumsq_right += y[i] * y[i];
        }
        for (std::size_t p = 1; p < n; ++p) {
            const double yv = y[sorted[p - 1]];
            sum_left += yv;
            sumsq_left += yv * yv;
            sum_right -= yv;
            sumsq_right -= yv * yv;
            const double lo = x(sorted[p - 1], f);
            const double hi = x(sorted[p], f);
            if (lo == hi) continue;
            const auto nl = static_cast<double>(p);
            const auto nr = static_cast<double>(n - p);
            if (p < static_cast<std::size_t>(min_leaf) ||
                n - p < static_cast<std::size_t>(min_leaf))
                continue;
            const double cost = (sumsq_left - sum_left * sum_left / nl) +
                                (sumsq_right - sum_right * sum_right / nr);
            if (cost < best.cost) {
                best.cost = cost;
                best.feature = static_cast<int>(f);
                best.threshold = lo + (hi - lo) / 2.0;
            }
        }
    }
    return best;
}

int build_node(const Matrix& x, const std::vector<double>& y, std::vector<std::size_t> idx,
               int depth, const TreeHyper& hyper, std::vector<TreeNode>& nodes) {
    const int id = static_cast<int>(nodes.size());
    nodes.emplace_back();
    nodes[id].value = subset_mean(y, idx);

    const bool can_split = depth < hyper.max_depth &&
                           idx.size() >= 2 * static_cast<std::size_t>(hyper.min_leaf) &&
                           subset_sse(y, idx) > 1e-12;
    if (!can_split) return id;

    const SplitChoice split = find_best_split(x, y, idx, hyper.min_leaf);
    if (split.feature < 0) return id;

    std::vector<std::size_t> left_idx, right_idx;
    left_idx.reserve(idx.size());
    right_idx.reserve(idx.size());
    for (std::size_t i : idx)
        (x(i, static_cast<std::size_t>(split.feature)) <= split.threshold ? left_idx
                                                                          : right_idx)
            .push_back(i);
    idx.clear();
    idx.shrink_to_fit();

    nodes[id].feature = split.feature;
    nodes[id].threshold = split.threshold;
    const int left = build_node(x, y, std::move(left_idx), depth + 1, hyper, nodes);
    nodes[id].left = left;
    const int right = build_node(x, y, std::move(right_idx), depth + 1, hyper, nodes);
    nodes[id].right = right;
    return id;
}

} // namespace

TreeState build_regression_tree(const Matrix& inputs, const std::vector<double>& targets,
                                const TreeHyper& hyper) {
    if (inputs.rows() == 0) throw DatasetError("tree fit needs at least one sample");
    if (targets.size() != inputs.rows())
        throw ShapeError("tree targets do not match input rows");
    TreeState tree;
    std::vector<std::size_t> idx(inputs.rows());
    std::iota(idx.begin(), idx.end(), 0);
    build_node(inputs, targets, std::move(idx), 0, hyper, tree.nodes);
    return tree;
}

double tree_predict(const TreeState& tree, const double* x) {
    if (tree.nodes.empty()) throw DatasetError("empty tree");
    int id = 0;
    while (tree.nodes[static_cast<std::size_t>(id)].feature >= 0) {
        const TreeNode& node = tree.nodes[static_cast<std::size_t>(id)];
        id = x[static_cast<std::size_t>(node.feature)] <= node.threshold ? node.left
                                                                         : node.right;
    }
    return tree.nodes[static_cast<std::size_t>(id)].value;
}

} // namespace astbench
