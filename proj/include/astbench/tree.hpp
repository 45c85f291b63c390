#pragma once

#include <vector>

#include "astbench/linalg.hpp"
#include "astbench/model.hpp"

namespace astbench {

/// Greedy variance-reduction CART over the rows of `inputs`. Splits are
/// midpoints between consecutive distinct feature values; the first best
/// split found wins ties so rebuilding is deterministic.
TreeState build_regression_tree(const Matrix& inputs, const std::vector<double>& targets,
                                const TreeHyper& hyper);

double tree_predict(const TreeState& tree, const double* x);

} // namespace astbench
