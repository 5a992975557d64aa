#include "rfclust/forest.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <numeric>
#include <set>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "rfclust/csv.hpp"
#include "rfclust/rng.hpp"

namespace rfclust {

namespace {

int candidate_count(MaxFeatures mode, int total) {
    switch (mode) {
        case MaxFeatures::kAll: return total;
        case MaxFeatures::kSqrt:
            return std::max(1, static_cast<int>(std::ceil(std::sqrt(static_cast<double>(total)))));
        case MaxFeatures::kLog2:
            return std::max(1, static_cast<int>(std::ceil(std::log2(static_cast<double>(total)))));
    }
    return total;
}

struct SplitChoice {
    bool valid = false;
    int feature = -1;
    double threshold = 0.0;
    double loss = std::numeric_limits<double>::infinity();  // SSE(left) + SSE(right)
};

// Exact best split over the candidate features, first-best in
// feature-then-threshold order.
SplitChoice best_split(const Eigen::Ref<const Eigen::MatrixXd>& X,
                       const Eigen::Ref<const Eigen::VectorXd>& y,
                       const std::vector<int>& rows, const std::vector<int>& candidates) {
    SplitChoice best;
    const auto m = rows.size();
    std::vector<int> order(m);
    for (const int feature : candidates) {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
            return X(rows[static_cast<std::size_t>(a)], feature) <
                   X(rows[static_cast<std::size_t>(b)], feature);
        });
        double left_sum = 0.0;
        double left_sq = 0.0;
        double right_sum = 0.0;
        double right_sq = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const double v = y[rows[static_cast<std::size_t>(order[i])]];
            right_sum += v;
            right_sq += v * v;
        }
        for (std::size_t i = 0; i + 1 < m; ++i) {
            const double v = y[rows[static_cast<std::size_t>(order[i])]];
            left_sum += v;
            left_sq += v * v;
            right_sum -= v;
            right_sq -= v * v;
            const double x_here = X(rows[static_cast<std::size_t>(order[i])], feature);
            const double x_next = X(rows[static_cast<std::size_t>(order[i + 1])], feature);
            if (x_next <= x_here) continue;  // only between distinct values
            const auto nl = static_cast<double>(i + 1);
            const auto nr = static_cast<double>(m - i - 1);
            const double sse_left = std::max(0.0, left_sq - left_sum * left_sum / nl);
            const double sse_right = std::max(0.0, right_sq - right_sum * right_sum / nr);
            const double loss = sse_left + sse_right;
            if (loss < best.loss) {
                best.valid = true;
                best.loss = loss;
                best.feature = feature;
                best.threshold = 0.5 * (x_here + x_next);
            }
        }
    }
    return best;
}

int build_node(const Eigen::Ref<const Eigen::MatrixXd>& X,
               const Eigen::Ref<const Eigen::VectorXd>& y, const HyperParams& params,
               std::mt19937_64& rng, std::vector<int>& rows, int depth,
               std::vector<TreeNode>& nodes) {
    const auto node_index = static_cast<int>(nodes.size());
    nodes.emplace_back();

    double sum = 0.0;
    double y_min = y[rows.front()];
    double y_max = y_min;
    for (const int r : rows) {
        sum += y[r];
        y_min = std::min(y_min, y[r]);
        y_max = std::max(y_max, y[r]);
    }
    const double mean = sum / static_cast<double>(rows.size());

    const bool stop = depth >= params.max_depth ||
                      static_cast<int>(rows.size()) < params.min_samples_split ||
                      y_min == y_max;
    SplitChoice split;
    if (!stop) {
        const int total = static_cast<int>(X.cols());
        const int k = candidate_count(params.max_features, total);
        // Partial Fisher-Yates draw of k distinct features, then sorted so
        // ties resolve in feature order.
        std::vector<int> pool(static_cast<std::size_t>(total));
        std::iota(pool.begin(), pool.end(), 0);
        std::vector<int> candidates;
        candidates.reserve(static_cast<std::size_t>(k));
        for (int i = 0; i < k; ++i) {
            const auto j = static_cast<std::size_t>(
                uniform_index(rng, static_cast<std::uint64_t>(total - i)));
            std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(i) + j]);
            candidates.push_back(pool[static_cast<std::size_t>(i)]);
        }
        std::sort(candidates.begin(), candidates.end());
        split = best_split(X, y, rows, candidates);
    }

    if (!split.valid) {
        nodes[static_cast<std::size_t>(node_index)].leaf_value = mean;
        return node_index;
    }

    std::vector<int> left_rows;
    std::vector<int> right_rows;
    for (const int r : rows) {
        (X(r, split.feature) <= split.threshold ? left_rows : right_rows).push_back(r);
    }
    rows.clear();
    rows.shrink_to_fit();

    const int left = build_node(X, y, params, rng, left_rows, depth + 1, nodes);
    const int right = build_node(X, y, params, rng, right_rows, depth + 1, nodes);
    TreeNode& node = nodes[static_cast<std::size_t>(node_index)];
    node.feature = split.feature;
    node.threshold = split.threshold;
    node.left = left;
    node.right = right;
    return node_index;
}

double forest_mae(const Forest& forest, const Eigen::Ref<const Eigen::MatrixXd>& X,
                  const Eigen::Ref<const Eigen::VectorXd>& y) {
    double total = 0.0;
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
        total += std::abs(predict(forest, X.row(i)) - y[i]);
    }
    return total / static_cast<double>(X.rows());
}

nlohmann::json node_to_json(const RegressionTree& tree, int index) {
    const TreeNode& node = tree.nodes[static_cast<std::size_t>(index)];
    if (node.feature < 0) return nlohmann::json{{"leaf_value", node.leaf_value}};
    return nlohmann::json{{"feature", node.feature},
                          {"threshold", node.threshold},
                          {"left", node_to_json(tree, node.left)},
                          {"right", node_to_json(tree, node.right)}};
}

}  // namespace

MaxFeatures parse_max_features(const std::string& name) {
    if (name == "all") return MaxFeatures::kAll;
    if (name == "sqrt") return MaxFeatures::kSqrt;
    if (name == "log2") return MaxFeatures::kLog2;
    throw std::invalid_argument("unknown max_features: '" + name + "'");
}

std::string max_features_name(MaxFeatures value) {
    switch (value) {
        case MaxFeatures::kAll: return "all";
        case MaxFeatures::kSqrt: return "sqrt";
        case MaxFeatures::kLog2: return "log2";
    }
    return "?";
}

double RegressionTree::predict(const Eigen::Ref<const Eigen::RowVectorXd>& x) const {
    int at = 0;
    for (;;) {
        const TreeNode& node = nodes[static_cast<std::size_t>(at)];
        if (node.feature < 0) return node.leaf_value;
        at = x[node.feature] <= node.threshold ? node.left : node.right;
    }
}

int RegressionTree::depth() const {
    // Iterative depth over the index-linked layout.
    std::vector<std::pair<int, int>> stack{{0, 0}};
    int deepest = 0;
    while (!stack.empty()) {
        const auto [index, depth] = stack.back();
        stack.pop_back();
        const TreeNode& node = nodes[static_cast<std::size_t>(index)];
        if (node.feature < 0) {
            deepest = std::max(deepest, depth);
        } else {
            stack.emplace_back(node.left, depth + 1);
            stack.emplace_back(node.right, depth + 1);
        }
    }
    return deepest;
}

RegressionTree fit_tree(const Eigen::Ref<const Eigen::MatrixXd>& X,
                        const Eigen::Ref<const Eigen::VectorXd>& y, const HyperParams& params,
                        std::mt19937_64& rng) {
    if (X.rows() == 0) throw std::invalid_argument("fit_tree: empty input");
    if (X.rows() != y.size()) throw std::invalid_argument("fit_tree: X/y size mismatch");
    RegressionTree tree;
    std::vector<int> rows(static_cast<std::size_t>(X.rows()));
    std::iota(rows.begin(), rows.end(), 0);
    build_node(X, y, params, rng, rows, 0, tree.nodes);
    return tree;
}

Forest fit_forest(const Eigen::Ref<const Eigen::MatrixXd>& X,
                  const Eigen::Ref<const Eigen::VectorXd>& y, const HyperParams& params,
                  const std::vector<std::string>& feature_names, std::uint64_t seed,
                  const FitOptions& options) {
    if (X.rows() == 0) throw std::invalid_argument("fit_forest: empty input");
    if (params.n_estimators < 1) throw std::invalid_argument("fit_forest: need at least one tree");
    if (static_cast<Eigen::Index>(feature_names.size()) != X.cols()) {
        throw std::invalid_argument("fit_forest: feature name count mismatch");
    }
    Forest forest;
    forest.params = params;
    forest.feature_names = feature_names;
    const auto n = X.rows();
    for (int t = 0; t < params.n_estimators; ++t) {
        const std::uint64_t tree_seed =
            stream_key(seed, RngStage::kTree, static_cast<std::uint64_t>(t));
        forest.bootstrap_seeds.push_back(tree_seed);
        auto rng = make_rng(tree_seed);
        Eigen::MatrixXd Xb;
        Eigen::VectorXd yb;
        if (options.bootstrap) {
            Xb.resize(n, X.cols());
            yb.resize(n);
            for (Eigen::Index i = 0; i < n; ++i) {
                const auto r = static_cast<Eigen::Index>(
                    uniform_index(rng, static_cast<std::uint64_t>(n)));
                Xb.row(i) = X.row(r);
                yb[i] = y[r];
            }
            forest.trees.push_back(fit_tree(Xb, yb, params, rng));
        } else {
            forest.trees.push_back(fit_tree(X, y, params, rng));
        }
    }
    return forest;
}

double predict(const Forest& forest, const Eigen::Ref<const Eigen::RowVectorXd>& x) {
    if (x.size() != static_cast<Eigen::Index>(forest.feature_names.size())) {
        throw std::invalid_argument("predict: feature count mismatch");
    }
    double sum = 0.0;
    for (const RegressionTree& tree : forest.trees) sum += tree.predict(x);
    return sum / static_cast<double>(forest.trees.size());
}

double predict(const Forest& forest, const FeatureVector& features) {
    Eigen::RowVectorXd x(static_cast<Eigen::Index>(forest.feature_names.size()));
    for (std::size_t i = 0; i < forest.feature_names.size(); ++i) {
        const auto& name = forest.feature_names[i];
        const auto it = std::find(features.names.begin(), features.names.end(), name);
        if (it == features.names.end()) {
            throw std::out_of_range("predict: feature vector is missing '" + name + "'");
        }
        x[static_cast<Eigen::Index>(i)] =
            features.values[static_cast<Eigen::Index>(it - features.names.begin())];
    }
    return predict(forest, x);
}

HyperParams grid_search(const Eigen::Ref<const Eigen::MatrixXd>& X,
                        const Eigen::Ref<const Eigen::VectorXd>& y,
                        const std::vector<int>& groups, const HyperGrid& grid,
                        std::uint64_t seed) {
    if (static_cast<Eigen::Index>(groups.size()) != X.rows()) {
        throw std::invalid_argument("grid_search: group label count mismatch");
    }
    std::vector<int> distinct(groups);
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    if (distinct.size() < 2) {
        throw std::invalid_argument("grid_search: need at least 2 distinct groups");
    }
    // Group-aware inner folds: round-robin over sorted groups, or
    // leave-one-group-out when fewer than 3 groups exist.
    const std::size_t fold_count = distinct.size() < 3 ? distinct.size() : 3;
    std::vector<int> fold_of_row(groups.size());
    for (std::size_t r = 0; r < groups.size(); ++r) {
        const auto pos = std::lower_bound(distinct.begin(), distinct.end(), groups[r]) -
                         distinct.begin();
        fold_of_row[r] = static_cast<int>(static_cast<std::size_t>(pos) % fold_count);
    }

    std::vector<std::string> dummy_names(static_cast<std::size_t>(X.cols()));
    for (std::size_t i = 0; i < dummy_names.size(); ++i) dummy_names[i] = "f" + std::to_string(i);

    HyperParams best;
    double best_score = std::numeric_limits<double>::infinity();
    bool first = true;
    std::uint64_t combo = 0;
    for (const int n_estimators : grid.n_estimators) {
        for (const MaxFeatures max_features : grid.max_features) {
            for (const int max_depth : grid.max_depth) {
                for (const int min_samples_split : grid.min_samples_split) {
                    const HyperParams params{n_estimators, max_features, max_depth,
                                             min_samples_split};
                    double total_mae = 0.0;
                    for (std::size_t fold = 0; fold < fold_count; ++fold) {
                        std::vector<int> train_rows;
                        std::vector<int> val_rows;
                        for (std::size_t r = 0; r < fold_of_row.size(); ++r) {
                            (fold_of_row[r] == static_cast<int>(fold) ? val_rows : train_rows)
                                .push_back(static_cast<int>(r));
                        }
                        Eigen::MatrixXd Xt(train_rows.size(), X.cols());
                        Eigen::VectorXd yt(train_rows.size());
                        for (std::size_t i = 0; i < train_rows.size(); ++i) {
                            Xt.row(static_cast<Eigen::Index>(i)) = X.row(train_rows[i]);
                            yt[static_cast<Eigen::Index>(i)] = y[train_rows[i]];
                        }
                        const Forest forest =
                            fit_forest(Xt, yt, params, dummy_names,
                                       stream_key(seed, RngStage::kGridSearch, combo, fold));
                        double err = 0.0;
                        for (const int r : val_rows) {
                            err += std::abs(predict(forest, X.row(r)) - y[r]);
                        }
                        total_mae += err / static_cast<double>(val_rows.size());
                    }
                    const double score = total_mae / static_cast<double>(fold_count);
                    if (first || score < best_score) {
                        first = false;
                        best_score = score;
                        best = params;
                    }
                    ++combo;
                }
            }
        }
    }
    return best;
}

std::map<std::string, double> permutation_importance(const Forest& forest,
                                                     const Eigen::Ref<const Eigen::MatrixXd>& X_val,
                                                     const Eigen::Ref<const Eigen::VectorXd>& y_val,
                                                     int repeats, std::mt19937_64& rng) {
    if (X_val.rows() == 0) throw std::invalid_argument("permutation_importance: empty validation set");
    if (repeats < 1) throw std::invalid_argument("permutation_importance: repeats must be >= 1");
    const double baseline = forest_mae(forest, X_val, y_val);
    std::map<std::string, double> importance;
    Eigen::MatrixXd shuffled = X_val;
    std::vector<Eigen::Index> perm(static_cast<std::size_t>(X_val.rows()));
    for (Eigen::Index f = 0; f < X_val.cols(); ++f) {
        double total = 0.0;
        for (int rep = 0; rep < repeats; ++rep) {
            std::iota(perm.begin(), perm.end(), 0);
            shuffle(perm.begin(), perm.end(), rng);
            for (Eigen::Index i = 0; i < X_val.rows(); ++i) {
                shuffled(i, f) = X_val(perm[static_cast<std::size_t>(i)], f);
            }
            total += forest_mae(forest, shuffled, y_val);
        }
        shuffled.col(f) = X_val.col(f);
        importance[forest.feature_names[static_cast<std::size_t>(f)]] =
            total / static_cast<double>(repeats) - baseline;
    }
    return importance;
}

std::vector<std::string> select_top_features(
    const std::vector<std::map<std::string, double>>& per_fold_importances, int k) {
    if (per_fold_importances.empty()) {
        throw std::invalid_argument("select_top_features: no importance maps");
    }
    std::map<std::string, double> summed = per_fold_importances.front();
    for (std::size_t i = 1; i < per_fold_importances.size(); ++i) {
        const auto& fold = per_fold_importances[i];
        if (fold.size() != summed.size()) {
            throw std::invalid_argument("select_top_features: importance maps disagree on keys");
        }
        for (const auto& [name, value] : fold) {
            const auto it = summed.find(name);
            if (it == summed.end()) {
                throw std::invalid_argument("select_top_features: importance maps disagree on keys");
            }
            it->second += value;
        }
    }
    std::vector<std::pair<std::string, double>> ranked(summed.begin(), summed.end());
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    if (k > static_cast<int>(ranked.size())) {
        std::cerr << "select_top_features: only " << ranked.size() << " features available, "
                  << k << " requested; returning all\n";
        k = static_cast<int>(ranked.size());
    }
    std::vector<std::string> out;
    out.reserve(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) out.push_back(ranked[static_cast<std::size_t>(i)].first);
    return out;
}

std::string forest_to_json(const Forest& forest) {
    nlohmann::json doc;
    doc["n_estimators"] = forest.params.n_estimators;
    doc["max_features"] = max_features_name(forest.params.max_features);
    doc["max_depth"] = forest.params.max_depth;
    doc["min_samples_split"] = forest.params.min_samples_split;
    doc["feature_names"] = forest.feature_names;
    nlohmann::json trees = nlohmann::json::array();
    for (const RegressionTree& tree : forest.trees) trees.push_back(node_to_json(tree, 0));
    doc["trees"] = std::move(trees);
    return doc.dump(2);
}

}  // namespace rfclust
