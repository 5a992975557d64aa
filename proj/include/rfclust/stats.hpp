#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <vector>

namespace rfclust {

inline double mean_of(const Eigen::Ref<const Eigen::VectorXd>& v) { return v.mean(); }

// Sample standard deviation (n - 1 denominator); 0 for fewer than 2 values.
inline double sample_sd(const Eigen::Ref<const Eigen::VectorXd>& v) {
    const auto n = v.size();
    if (n < 2) return 0.0;
    const double mu = v.mean();
    return std::sqrt((v.array() - mu).square().sum() / static_cast<double>(n - 1));
}

// Pearson correlation; returns 0 when either side has zero variance, with
// *degenerate set when provided.
inline double pearson(const Eigen::Ref<const Eigen::VectorXd>& a,
                      const Eigen::Ref<const Eigen::VectorXd>& b,
                      bool* degenerate = nullptr) {
    const double mu_a = a.mean();
    const double mu_b = b.mean();
    const Eigen::ArrayXd da = a.array() - mu_a;
    const Eigen::ArrayXd db = b.array() - mu_b;
    const double va = (da * da).sum();
    const double vb = (db * db).sum();
    if (va <= 0.0 || vb <= 0.0) {
        if (degenerate) *degenerate = true;
        return 0.0;
    }
    return (da * db).sum() / std::sqrt(va * vb);
}

// Linear-interpolation quantile of a sorted sample (R type 7).
inline double quantile_sorted(const std::vector<double>& sorted, double p) {
    const std::size_t n = sorted.size();
    if (n == 1) return sorted[0];
    const double h = static_cast<double>(n - 1) * p;
    const auto lo = static_cast<std::size_t>(h);
    const std::size_t hi = std::min(lo + 1, n - 1);
    const double frac = h - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

// Median via selection; accepts its argument by value on purpose.
inline double median_unsorted(std::vector<double> values) {
    const std::size_t n = values.size();
    const std::size_t mid = n / 2;
    std::nth_element(values.begin(), values.begin() + mid, values.end());
    const double upper = values[mid];
    if (n % 2 == 1) return upper;
    std::nth_element(values.begin(), values.begin() + mid - 1, values.begin() + mid);
    return 0.5 * (values[mid - 1] + upper);
}

// Ranks with ties averaged, 1-based (rank 1 = smallest).
inline Eigen::VectorXd average_ranks(const Eigen::Ref<const Eigen::VectorXd>& v) {
    const auto n = v.size();
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index a, Eigen::Index b) { return v[a] < v[b]; });
    Eigen::VectorXd ranks(n);
    Eigen::Index i = 0;
    while (i < n) {
        Eigen::Index j = i;
        while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
        const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
        for (Eigen::Index k = i; k <= j; ++k) ranks[order[k]] = avg;
        i = j + 1;
    }
    return ranks;
}

}  // namespace rfclust
