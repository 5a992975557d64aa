#include "rfclust/features.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "rfclust/parallel.hpp"
#include "rfclust/rng.hpp"
#include "rfclust/stats.hpp"

namespace rfclust {

namespace {

// ---------------------------------------------------------------- histogram

int histogram_peaks(const Eigen::Ref<const Eigen::VectorXd>& y) {
    const auto n = y.size();
    std::vector<double> sorted(y.data(), y.data() + n);
    std::sort(sorted.begin(), sorted.end());
    const double lo = sorted.front();
    const double hi = sorted.back();
    const double range = hi - lo;
    if (range <= 0.0) return 1;

    // Freedman-Diaconis width, falling back to sqrt(n) bins when the IQR
    // collapses under heavy ties.
    const double iqr = quantile_sorted(sorted, 0.75) - quantile_sorted(sorted, 0.25);
    double width = 2.0 * iqr / std::cbrt(static_cast<double>(n));
    if (width <= 0.0) width = range / std::ceil(std::sqrt(static_cast<double>(n)));
    int bins = static_cast<int>(std::ceil(range / width));
    bins = std::max(1, std::min<int>(bins, static_cast<int>(n)));

    std::vector<double> counts(static_cast<std::size_t>(bins), 0.0);
    const double inv_width = static_cast<double>(bins) / range;
    for (Eigen::Index i = 0; i < n; ++i) {
        auto b = static_cast<int>((y[i] - lo) * inv_width);
        b = std::max(0, std::min(b, bins - 1));
        counts[static_cast<std::size_t>(b)] += 1.0;
    }

    // 3-bin moving average (zero-padded), then strict local maxima counted
    // over runs of equal values: the averaging flattens an isolated spike
    // into a short plateau, which still marks exactly one mode.
    std::vector<double> smoothed(static_cast<std::size_t>(bins));
    for (int i = 0; i < bins; ++i) {
        double s = counts[static_cast<std::size_t>(i)];
        if (i > 0) s += counts[static_cast<std::size_t>(i - 1)];
        if (i + 1 < bins) s += counts[static_cast<std::size_t>(i + 1)];
        smoothed[static_cast<std::size_t>(i)] = s / 3.0;
    }
    std::vector<double> runs;
    for (const double s : smoothed) {
        if (runs.empty() || runs.back() != s) runs.push_back(s);
    }
    int peaks = 0;
    for (std::size_t i = 0; i < runs.size(); ++i) {
        const double left = i > 0 ? runs[i - 1] : -1.0;
        const double right = i + 1 < runs.size() ? runs[i + 1] : -1.0;
        if (runs[i] > left && runs[i] > right) ++peaks;
    }
    return peaks;
}

// ------------------------------------------------------------- least squares

struct LeastSquaresFit {
    Eigen::VectorXd coefficients;
    double adjusted_r2 = 0.0;
    bool ridge_fallback = false;
};

LeastSquaresFit fit_least_squares(const Eigen::MatrixXd& design,
                                  const Eigen::Ref<const Eigen::VectorXd>& y) {
    LeastSquaresFit fit;
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    if (qr.rank() < design.cols()) {
        fit.ridge_fallback = true;
        const Eigen::MatrixXd gram =
            design.transpose() * design +
            1e-10 * Eigen::MatrixXd::Identity(design.cols(), design.cols());
        fit.coefficients = gram.ldlt().solve(design.transpose() * y);
    } else {
        fit.coefficients = qr.solve(y);
    }
    const double sse = (y - design * fit.coefficients).squaredNorm();
    const double sst = (y.array() - y.mean()).square().sum();
    const auto n = static_cast<double>(design.rows());
    const auto p = static_cast<double>(design.cols() - 1);  // predictors, intercept excluded
    const double r2 = sst > 0.0 ? 1.0 - sse / sst : 0.0;
    fit.adjusted_r2 = 1.0 - (1.0 - r2) * (n - 1.0) / (n - p - 1.0);
    return fit;
}

// ------------------------------------------------------------ pairwise dists

std::vector<double> pairwise_distances(const Eigen::Ref<const Eigen::MatrixXd>& points) {
    const auto n = points.rows();
    std::vector<double> dists;
    dists.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n - 1) / 2);
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
        const Eigen::VectorXd d2 =
            (points.bottomRows(n - i - 1).rowwise() - points.row(i)).rowwise().squaredNorm();
        for (Eigen::Index k = 0; k < d2.size(); ++k) dists.push_back(std::sqrt(d2[k]));
    }
    return dists;
}

// ------------------------------------------------------------ pca helpers

struct VarianceProfile {
    double frac_components_90 = 1.0;
    double pc1_fraction = 1.0;
    bool degenerate = false;
};

VarianceProfile explained_variance(const Eigen::MatrixXd& symmetric) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(symmetric);
    Eigen::VectorXd lambda = solver.eigenvalues().cwiseMax(0.0);
    std::sort(lambda.data(), lambda.data() + lambda.size(), std::greater<double>());
    const double total = lambda.sum();
    VarianceProfile profile;
    if (total <= 0.0) {
        profile.degenerate = true;
        return profile;
    }
    profile.pc1_fraction = lambda[0] / total;
    double cumulative = 0.0;
    for (Eigen::Index i = 0; i < lambda.size(); ++i) {
        cumulative += lambda[i];
        if (cumulative >= 0.9 * total) {
            profile.frac_components_90 =
                static_cast<double>(i + 1) / static_cast<double>(lambda.size());
            break;
        }
    }
    return profile;
}

Eigen::MatrixXd covariance_of(const Eigen::MatrixXd& data) {
    const Eigen::MatrixXd centered = data.rowwise() - data.colwise().mean();
    return centered.transpose() * centered / static_cast<double>(data.rows() - 1);
}

// Correlation matrix over the non-constant columns; reports whether any
// column had to be dropped.
Eigen::MatrixXd correlation_of(const Eigen::MatrixXd& data, bool* dropped) {
    const Eigen::MatrixXd cov = covariance_of(data);
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < cov.rows(); ++i) {
        if (cov(i, i) > 0.0) keep.push_back(i);
    }
    if (keep.size() < static_cast<std::size_t>(cov.rows())) *dropped = true;
    Eigen::MatrixXd cor(keep.size(), keep.size());
    for (std::size_t a = 0; a < keep.size(); ++a) {
        for (std::size_t b = 0; b < keep.size(); ++b) {
            cor(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
                cov(keep[a], keep[b]) / std::sqrt(cov(keep[a], keep[a]) * cov(keep[b], keep[b]));
        }
    }
    return cor;
}

}  // namespace

double FeatureVector::value(const std::string& name) const {
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (names[i] == name) return values[static_cast<Eigen::Index>(i)];
    }
    throw std::out_of_range("unknown feature: '" + name + "'");
}

const std::vector<std::string>& feature_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out{
            "distr_skewness", "distr_kurtosis", "distr_number_of_peaks",
            "meta_lin_r2", "meta_lin_intercept", "meta_lin_coef_min", "meta_lin_coef_max",
            "meta_lin_coef_max_by_min", "meta_quad_r2", "meta_quad_cond",
        };
        const char* stats[] = {"ratio_mean", "ratio_median", "diff_mean", "diff_median"};
        const char* tags[] = {"02", "05", "10", "25"};
        for (const char* stat : stats) {
            for (const char* tag : tags) {
                out.push_back(std::string("disp_") + stat + "_" + tag);
            }
        }
        for (const char* name : {"ic_h_max", "ic_eps_s", "ic_eps_max", "ic_m0", "ic_eps_ratio"}) {
            out.emplace_back(name);
        }
        for (const char* name : {"nbc_nn_nb_sd_ratio", "nbc_nn_nb_mean_ratio", "nbc_nn_nb_cor",
                                 "nbc_dist_ratio_cv", "nbc_fitness_cor"}) {
            out.emplace_back(name);
        }
        for (const char* name :
             {"pca_expl_var_cov_x", "pca_expl_var_cor_x", "pca_expl_var_cov_init",
              "pca_expl_var_cor_init", "pca_expl_var_pc1_cov_x", "pca_expl_var_pc1_cor_x",
              "pca_expl_var_pc1_cov_init", "pca_expl_var_pc1_cor_init"}) {
            out.emplace_back(name);
        }
        return out;
    }();
    return names;
}

DistrFeatures feature_group_distr(const Eigen::Ref<const Eigen::VectorXd>& y) {
    const auto n = y.size();
    if (n < 4) throw std::invalid_argument("feature_group_distr: need at least 4 values");
    DistrFeatures features;
    const double mu = y.mean();
    const Eigen::ArrayXd d = y.array() - mu;
    const double m2 = (d * d).mean();
    if (m2 <= 0.0) {
        features.degenerate = true;
        return features;  // skewness 0, kurtosis 0, peaks 1
    }
    const double m3 = (d * d * d).mean();
    const double m4 = (d * d * d * d).mean();
    const auto nd = static_cast<double>(n);
    const double g1 = m3 / std::pow(m2, 1.5);
    features.skewness = g1 * std::sqrt(nd * (nd - 1.0)) / (nd - 2.0);
    const double g2 = m4 / (m2 * m2) - 3.0;
    features.kurtosis = ((nd + 1.0) * g2 + 6.0) * (nd - 1.0) / ((nd - 2.0) * (nd - 3.0));
    features.number_of_peaks = histogram_peaks(y);
    return features;
}

MetaFeatures feature_group_meta(const Eigen::Ref<const Eigen::MatrixXd>& X,
                                const Eigen::Ref<const Eigen::VectorXd>& y) {
    const auto n = X.rows();
    const auto dim = X.cols();
    if (n <= 2 * dim + 1) {
        throw std::invalid_argument("feature_group_meta: quadratic design is underdetermined");
    }
    MetaFeatures features;
    const double sst = (y.array() - y.mean()).square().sum();
    if (sst <= 0.0) {
        features.degenerate = true;
        features.lin_intercept = y.mean();
        return features;
    }

    Eigen::MatrixXd lin_design(n, dim + 1);
    lin_design.col(0).setOnes();
    lin_design.rightCols(dim) = X;
    const LeastSquaresFit lin = fit_least_squares(lin_design, y);
    features.lin_r2 = lin.adjusted_r2;
    features.lin_intercept = lin.coefficients[0];
    const Eigen::VectorXd slopes = lin.coefficients.tail(dim).cwiseAbs();
    features.lin_coef_min = slopes.minCoeff();
    features.lin_coef_max = slopes.maxCoeff();
    if (features.lin_coef_min > 0.0) {
        features.lin_coef_max_by_min = features.lin_coef_max / features.lin_coef_min;
    } else {
        features.lin_coef_max_by_min = 0.0;
        features.lin_ratio_degenerate = true;
    }

    Eigen::MatrixXd quad_design(n, 2 * dim + 1);
    quad_design.col(0).setOnes();
    quad_design.middleCols(1, dim) = X;
    quad_design.rightCols(dim) = X.array().square();
    const LeastSquaresFit quad = fit_least_squares(quad_design, y);
    features.quad_r2 = quad.adjusted_r2;
    const Eigen::VectorXd quad_coefs = quad.coefficients.tail(dim).cwiseAbs();
    const double q_min = quad_coefs.minCoeff();
    if (q_min > 0.0) {
        features.quad_cond = quad_coefs.maxCoeff() / q_min;
    } else {
        features.quad_cond = 0.0;
        features.quad_ratio_degenerate = true;
    }
    features.ridge_fallback = lin.ridge_fallback || quad.ridge_fallback;
    return features;
}

DispFeatures feature_group_disp(const Eigen::Ref<const Eigen::MatrixXd>& X,
                                const Eigen::Ref<const Eigen::VectorXd>& y,
                                const std::vector<double>& quantiles) {
    const auto n = X.rows();
    if (n < 2) throw std::invalid_argument("feature_group_disp: need at least 2 points");

    const std::vector<double> all = pairwise_distances(X);
    const double mean_all = std::accumulate(all.begin(), all.end(), 0.0) /
                            static_cast<double>(all.size());
    const double median_all = median_unsorted(all);

    // Best-q subset: stable order by (objective, sample index).
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index a, Eigen::Index b) { return y[a] < y[b]; });

    DispFeatures features;
    features.degenerate = mean_all <= 0.0;
    for (const double q : quantiles) {
        auto k = static_cast<Eigen::Index>(
            std::ceil(q * static_cast<double>(n)));
        k = std::max<Eigen::Index>(2, std::min(k, n));
        Eigen::MatrixXd subset(k, X.cols());
        for (Eigen::Index i = 0; i < k; ++i) subset.row(i) = X.row(order[static_cast<std::size_t>(i)]);
        const std::vector<double> sub = pairwise_distances(subset);
        const double mean_sub = std::accumulate(sub.begin(), sub.end(), 0.0) /
                                static_cast<double>(sub.size());
        const double median_sub = median_unsorted(sub);
        features.ratio_mean.push_back(mean_all > 0.0 ? mean_sub / mean_all : 1.0);
        features.ratio_median.push_back(median_all > 0.0 ? median_sub / median_all : 1.0);
        features.diff_mean.push_back(mean_all - mean_sub);
        features.diff_median.push_back(median_all - median_sub);
    }
    return features;
}

IcFeatures feature_group_ic(const Eigen::Ref<const Eigen::MatrixXd>& X,
                            const Eigen::Ref<const Eigen::VectorXd>& y) {
    const auto n = X.rows();
    if (n < 3) throw std::invalid_argument("feature_group_ic: need at least 3 points");

    // Nearest-neighbor tour starting from the best point; ties by index.
    Eigen::Index current = 0;
    for (Eigen::Index i = 1; i < n; ++i) {
        if (y[i] < y[current]) current = i;
    }
    std::vector<bool> visited(static_cast<std::size_t>(n), false);
    visited[static_cast<std::size_t>(current)] = true;
    std::vector<Eigen::Index> tour{current};
    tour.reserve(static_cast<std::size_t>(n));
    for (Eigen::Index step = 1; step < n; ++step) {
        double best_d2 = std::numeric_limits<double>::infinity();
        Eigen::Index best_j = -1;
        for (Eigen::Index j = 0; j < n; ++j) {
            if (visited[static_cast<std::size_t>(j)]) continue;
            const double d2 = (X.row(j) - X.row(current)).squaredNorm();
            if (d2 < best_d2) {
                best_d2 = d2;
                best_j = j;
            }
        }
        visited[static_cast<std::size_t>(best_j)] = true;
        tour.push_back(best_j);
        current = best_j;
    }

    Eigen::VectorXd dy(n - 1);
    for (Eigen::Index i = 0; i + 1 < n; ++i) dy[i] = y[tour[static_cast<std::size_t>(i + 1)]] -
                                                     y[tour[static_cast<std::size_t>(i)]];
    const double max_abs_dy = dy.cwiseAbs().maxCoeff();

    IcFeatures features;
    if (max_abs_dy <= 0.0) {
        features.degenerate = true;
        return features;  // h_max = 0, everything else sentinel 0
    }

    // Epsilon grid: {0} plus 1000 log-spaced points, scaled by the largest
    // objective change along the tour.
    constexpr int kGridSize = 1000;
    std::vector<double> eps_grid(kGridSize + 1);
    eps_grid[0] = 0.0;
    for (int j = 1; j <= kGridSize; ++j) {
        const double exponent = -5.0 + 20.0 * static_cast<double>(j - 1) /
                                           static_cast<double>(kGridSize - 1);
        eps_grid[static_cast<std::size_t>(j)] = max_abs_dy * std::pow(10.0, exponent);
    }

    const auto symbol_count = dy.size();
    std::vector<int> symbols(static_cast<std::size_t>(symbol_count));
    auto profile_at = [&](double eps, double* entropy, double* partial) {
        for (Eigen::Index i = 0; i < symbol_count; ++i) {
            symbols[static_cast<std::size_t>(i)] = dy[i] > eps ? 1 : (dy[i] < -eps ? -1 : 0);
        }
        int nonzero = 0;
        for (const int s : symbols) nonzero += s != 0;
        *partial = static_cast<double>(nonzero) / static_cast<double>(symbol_count);
        double counts[3][3] = {};
        for (Eigen::Index i = 0; i + 1 < symbol_count; ++i) {
            counts[symbols[static_cast<std::size_t>(i)] + 1]
                  [symbols[static_cast<std::size_t>(i + 1)] + 1] += 1.0;
        }
        const double pairs = static_cast<double>(symbol_count - 1);
        double h = 0.0;
        for (int a = 0; a < 3; ++a) {
            for (int b = 0; b < 3; ++b) {
                if (a == b || counts[a][b] <= 0.0) continue;
                const double p = counts[a][b] / pairs;
                h -= p * std::log2(p);
            }
        }
        *entropy = h;
    };

    double h0 = 0.0;
    profile_at(0.0, &h0, &features.m0);
    features.h_max = h0;
    features.eps_max = 0.0;
    double eps_settle = eps_grid.back();
    double eps_half = eps_grid.back();
    bool found_settle = false;
    bool found_half = false;
    for (int j = 1; j <= kGridSize; ++j) {
        const double eps = eps_grid[static_cast<std::size_t>(j)];
        double h = 0.0;
        double m = 0.0;
        profile_at(eps, &h, &m);
        if (h > features.h_max) {
            features.h_max = h;
            features.eps_max = eps;
        }
        if (!found_settle && h < 0.05) {
            eps_settle = eps;
            found_settle = true;
        }
        if (!found_half && m <= 0.5 * features.m0) {
            eps_half = eps;
            found_half = true;
        }
    }
    features.eps_s = std::log10(eps_settle);
    features.eps_ratio = std::log10(eps_half);
    return features;
}

NbcFeatures feature_group_nbc(const Eigen::Ref<const Eigen::MatrixXd>& X,
                              const Eigen::Ref<const Eigen::VectorXd>& y) {
    const auto n = X.rows();
    if (n < 3) throw std::invalid_argument("feature_group_nbc: need at least 3 points");

    NbcFeatures features;
    if (y.minCoeff() == y.maxCoeff()) {
        features.no_better = true;
        return features;  // ratios 1, correlations 0
    }

    Eigen::VectorXd nearest(n);
    Eigen::VectorXd nearest_better(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        double best = std::numeric_limits<double>::infinity();
        double best_better = std::numeric_limits<double>::infinity();
        for (Eigen::Index j = 0; j < n; ++j) {
            if (j == i) continue;
            const double d2 = (X.row(j) - X.row(i)).squaredNorm();
            best = std::min(best, d2);
            if (y[j] < y[i]) best_better = std::min(best_better, d2);
        }
        nearest[i] = std::sqrt(best);
        nearest_better[i] = std::isfinite(best_better) ? std::sqrt(best_better) : nearest[i];
    }

    const double sd_nb = sample_sd(nearest_better);
    if (sd_nb > 0.0) {
        features.sd_ratio = sample_sd(nearest) / sd_nb;
    } else {
        features.sd_degenerate = true;
    }
    const double mean_nb = nearest_better.mean();
    features.mean_ratio = mean_nb > 0.0 ? nearest.mean() / mean_nb : 1.0;
    features.correlation = pearson(nearest, nearest_better, &features.cor_degenerate);

    Eigen::VectorXd quotient(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        quotient[i] = nearest_better[i] > 0.0 ? nearest[i] / nearest_better[i] : 1.0;
    }
    const double mean_q = quotient.mean();
    if (mean_q > 0.0) {
        features.dist_ratio_cv = sample_sd(quotient) / mean_q;
    } else {
        features.cv_degenerate = true;
    }
    features.fitness_cor = pearson(quotient, average_ranks(y), &features.fitness_cor_degenerate);
    return features;
}

PcaFeatures feature_group_pca(const Eigen::Ref<const Eigen::MatrixXd>& X,
                              const Eigen::Ref<const Eigen::VectorXd>& y) {
    const auto n = X.rows();
    if (n < X.cols() + 2) throw std::invalid_argument("feature_group_pca: too few rows");

    Eigen::MatrixXd with_y(n, X.cols() + 1);
    with_y.leftCols(X.cols()) = X;
    with_y.col(X.cols()) = y;

    PcaFeatures features;
    bool degenerate = false;
    const auto apply = [&degenerate](const VarianceProfile& profile, double* frac, double* pc1) {
        *frac = profile.frac_components_90;
        *pc1 = profile.pc1_fraction;
        degenerate = degenerate || profile.degenerate;
    };
    apply(explained_variance(covariance_of(X)), &features.expl_var_cov_x,
          &features.expl_var_pc1_cov_x);
    apply(explained_variance(correlation_of(X, &features.dropped_constant_columns)),
          &features.expl_var_cor_x, &features.expl_var_pc1_cor_x);
    apply(explained_variance(covariance_of(with_y)), &features.expl_var_cov_init,
          &features.expl_var_pc1_cov_init);
    apply(explained_variance(correlation_of(with_y, &features.dropped_constant_columns)),
          &features.expl_var_cor_init, &features.expl_var_pc1_cor_init);
    features.degenerate = degenerate;
    return features;
}

namespace {

constexpr std::size_t kFeatureCount = 44;

struct RepetitionResult {
    std::array<double, kFeatureCount> values{};
    std::array<bool, kFeatureCount> flags{};
};

RepetitionResult run_groups(const Eigen::Ref<const Eigen::MatrixXd>& X,
                            const Eigen::Ref<const Eigen::VectorXd>& y) {
    RepetitionResult rep;
    std::size_t at = 0;
    const auto put = [&](double value, bool flag) {
        rep.values[at] = value;
        rep.flags[at] = flag;
        ++at;
    };

    const DistrFeatures distr = feature_group_distr(y);
    put(distr.skewness, distr.degenerate);
    put(distr.kurtosis, distr.degenerate);
    put(distr.number_of_peaks, distr.degenerate);

    const MetaFeatures meta = feature_group_meta(X, y);
    const bool meta_flag = meta.degenerate || meta.ridge_fallback;
    put(meta.lin_r2, meta_flag);
    put(meta.lin_intercept, meta_flag);
    put(meta.lin_coef_min, meta_flag);
    put(meta.lin_coef_max, meta_flag);
    put(meta.lin_coef_max_by_min, meta_flag || meta.lin_ratio_degenerate);
    put(meta.quad_r2, meta_flag);
    put(meta.quad_cond, meta_flag || meta.quad_ratio_degenerate);

    const DispFeatures disp = feature_group_disp(X, y);
    for (const double v : disp.ratio_mean) put(v, disp.degenerate);
    for (const double v : disp.ratio_median) put(v, disp.degenerate);
    for (const double v : disp.diff_mean) put(v, disp.degenerate);
    for (const double v : disp.diff_median) put(v, disp.degenerate);

    const IcFeatures ic = feature_group_ic(X, y);
    put(ic.h_max, ic.degenerate);
    put(ic.eps_s, ic.degenerate);
    put(ic.eps_max, ic.degenerate);
    put(ic.m0, ic.degenerate);
    put(ic.eps_ratio, ic.degenerate);

    const NbcFeatures nbc = feature_group_nbc(X, y);
    put(nbc.sd_ratio, nbc.no_better || nbc.sd_degenerate);
    put(nbc.mean_ratio, nbc.no_better);
    put(nbc.correlation, nbc.no_better || nbc.cor_degenerate);
    put(nbc.dist_ratio_cv, nbc.no_better || nbc.cv_degenerate);
    put(nbc.fitness_cor, nbc.no_better || nbc.fitness_cor_degenerate);

    const PcaFeatures pca = feature_group_pca(X, y);
    const bool pca_flag = pca.degenerate || pca.dropped_constant_columns;
    put(pca.expl_var_cov_x, pca_flag);
    put(pca.expl_var_cor_x, pca_flag);
    put(pca.expl_var_cov_init, pca_flag);
    put(pca.expl_var_cor_init, pca_flag);
    put(pca.expl_var_pc1_cov_x, pca_flag);
    put(pca.expl_var_pc1_cor_x, pca_flag);
    put(pca.expl_var_pc1_cov_init, pca_flag);
    put(pca.expl_var_pc1_cor_init, pca_flag);

    if (at != kFeatureCount) throw std::logic_error("feature assembly out of sync");
    return rep;
}

}  // namespace

FeatureVector compute_features(const ProblemInstance& instance, const SampleDesign& design) {
    if (design.sample_size < 4 * instance.dimension()) {
        throw std::invalid_argument("sample_size must be at least 4 * dimension");
    }
    if (design.repetitions < 1) throw std::invalid_argument("repetitions must be positive");

    const auto reps = static_cast<std::size_t>(design.repetitions);
    std::vector<RepetitionResult> all(reps);
    for (std::size_t rep = 0; rep < reps; ++rep) {
        auto rng = make_rng(stream_key(design.seed, RngStage::kSampling,
                                       static_cast<std::uint64_t>(instance.problem.class_id),
                                       static_cast<std::uint64_t>(instance.instance_id),
                                       static_cast<std::uint64_t>(rep)));
        const Eigen::MatrixXd X =
            lhs_sample(design.sample_size, instance.dimension(), instance.problem.lower_bounds,
                       instance.problem.upper_bounds, design.sampler, rng);
        ProblemInstance scratch = instance;
        Eigen::VectorXd y(X.rows());
        for (Eigen::Index i = 0; i < X.rows(); ++i) y[i] = evaluate(scratch, X.row(i));
        all[rep] = run_groups(X, y);
    }

    FeatureVector out;
    out.suite = instance.problem.suite;
    out.class_id = instance.problem.class_id;
    out.instance_id = instance.instance_id;
    out.names = feature_names();
    out.values.resize(static_cast<Eigen::Index>(kFeatureCount));
    out.sentinel_counts = Eigen::VectorXi::Zero(static_cast<Eigen::Index>(kFeatureCount));
    std::vector<double> column(reps);
    for (std::size_t f = 0; f < kFeatureCount; ++f) {
        int flagged = 0;
        for (std::size_t rep = 0; rep < reps; ++rep) {
            column[rep] = all[rep].values[f];
            flagged += all[rep].flags[f] ? 1 : 0;
        }
        out.values[static_cast<Eigen::Index>(f)] = median_unsorted(column);
        out.sentinel_counts[static_cast<Eigen::Index>(f)] = flagged;
    }
    return out;
}

std::vector<FeatureVector> compute_suite_features(const std::vector<ProblemInstance>& instances,
                                                  const SampleDesign& design, int jobs) {
    std::vector<FeatureVector> out(instances.size());
    parallel_for(instances.size(), jobs,
                 [&](std::size_t i) { out[i] = compute_features(instances[i], design); });
    return out;
}

}  // namespace rfclust
