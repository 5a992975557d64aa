#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "rfclust/benchmark.hpp"
#include "rfclust/sampling.hpp"

namespace rfclust {

// Named landscape feature values for one problem instance. All vectors
// produced under one configuration share the canonical name ordering.
// sentinel_counts[i] is the number of repetitions in which feature i was
// produced by a documented degenerate-input fallback instead of the regular
// formula; flags are part of the output, never silent.
struct FeatureVector {
    std::string suite;
    int class_id = 0;
    int instance_id = 0;
    std::vector<std::string> names;
    Eigen::VectorXd values;
    Eigen::VectorXi sentinel_counts;

    double value(const std::string& name) const;
};

// Canonical feature names, in output order.
const std::vector<std::string>& feature_names();

// --- y-distribution group -------------------------------------------------

struct DistrFeatures {
    double skewness = 0.0;        // bias-corrected sample skewness
    double kurtosis = 0.0;        // bias-corrected excess kurtosis
    double number_of_peaks = 1.0; // modes of a smoothed histogram density
    bool degenerate = false;      // zero variance input
};

DistrFeatures feature_group_distr(const Eigen::Ref<const Eigen::VectorXd>& y);

// --- meta-model group -------------------------------------------------------

struct MetaFeatures {
    double lin_r2 = 0.0;  // adjusted R^2 of y ~ 1 + x
    double lin_intercept = 0.0;
    double lin_coef_min = 0.0;  // smallest |slope|
    double lin_coef_max = 0.0;
    double lin_coef_max_by_min = 1.0;
    double quad_r2 = 0.0;    // adjusted R^2 of y ~ 1 + x + x^2
    double quad_cond = 1.0;  // max |quadratic coef| / min |quadratic coef|
    bool degenerate = false;       // constant y
    bool ridge_fallback = false;   // singular design, refit with penalty 1e-10
    bool lin_ratio_degenerate = false;
    bool quad_ratio_degenerate = false;
};

MetaFeatures feature_group_meta(const Eigen::Ref<const Eigen::MatrixXd>& X,
                                const Eigen::Ref<const Eigen::VectorXd>& y);

// --- dispersion group -------------------------------------------------------

inline constexpr std::array<double, 4> kDispQuantiles{0.02, 0.05, 0.10, 0.25};

struct DispFeatures {
    // Indexed like the quantile list passed in. ratio = subset / all,
    // diff = all - subset, where "subset" is the statistic over the best
    // q-fraction of points by objective value (ties broken by sample index).
    std::vector<double> ratio_mean, ratio_median, diff_mean, diff_median;
    bool degenerate = false;  // all pairwise distances zero
};

DispFeatures feature_group_disp(const Eigen::Ref<const Eigen::MatrixXd>& X,
                                const Eigen::Ref<const Eigen::VectorXd>& y,
                                const std::vector<double>& quantiles = {
                                    kDispQuantiles.begin(), kDispQuantiles.end()});

// --- information content group ----------------------------------------------

struct IcFeatures {
    double h_max = 0.0;      // maximum information content over the eps grid
    double eps_s = 0.0;      // log10 of the settling epsilon (H < 0.05)
    double eps_max = 0.0;    // epsilon attaining h_max
    double m0 = 0.0;         // fraction of non-neutral symbols at eps = 0
    double eps_ratio = 0.0;  // log10 of the epsilon halving m0
    bool degenerate = false; // all objective values equal
};

IcFeatures feature_group_ic(const Eigen::Ref<const Eigen::MatrixXd>& X,
                            const Eigen::Ref<const Eigen::VectorXd>& y);

// --- nearest-better clustering group -----------------------------------------

struct NbcFeatures {
    double sd_ratio = 1.0;    // sd(nearest neighbor) / sd(nearest better)
    double mean_ratio = 1.0;  // mean(nearest neighbor) / mean(nearest better)
    double correlation = 0.0; // cor of the two distance vectors
    double dist_ratio_cv = 0.0;  // coefficient of variation of their quotient
    double fitness_cor = 0.0;    // cor of the quotient with the fitness rank
    bool no_better = false;      // all y equal: no "better" relation exists
    bool sd_degenerate = false;
    bool cor_degenerate = false;
    bool cv_degenerate = false;
    bool fitness_cor_degenerate = false;
};

NbcFeatures feature_group_nbc(const Eigen::Ref<const Eigen::MatrixXd>& X,
                              const Eigen::Ref<const Eigen::VectorXd>& y);

// --- principal component group ------------------------------------------------

struct PcaFeatures {
    double expl_var_cov_x = 1.0;   // fraction of components for 90% variance
    double expl_var_cor_x = 1.0;
    double expl_var_cov_init = 1.0;  // "init" = the [X | y] matrix
    double expl_var_cor_init = 1.0;
    double expl_var_pc1_cov_x = 1.0;  // variance fraction of the first component
    double expl_var_pc1_cor_x = 1.0;
    double expl_var_pc1_cov_init = 1.0;
    double expl_var_pc1_cor_init = 1.0;
    bool dropped_constant_columns = false;
    bool degenerate = false;  // no variance left at all
};

PcaFeatures feature_group_pca(const Eigen::Ref<const Eigen::MatrixXd>& X,
                              const Eigen::Ref<const Eigen::VectorXd>& y);

// --- full extraction ------------------------------------------------------------

// Runs every group on `repetitions` independent sample designs and takes the
// per-feature median; deterministic in (instance ids, design.seed). Group
// errors on degenerate inputs become sentinel values, never aborts.
FeatureVector compute_features(const ProblemInstance& instance, const SampleDesign& design);

std::vector<FeatureVector> compute_suite_features(const std::vector<ProblemInstance>& instances,
                                                  const SampleDesign& design, int jobs = 1);

}  // namespace rfclust
