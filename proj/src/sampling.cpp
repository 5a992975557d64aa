#include "rfclust/sampling.hpp"

#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "rfclust/rng.hpp"

namespace rfclust {

namespace {

Eigen::MatrixXd lhs_candidate(int n, int dim, const Eigen::Ref<const Eigen::VectorXd>& lower,
                              const Eigen::Ref<const Eigen::VectorXd>& upper,
                              std::mt19937_64& rng) {
    Eigen::MatrixXd points(n, dim);
    std::vector<int> strata(n);
    for (int d = 0; d < dim; ++d) {
        std::iota(strata.begin(), strata.end(), 0);
        shuffle(strata.begin(), strata.end(), rng);
        const double width = (upper[d] - lower[d]) / static_cast<double>(n);
        for (int i = 0; i < n; ++i) {
            points(i, d) = lower[d] + (static_cast<double>(strata[i]) + uniform01(rng)) * width;
        }
    }
    return points;
}

}  // namespace

Sampler parse_sampler(const std::string& name) {
    if (name == "lhs") return Sampler::kLatinHypercube;
    if (name == "ilhs") return Sampler::kImprovedLatinHypercube;
    throw std::invalid_argument("unknown sampler: '" + name + "'");
}

double min_pairwise_distance(const Eigen::Ref<const Eigen::MatrixXd>& points) {
    const auto n = points.rows();
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
        const double d2 = (points.bottomRows(n - i - 1).rowwise() - points.row(i))
                              .rowwise()
                              .squaredNorm()
                              .minCoeff();
        best = std::min(best, d2);
    }
    return std::sqrt(best);
}

Eigen::MatrixXd lhs_sample(int n, int dim, const Eigen::Ref<const Eigen::VectorXd>& lower,
                           const Eigen::Ref<const Eigen::VectorXd>& upper, Sampler sampler,
                           std::mt19937_64& rng, int candidates) {
    if (n < 1) throw std::invalid_argument("lhs_sample: need at least one point");
    if (lower.size() != dim || upper.size() != dim) {
        throw std::invalid_argument("lhs_sample: bounds dimension mismatch");
    }
    if (sampler == Sampler::kLatinHypercube || n == 1) {
        return lhs_candidate(n, dim, lower, upper, rng);
    }
    Eigen::MatrixXd best;
    double best_dist = -1.0;
    for (int c = 0; c < candidates; ++c) {
        Eigen::MatrixXd candidate = lhs_candidate(n, dim, lower, upper, rng);
        const double dist = min_pairwise_distance(candidate);
        if (dist > best_dist) {
            best_dist = dist;
            best = std::move(candidate);
        }
    }
    return best;
}

}  // namespace rfclust
