#include "rfclust/benchmark.hpp"

#include <cmath>
#include <stdexcept>

#include "rfclust/rng.hpp"

namespace rfclust {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

double exponent_step(int i, int dim) {
    // i/(D-1), guarded for D == 1 degenerate classes.
    return dim > 1 ? static_cast<double>(i) / static_cast<double>(dim - 1) : 0.0;
}

double sphere(const Eigen::Ref<const Eigen::VectorXd>& z) { return z.squaredNorm(); }

double ellipsoid(const Eigen::Ref<const Eigen::VectorXd>& z) {
    double sum = 0.0;
    for (int i = 0; i < z.size(); ++i) {
        sum += std::pow(1e6, exponent_step(i, static_cast<int>(z.size()))) * z[i] * z[i];
    }
    return sum;
}

double rosenbrock(const Eigen::Ref<const Eigen::VectorXd>& z) {
    double sum = 0.0;
    for (int i = 0; i + 1 < z.size(); ++i) {
        const double a = z[i + 1] - z[i] * z[i];
        const double b = 1.0 - z[i];
        sum += 100.0 * a * a + b * b;
    }
    return sum;
}

double rastrigin(const Eigen::Ref<const Eigen::VectorXd>& z) {
    double sum = 10.0 * static_cast<double>(z.size());
    for (int i = 0; i < z.size(); ++i) {
        sum += z[i] * z[i] - 10.0 * std::cos(kTwoPi * z[i]);
    }
    return sum;
}

double ackley(const Eigen::Ref<const Eigen::VectorXd>& z) {
    const double n = static_cast<double>(z.size());
    const double s1 = z.squaredNorm() / n;
    double s2 = 0.0;
    for (int i = 0; i < z.size(); ++i) s2 += std::cos(kTwoPi * z[i]);
    s2 /= n;
    return 20.0 + std::exp(1.0) - 20.0 * std::exp(-0.2 * std::sqrt(s1)) - std::exp(s2);
}

double griewank(const Eigen::Ref<const Eigen::VectorXd>& z) {
    double prod = 1.0;
    for (int i = 0; i < z.size(); ++i) {
        prod *= std::cos(z[i] / std::sqrt(static_cast<double>(i + 1)));
    }
    return z.squaredNorm() / 4000.0 - prod + 1.0;
}

double schwefel221(const Eigen::Ref<const Eigen::VectorXd>& z) {
    return z.cwiseAbs().maxCoeff();
}

double different_powers(const Eigen::Ref<const Eigen::VectorXd>& z) {
    double sum = 0.0;
    for (int i = 0; i < z.size(); ++i) {
        sum += std::pow(std::abs(z[i]), 2.0 + 4.0 * exponent_step(i, static_cast<int>(z.size())));
    }
    return sum;
}

double abs_slope(const Eigen::Ref<const Eigen::VectorXd>& z) {
    double sum = 0.0;
    for (int i = 0; i < z.size(); ++i) {
        sum += std::pow(10.0, exponent_step(i, static_cast<int>(z.size()))) * std::abs(z[i]);
    }
    return sum;
}

double schaffer_f7(const Eigen::Ref<const Eigen::VectorXd>& z) {
    if (z.size() < 2) return 0.0;
    double sum = 0.0;
    for (int i = 0; i + 1 < z.size(); ++i) {
        const double s = std::sqrt(z[i] * z[i] + z[i + 1] * z[i + 1]);
        const double t = std::sin(50.0 * std::pow(s, 0.2));
        sum += std::sqrt(s) * (1.0 + t * t);
    }
    sum /= static_cast<double>(z.size() - 1);
    return sum * sum;
}

double weierstrass_term(double x) {
    // sum_k a^k cos(2 pi b^k (x + 1/2)), a = 0.5, b = 3, k <= 20.
    double sum = 0.0;
    double ak = 1.0;
    double bk = 1.0;
    for (int k = 0; k <= 20; ++k) {
        sum += ak * std::cos(kTwoPi * bk * (x + 0.5));
        ak *= 0.5;
        bk *= 3.0;
    }
    return sum;
}

double weierstrass(const Eigen::Ref<const Eigen::VectorXd>& z) {
    double sum = 0.0;
    for (int i = 0; i < z.size(); ++i) sum += weierstrass_term(z[i]);
    return sum - static_cast<double>(z.size()) * weierstrass_term(0.0);
}

double bent_cigar(const Eigen::Ref<const Eigen::VectorXd>& z) {
    double sum = z[0] * z[0];
    for (int i = 1; i < z.size(); ++i) sum += 1e6 * z[i] * z[i];
    return sum;
}

struct BaseSpec {
    BaseFunction function;
    const char* name;
    bool optimum_at_ones;  // Rosenbrock; everything else has its optimum at the origin
};

constexpr BaseSpec kBaseSpecs[] = {
    {BaseFunction::kSphere, "sphere", false},
    {BaseFunction::kEllipsoid, "ellipsoid", false},
    {BaseFunction::kRosenbrock, "rosenbrock", true},
    {BaseFunction::kRastrigin, "rastrigin", false},
    {BaseFunction::kAckley, "ackley", false},
    {BaseFunction::kGriewank, "griewank", false},
    {BaseFunction::kSchwefel221, "schwefel221", false},
    {BaseFunction::kDifferentPowers, "diff_powers", false},
    {BaseFunction::kAbsSlope, "abs_slope", false},
    {BaseFunction::kSchafferF7, "schaffer_f7", false},
    {BaseFunction::kWeierstrass, "weierstrass", false},
    {BaseFunction::kBentCigar, "bent_cigar", false},
};

}  // namespace

double evaluate_base(BaseFunction function, const Eigen::Ref<const Eigen::VectorXd>& z) {
    switch (function) {
        case BaseFunction::kSphere: return sphere(z);
        case BaseFunction::kEllipsoid: return ellipsoid(z);
        case BaseFunction::kRosenbrock: return rosenbrock(z);
        case BaseFunction::kRastrigin: return rastrigin(z);
        case BaseFunction::kAckley: return ackley(z);
        case BaseFunction::kGriewank: return griewank(z);
        case BaseFunction::kSchwefel221: return schwefel221(z);
        case BaseFunction::kDifferentPowers: return different_powers(z);
        case BaseFunction::kAbsSlope: return abs_slope(z);
        case BaseFunction::kSchafferF7: return schaffer_f7(z);
        case BaseFunction::kWeierstrass: return weierstrass(z);
        case BaseFunction::kBentCigar: return bent_cigar(z);
    }
    throw std::invalid_argument("unknown base function");
}

Eigen::VectorXd ProblemInstance::optimum_location() const {
    Eigen::VectorXd base = problem.optimum_location;
    if (rotation) base = rotation->transpose() * base;
    return x_shift + base;
}

double evaluate(ProblemInstance& instance, const Eigen::Ref<const Eigen::VectorXd>& x) {
    const int dim = instance.problem.dimension;
    if (x.size() != dim) {
        throw std::invalid_argument("evaluate: expected dimension " + std::to_string(dim) +
                                    ", got " + std::to_string(x.size()));
    }
    for (int i = 0; i < dim; ++i) {
        if (x[i] < instance.problem.lower_bounds[i] || x[i] > instance.problem.upper_bounds[i]) {
            throw std::invalid_argument("evaluate: coordinate " + std::to_string(i) +
                                        " outside domain bounds");
        }
    }
    Eigen::VectorXd z = x - instance.x_shift;
    if (instance.rotation) z = (*instance.rotation) * z;
    ++instance.evaluation_counter;
    return evaluate_base(instance.problem.function, z) + instance.y_shift;
}

double precision(const ProblemInstance& instance, double f_value) {
    const double diff = f_value - instance.optimum_value();
    return diff > 0.0 ? diff : 0.0;
}

ProblemInstance make_instance(const ProblemClass& cls, int instance_id, std::uint64_t seed) {
    if (instance_id < 0) throw std::invalid_argument("instance_id must be non-negative");
    ProblemInstance instance;
    instance.problem = cls;
    instance.instance_id = instance_id;
    instance.x_shift = Eigen::VectorXd::Zero(cls.dimension);
    if (instance_id == 0) return instance;

    auto rng = make_rng(stream_key(seed, RngStage::kInstance,
                                   static_cast<std::uint64_t>(cls.class_id),
                                   static_cast<std::uint64_t>(instance_id)));
    for (int i = 0; i < cls.dimension; ++i) {
        const double range = cls.upper_bounds[i] - cls.lower_bounds[i];
        const double lo = cls.lower_bounds[i] + 0.25 * range;
        const double hi = cls.upper_bounds[i] - 0.25 * range;
        instance.x_shift[i] = uniform_real(rng, lo, hi);
    }
    instance.y_shift = uniform_real(rng, -100.0, 100.0);
    if (cls.rotate_instances) {
        Eigen::MatrixXd g(cls.dimension, cls.dimension);
        for (int r = 0; r < cls.dimension; ++r) {
            for (int c = 0; c < cls.dimension; ++c) g(r, c) = gaussian(rng);
        }
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
        instance.rotation = qr.householderQ();
    }
    // Keep the transformed optimum inside the closed domain.
    Eigen::VectorXd base = cls.optimum_location;
    if (instance.rotation) base = instance.rotation->transpose() * base;
    for (int i = 0; i < cls.dimension; ++i) {
        const double lo = cls.lower_bounds[i] - base[i];
        const double hi = cls.upper_bounds[i] - base[i];
        instance.x_shift[i] = std::min(std::max(instance.x_shift[i], lo), hi);
    }
    return instance;
}

SuiteSpec suite_catalog(const std::string& suite_name, int dimension) {
    if (dimension < 2) throw std::invalid_argument("suite dimension must be >= 2");
    int instances_per_class = 0;
    if (suite_name == "classic12-single") {
        instances_per_class = 1;
    } else if (suite_name == "classic12-multi5") {
        instances_per_class = 5;
    } else {
        throw std::invalid_argument("unknown suite: '" + suite_name + "'");
    }

    SuiteSpec suite;
    suite.name = suite_name;
    suite.instances_per_class = instances_per_class;
    int class_id = 1;
    for (const BaseSpec& spec : kBaseSpecs) {
        ProblemClass cls;
        cls.suite = suite_name;
        cls.class_id = class_id++;
        cls.name = spec.name;
        cls.function = spec.function;
        cls.dimension = dimension;
        cls.lower_bounds = Eigen::VectorXd::Constant(dimension, -5.0);
        cls.upper_bounds = Eigen::VectorXd::Constant(dimension, 5.0);
        cls.optimum_location = spec.optimum_at_ones ? Eigen::VectorXd::Ones(dimension)
                                                    : Eigen::VectorXd::Zero(dimension);
        cls.optimum_value = 0.0;
        suite.classes.push_back(std::move(cls));
    }
    return suite;
}

std::vector<ProblemInstance> suite_instances(const SuiteSpec& suite, std::uint64_t seed) {
    std::vector<ProblemInstance> instances;
    instances.reserve(suite.classes.size() * static_cast<std::size_t>(suite.instances_per_class));
    for (const ProblemClass& cls : suite.classes) {
        for (int id = 0; id < suite.instances_per_class; ++id) {
            instances.push_back(make_instance(cls, id, seed));
        }
    }
    return instances;
}

}  // namespace rfclust
