#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace rfclust {

enum class BaseFunction {
    kSphere,
    kEllipsoid,
    kRosenbrock,
    kRastrigin,
    kAckley,
    kGriewank,
    kSchwefel221,
    kDifferentPowers,
    kAbsSlope,
    kSchafferF7,
    kWeierstrass,
    kBentCigar,
};

// Evaluates the untransformed base function at z.
double evaluate_base(BaseFunction function, const Eigen::Ref<const Eigen::VectorXd>& z);

// A base test function with a closed-form optimum. Immutable once built;
// safe to share across threads.
struct ProblemClass {
    std::string suite;  // catalog the class belongs to; empty for ad-hoc classes
    int class_id = 0;
    std::string name;
    BaseFunction function = BaseFunction::kSphere;
    int dimension = 0;
    Eigen::VectorXd lower_bounds;
    Eigen::VectorXd upper_bounds;
    Eigen::VectorXd optimum_location;  // of the base function
    double optimum_value = 0.0;
    bool rotate_instances = false;
};

// A transformed variant of a problem class. evaluate() computes
// f(R * (x - x_shift)) + y_shift and bumps evaluation_counter, which makes
// evaluation non-reentrant per instance: give each worker its own copy.
struct ProblemInstance {
    ProblemClass problem;
    int instance_id = 0;
    Eigen::VectorXd x_shift;
    double y_shift = 0.0;
    std::optional<Eigen::MatrixXd> rotation;
    std::uint64_t evaluation_counter = 0;

    int dimension() const { return problem.dimension; }
    // Location of the transformed optimum: x_shift + R^T * base optimum.
    Eigen::VectorXd optimum_location() const;
    double optimum_value() const { return problem.optimum_value + y_shift; }
};

// Throws std::invalid_argument on dimension mismatch or x outside the
// domain bounds; optimizers clamp before calling.
double evaluate(ProblemInstance& instance, const Eigen::Ref<const Eigen::VectorXd>& x);

// Solution precision: f_value minus the transformed optimum value, clamped
// to be non-negative against rounding.
double precision(const ProblemInstance& instance, double f_value);

// Deterministic in (class_id, instance_id, seed). Instance 0 is the
// identity transform; instances >= 1 draw x_shift uniformly from the
// central 50% of the domain and y_shift uniformly from [-100, 100], then
// nudge x_shift so the transformed optimum stays inside the bounds.
ProblemInstance make_instance(const ProblemClass& cls, int instance_id, std::uint64_t seed);

struct SuiteSpec {
    std::string name;
    int instances_per_class = 1;
    std::vector<ProblemClass> classes;
};

// Known suites: "classic12-single" (12 classes x 1 instance) and
// "classic12-multi5" (12 classes x 5 instances). Throws
// std::invalid_argument for anything else or dimension < 2.
SuiteSpec suite_catalog(const std::string& suite_name, int dimension = 10);

// All instances of a suite, ordered by (class_id, instance_id).
std::vector<ProblemInstance> suite_instances(const SuiteSpec& suite, std::uint64_t seed);

}  // namespace rfclust
