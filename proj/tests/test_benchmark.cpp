#include <doctest.h>

#include <Eigen/Dense>
#include <set>

#include "rfclust/benchmark.hpp"
#include "rfclust/rng.hpp"

using namespace rfclust;

namespace {

ProblemInstance sphere_identity(int dim) {
    const SuiteSpec suite = suite_catalog("classic12-single", dim);
    return make_instance(suite.classes[0], 0, 1);
}

}  // namespace

TEST_CASE("sphere identity instance evaluates exactly") {
    ProblemInstance sphere = sphere_identity(10);
    CHECK(evaluate(sphere, Eigen::VectorXd::Zero(10)) == 0.0);
    CHECK(evaluate(sphere, Eigen::VectorXd::Unit(10, 0)) == 1.0);
    CHECK(sphere.evaluation_counter == 2);
}

TEST_CASE("shifted rastrigin attains y_shift at its shifted optimum") {
    const SuiteSpec suite = suite_catalog("classic12-multi5", 10);
    const ProblemClass& rastrigin = suite.classes[3];
    REQUIRE(rastrigin.name == "rastrigin");
    ProblemInstance instance = make_instance(rastrigin, 2, 7);
    const double value = evaluate(instance, instance.x_shift);
    CHECK(value == doctest::Approx(instance.y_shift).epsilon(1e-12));
}

TEST_CASE("precision is the distance to the transformed optimum") {
    ProblemInstance sphere = sphere_identity(10);
    CHECK(precision(sphere, sphere.optimum_value()) == 0.0);
    CHECK(precision(sphere, sphere.optimum_value() + 2.5) == 2.5);
    CHECK(precision(sphere, sphere.optimum_value() - 1e-15) == 0.0);  // clamped
}

TEST_CASE("every class and instance has zero precision at its optimum") {
    for (const char* name : {"classic12-single", "classic12-multi5"}) {
        const SuiteSpec suite = suite_catalog(name, 10);
        for (ProblemInstance& instance : suite_instances(suite, 123)) {
            const double f = evaluate(instance, instance.optimum_location());
            CHECK(std::abs(precision(instance, f)) < 1e-9);
        }
    }
}

TEST_CASE("rotated instances stay orthogonal and keep their optimum inside") {
    SuiteSpec suite = suite_catalog("classic12-multi5", 6);
    for (ProblemClass& cls : suite.classes) cls.rotate_instances = true;
    for (ProblemInstance& instance : suite_instances(suite, 99)) {
        if (instance.rotation) {
            const Eigen::MatrixXd should_be_identity =
                (*instance.rotation) * instance.rotation->transpose();
            CHECK((should_be_identity - Eigen::MatrixXd::Identity(6, 6)).cwiseAbs().maxCoeff() <
                  1e-9);
        }
        const Eigen::VectorXd opt = instance.optimum_location();
        for (int i = 0; i < 6; ++i) {
            CHECK(opt[i] >= instance.problem.lower_bounds[i]);
            CHECK(opt[i] <= instance.problem.upper_bounds[i]);
        }
        const double f = evaluate(instance, opt);
        CHECK(std::abs(precision(instance, f)) < 1e-9);
    }
}

TEST_CASE("make_instance is deterministic and id 0 is the identity") {
    const SuiteSpec suite = suite_catalog("classic12-multi5", 10);
    const ProblemClass& cls = suite.classes[4];

    const ProblemInstance zero = make_instance(cls, 0, 42);
    CHECK(zero.x_shift.isZero(0.0));
    CHECK(zero.y_shift == 0.0);
    CHECK(!zero.rotation);

    const ProblemInstance a = make_instance(cls, 3, 42);
    const ProblemInstance b = make_instance(cls, 3, 42);
    CHECK(a.x_shift == b.x_shift);
    CHECK(a.y_shift == b.y_shift);

    const ProblemInstance c = make_instance(cls, 1, 42);
    const ProblemInstance d = make_instance(cls, 2, 42);
    CHECK(c.x_shift != d.x_shift);
}

TEST_CASE("evaluate is pure apart from the counter") {
    const SuiteSpec suite = suite_catalog("classic12-multi5", 10);
    auto rng = make_rng(5);
    for (const ProblemClass& cls : suite.classes) {
        ProblemInstance instance = make_instance(cls, 1, 11);
        Eigen::VectorXd x(10);
        for (int i = 0; i < 10; ++i) x[i] = uniform_real(rng, -5.0, 5.0);
        const double first = evaluate(instance, x);
        const double second = evaluate(instance, x);
        CHECK(first == second);
    }
    CHECK_THROWS_AS((void)suite_catalog("nope"), std::invalid_argument);
}

TEST_CASE("instances of a class are the same landscape up to shift") {
    const SuiteSpec suite = suite_catalog("classic12-multi5", 10);
    auto rng = make_rng(17);
    for (const ProblemClass& cls : suite.classes) {
        ProblemInstance a = make_instance(cls, 1, 3);
        ProblemInstance b = make_instance(cls, 4, 3);
        for (int trial = 0; trial < 20; ++trial) {
            Eigen::VectorXd g(10);
            for (int i = 0; i < 10; ++i) g[i] = uniform_real(rng, -2.4, 2.4);
            const double fa = evaluate(a, g + a.x_shift) - a.y_shift;
            const double fb = evaluate(b, g + b.x_shift) - b.y_shift;
            CHECK(fa == doctest::Approx(fb).epsilon(1e-10));
        }
    }
}

TEST_CASE("suite catalogs have the documented shapes") {
    const SuiteSpec single = suite_catalog("classic12-single", 10);
    CHECK(single.classes.size() == 12);
    CHECK(suite_instances(single, 1).size() == 12);

    const SuiteSpec multi = suite_catalog("classic12-multi5", 10);
    CHECK(multi.classes.size() == 12);
    CHECK(suite_instances(multi, 1).size() == 60);

    std::set<int> ids;
    for (const ProblemClass& cls : multi.classes) ids.insert(cls.class_id);
    CHECK(ids.size() == 12);
}

TEST_CASE("evaluate rejects bad input") {
    ProblemInstance sphere = sphere_identity(10);
    CHECK_THROWS_AS((void)evaluate(sphere, Eigen::VectorXd::Zero(9)), std::invalid_argument);
    Eigen::VectorXd outside = Eigen::VectorXd::Zero(10);
    outside[3] = 5.5;
    CHECK_THROWS_AS((void)evaluate(sphere, outside), std::invalid_argument);
}

TEST_CASE("base optima evaluate to their declared values") {
    const SuiteSpec suite = suite_catalog("classic12-single", 10);
    for (const ProblemClass& cls : suite.classes) {
        CHECK(std::abs(evaluate_base(cls.function, cls.optimum_location) - cls.optimum_value) <
              1e-9);
    }
}
