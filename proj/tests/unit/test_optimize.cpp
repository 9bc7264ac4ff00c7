#include <doctest.h>

#include <cmath>

#include "satent/error.hpp"
#include "satent/optimize.hpp"

using namespace satent;

TEST_CASE("concave one-dimensional objective") {
    SearchSpec spec;
    spec.bounds = {{"x", 0.0, 1.0, false}};
    const auto r = maximize([](const std::vector<double>& x) { return -(x[0] - 0.3) * (x[0] - 0.3); }, spec, 1);
    CHECK(r.x[0] == doctest::Approx(0.3).epsilon(1e-3));
    CHECK(r.value >= r.best_grid_value);
}

TEST_CASE("two-dimensional log-scaled objective") {
    SearchSpec spec;
    spec.bounds = {{"a", 0.0, 1.0, false}, {"g", 1.0, 1000.0, true}};
    auto f = [](const std::vector<double>& x) {
        const double lg = std::log(x[1]) - std::log(12.0);
        return 1.0 - (x[0] - 0.62) * (x[0] - 0.62) - 0.1 * lg * lg;
    };
    const auto r = maximize(f, spec, 3);
    CHECK(r.x[0] == doctest::Approx(0.62).epsilon(5e-3));
    CHECK(r.x[1] == doctest::Approx(12.0).epsilon(0.05));
}

TEST_CASE("maximize is deterministic and never worse than the grid") {
    SearchSpec spec;
    spec.bounds = {{"a", 0.0, 1.0, false}, {"b", 0.0, 2.0, false}};
    auto f = [](const std::vector<double>& x) { return std::sin(3.0 * x[0]) * std::cos(x[1]) + 0.1 * x[1]; };
    const auto a = maximize(f, spec, 42);
    const auto b = maximize(f, spec, 42);
    CHECK(a.x == b.x);
    CHECK(a.value == b.value);
    CHECK(a.value >= a.best_grid_value);
    spec.workers = 3;
    const auto c = maximize(f, spec, 42);
    CHECK(c.x == a.x);
}

TEST_CASE("evaluator errors carry the parameter point") {
    SearchSpec spec;
    spec.bounds = {{"x", 0.0, 1.0, false}};
    auto f = [](const std::vector<double>& x) -> double {
        if (x[0] > 0.5) throw DomainError("boom");
        return x[0];
    };
    try {
        (void)maximize(f, spec, 0);
        FAIL("expected an exception");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("x=") != std::string::npos);
    }
}

TEST_CASE("search specification validation") {
    SearchSpec spec;
    spec.bounds = {{"x", 1.0, 0.0, false}};
    CHECK_THROWS((void)maximize([](const std::vector<double>&) { return 0.0; }, spec, 0));
    spec.bounds = {{"x", 0.0, 1.0, true}};
    CHECK_THROWS((void)maximize([](const std::vector<double>&) { return 0.0; }, spec, 0));
}
