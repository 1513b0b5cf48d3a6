#include <doctest.h>

#include "hopspec/validation.hpp"

using namespace hopspec;

namespace {

ValidationOptions quick(std::vector<int> only) {
    ValidationOptions o;
    o.profile = Profile::Quick;
    o.workers = 1;
    o.only = std::move(only);
    return o;
}

}  // namespace

TEST_CASE("cheap criteria pass") {
    auto rep = run_validation(quick({1, 8}));
    REQUIRE(rep.results.size() == 2);
    CHECK(rep.results[0].id == 1);
    CHECK(rep.results[1].id == 8);
    CHECK(rep.all_passed());
    CHECK(rep.to_json().size() == 2);
    CHECK(rep.to_json()[1].at("name") == "basis-combinatorics");
}

TEST_CASE("flipped decay sign breaks the time-domain criterion") {
    auto o = quick({4});
    auto good = run_criterion(4, o);
    CHECK(good.passed);
    o.faults.flip_decay_sign = true;
    auto bad = run_criterion(4, o);
    CHECK_FALSE(bad.passed);
}

TEST_CASE("forced shallow truncation breaks the convergence criterion") {
    auto o = quick({6});
    o.faults.forced_e_max = 2;
    auto r = run_criterion(6, o);
    CHECK_FALSE(r.passed);
}

TEST_CASE("result lines") {
    CriterionResult r{4, "time-vs-frequency", true, "max|dc| = 1.2e-09 (tol 1e-06)", {}, 12.34};
    auto line = format_result_line(r);
    CHECK(line.rfind("PASS  4 time-vs-frequency", 0) == 0);
    CHECK(line.find("max|dc| = 1.2e-09 (tol 1e-06)") != std::string::npos);
    CHECK(line.find("[12.3 s]") != std::string::npos);
    r.passed = false;
    CHECK(format_result_line(r).rfind("FAIL", 0) == 0);
}

TEST_CASE("callback sees every result in order") {
    auto o = quick({8, 1});
    std::vector<int> seen;
    o.on_result = [&](const CriterionResult& r) { seen.push_back(r.id); };
    auto rep = run_validation(o);
    CHECK(seen.size() == rep.results.size());
    CHECK_THROWS_AS(run_criterion(10, o), std::invalid_argument);
    CHECK(parse_profile("full") == Profile::Full);
    CHECK_THROWS_AS(parse_profile("medium"), std::invalid_argument);
}

TEST_CASE("figure recipes") {
    auto recipes = figure_recipes();
    CHECK(recipes.size() == 2 + 6 + 16);
    for (const auto& r : recipes) {
        CHECK(r.axis.values.size() == 60);
        CHECK_NOTHROW(r.model.validate());
    }
}
