#include <map>

#include <catch2/catch_amalgamated.hpp>

#include "gpkl/study.hpp"
#include "test_helpers.hpp"

using gpkl::Scenario;
using gpkl::ScenarioSpec;
using gpkl::Window;

TEST_CASE("default c grid") {
    const auto grid = gpkl::default_c_grid();
    REQUIRE(grid.size() == 19);
    CHECK_THAT(grid.front(), Catch::Matchers::WithinAbs(0.05, 1e-12));
    CHECK_THAT(grid.back(), Catch::Matchers::WithinAbs(0.95, 1e-12));
}

TEST_CASE("aijd hooks: perfect estimation gives 0, disjoint estimation gives 1") {
    const ScenarioSpec spec = ScenarioSpec::make(Scenario::B, 60, 3);
    const std::vector<double> c_grid{0.1, 0.2, 0.3, 0.4};
    std::map<double, Window> truth;
    for (double c : c_grid) truth[c] = Window{0, gpkl::max_window_size(c, spec.grid)};

    gpkl::AijdOptions perfect;
    perfect.estimate_hook = [&](double c) { return truth.at(c); };
    CHECK(gpkl::aijd(spec, 10, 10, c_grid, truth, perfect) == 0.0);

    gpkl::AijdOptions disjoint;
    disjoint.estimate_hook = [&](double c) {
        const Eigen::Index k = gpkl::max_window_size(c, spec.grid);
        return Window{spec.grid.size() - k, k};
    };
    CHECK(gpkl::aijd(spec, 10, 10, c_grid, truth, disjoint) == 1.0);
}

TEST_CASE("aijd lies in [0, 1] and validates its c grid") {
    const ScenarioSpec spec = ScenarioSpec::make(Scenario::B, 50, 4);
    const std::vector<double> c_grid{0.2, 0.4, 0.6, 0.8};
    const double v = gpkl::aijd(spec, 30, 30, c_grid);
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);

    CHECK_THROWS_AS(gpkl::aijd(spec, 30, 30, {0.5}), gpkl::ParameterError);
    CHECK_THROWS_AS(gpkl::aijd(spec, 30, 30, {0.1, 0.3, 0.4}), gpkl::ParameterError);
    CHECK_THROWS_AS(gpkl::aijd(spec, 30, 30, {0.5, 1.0}), gpkl::ParameterError);
}

TEST_CASE("monte carlo report: M = 1 equals a single aijd call") {
    const std::vector<double> c_grid{0.2, 0.4, 0.6};
    const std::uint64_t seed = 10;
    const auto report = gpkl::monte_carlo_run({Scenario::B}, {25}, {40}, 1, c_grid, seed);
    REQUIRE(report.rows.size() == 1);
    CHECK_FALSE(report.rows[0].failed);

    ScenarioSpec spec = ScenarioSpec::make(Scenario::B, 40, seed);
    spec.seed = gpkl::stream_id({seed, static_cast<std::uint64_t>(Scenario::B), 25, 40, 0});
    const double direct = gpkl::aijd(spec, 25, 25, c_grid);
    CHECK(report.rows[0].aijd == direct);
}

TEST_CASE("monte carlo report is schedule independent and summarizable") {
    const std::vector<double> c_grid{0.2, 0.4, 0.6};
    gpkl::MonteCarloOptions serial;
    serial.threads = 1;
    gpkl::MonteCarloOptions parallel;
    parallel.threads = 2;
    const auto a = gpkl::monte_carlo_run({Scenario::B}, {20}, {30}, 6, c_grid, 5, serial);
    const auto b = gpkl::monte_carlo_run({Scenario::B}, {20}, {30}, 6, c_grid, 5, parallel);
    REQUIRE(a.rows.size() == b.rows.size());
    for (std::size_t i = 0; i < a.rows.size(); ++i) CHECK(a.rows[i].aijd == b.rows[i].aijd);

    const auto summaries = a.summaries();
    REQUIRE(summaries.size() == 1);
    CHECK(summaries[0].q1 <= summaries[0].median);
    CHECK(summaries[0].median <= summaries[0].q3);
    CHECK(summaries[0].failures == 0);

    const std::string csv = a.to_csv();
    CHECK(csv.rfind("scenario,n,p,replicate,aijd\n", 0) == 0);
    CHECK(csv.find("B,20,30,0,") != std::string::npos);
}

TEST_CASE("aijd drops as resolution drops (one report pair, non-fatal)") {
    const auto report =
        gpkl::monte_carlo_run({Scenario::A}, {250}, {50, 100}, 50, gpkl::default_c_grid(), 42);
    double med50 = 0.0, med100 = 0.0;
    for (const auto& s : report.summaries()) {
        if (s.p == 50) med50 = s.median;
        if (s.p == 100) med100 = s.median;
    }
    INFO("median AIJD p=50: " << med50 << ", p=100: " << med100);
    if (!(med100 >= med50))
        WARN("AIJD median did not increase with p on this report pair: p=50 " << med50
             << ", p=100 " << med100);
}

TEST_CASE("timing benchmark produces the fixed schema") {
    const ScenarioSpec spec = ScenarioSpec::make(Scenario::A, 60, 9);
    const auto report = gpkl::timing_benchmark(spec, 20, 60, {0.5, 1.0}, 2);
    REQUIRE(report.rows.size() == 2);
    CHECK(report.rows[0].c == 0.5);
    CHECK(report.rows[1].c == 1.0);
    for (const auto& row : report.rows) {
        CHECK(row.seconds >= 0.0);
        CHECK(row.seconds < 5.0);
    }
    CHECK(report.to_csv().rfind("scenario,n,p,c,seconds\n", 0) == 0);
}
