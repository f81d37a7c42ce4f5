#include <algorithm>

#include <catch2/catch_amalgamated.hpp>

#include "gpkl/bootstrap.hpp"
#include "gpkl/simulate.hpp"
#include "test_helpers.hpp"

using gpkl::BootstrapOptions;
using gpkl::BootstrapResult;
using gpkl::Grid;
using gpkl::SampleSet;
using gpkl::Scenario;
using gpkl::ScenarioSpec;
using gpkl::Window;

namespace {

std::pair<SampleSet, SampleSet> scenario_data(Scenario s, Eigen::Index p, Eigen::Index n,
                                              std::uint64_t seed) {
    const ScenarioSpec spec = ScenarioSpec::make(s, p, seed);
    return gpkl::sample_scenario(spec, n, n);
}

std::vector<Eigen::Index> identity_indices(gpkl::Rng&, Eigen::Index n) {
    std::vector<Eigen::Index> idx(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) idx[static_cast<std::size_t>(i)] = i;
    return idx;
}

}  // namespace

TEST_CASE("type-7 quantiles") {
    std::vector<double> centers(100);
    for (int i = 0; i < 100; ++i) centers[static_cast<std::size_t>(i)] = i + 1.0;
    CHECK_THAT(gpkl::quantile_sorted(centers, 0.025),
               Catch::Matchers::WithinAbs(3.475, 1e-12));
    CHECK_THAT(gpkl::quantile_sorted(centers, 0.975),
               Catch::Matchers::WithinAbs(97.525, 1e-12));
    CHECK(gpkl::quantile_sorted(centers, 0.0) == 1.0);
    CHECK(gpkl::quantile_sorted(centers, 1.0) == 100.0);
    CHECK_THROWS_AS(gpkl::quantile_sorted({}, 0.5), gpkl::ParameterError);
}

TEST_CASE("identity resample hook reproduces the point estimate") {
    auto [dx, dy] = scenario_data(Scenario::B, 40, 20, 11);
    BootstrapOptions opts;
    opts.resample_hook = identity_indices;
    const BootstrapResult boot = gpkl::bootstrap_centers(dx, dy, 0.2, 1, 99, 0.9, opts);
    REQUIRE(boot.centers.size() == 1);
    CHECK(boot.centers[0] == boot.point_center);
    const auto ci = gpkl::ci_center(boot, 0.05);
    CHECK(ci.first == boot.point_center);
    CHECK(ci.second == boot.point_center);
}

TEST_CASE("fixed seed reproduces the centers bit for bit") {
    auto [dx, dy] = scenario_data(Scenario::B, 40, 25, 21);
    const BootstrapResult a = gpkl::bootstrap_centers(dx, dy, 0.2, 30, 777, 0.9);
    const BootstrapResult b = gpkl::bootstrap_centers(dx, dy, 0.2, 30, 777, 0.9);
    CHECK(a.centers == b.centers);
    CHECK(a.point_estimate == b.point_estimate);

    // serial and parallel schedules agree
    BootstrapOptions serial;
    serial.threads = 1;
    const BootstrapResult c = gpkl::bootstrap_centers(dx, dy, 0.2, 30, 777, 0.9, serial);
    CHECK(a.centers == c.centers);

    const BootstrapResult other = gpkl::bootstrap_centers(dx, dy, 0.2, 30, 778, 0.9);
    CHECK(a.centers != other.centers);
}

TEST_CASE("nested quantile intervals") {
    auto [dx, dy] = scenario_data(Scenario::B, 40, 25, 31);
    const BootstrapResult boot = gpkl::bootstrap_centers(dx, dy, 0.2, 60, 5, 0.9);
    const auto wide = gpkl::ci_center(boot, 0.05);
    const auto narrow = gpkl::ci_center(boot, 0.99);
    CHECK(narrow.first >= wide.first);
    CHECK(narrow.second <= wide.second);
    CHECK_THROWS_AS(gpkl::ci_center(boot, 0.0), gpkl::ParameterError);
    CHECK_THROWS_AS(gpkl::ci_center(boot, 1.0), gpkl::ParameterError);
}

TEST_CASE("confidence set geometry") {
    BootstrapResult synthetic;
    synthetic.grid = Grid::unit_spaced(11);  // times 0..10
    synthetic.radius = 1.0;

    // alpha = 0.5 on these centers puts the CI exactly at (2, 5), so the
    // union of radius-1 balls is exactly (1, 6)
    synthetic.centers = {2.0, 2.0, 2.0, 5.0, 5.0, 5.0};
    const auto ci = gpkl::ci_center(synthetic, 0.5);
    CHECK(ci.first == 2.0);
    CHECK(ci.second == 5.0);
    const auto cs = gpkl::confidence_set(synthetic, 0.5);
    CHECK(cs.first == 1.0);
    CHECK(cs.second == 6.0);

    // degenerate centers: one ball of total length 2 r_c
    synthetic.centers = {4.5, 4.5, 4.5};
    const auto ball = gpkl::confidence_set(synthetic, 0.05);
    CHECK(ball.first == 3.5);
    CHECK(ball.second == 5.5);

    // clipping at the domain edge
    synthetic.centers = {0.5, 0.5};
    const auto clipped = gpkl::confidence_set(synthetic, 0.05);
    CHECK(clipped.first == 0.0);
    CHECK(clipped.second == 1.5);
}

TEST_CASE("failed replicates are counted and bounded") {
    auto [dx, dy] = scenario_data(Scenario::B, 30, 12, 41);
    // constant resamples collapse the covariance to zero: every replicate fails
    auto degenerate = [](gpkl::Rng&, Eigen::Index n) {
        return std::vector<Eigen::Index>(static_cast<std::size_t>(n), 0);
    };
    BootstrapOptions opts;
    opts.resample_hook = degenerate;
    opts.threads = 1;
    CHECK_THROWS_AS(gpkl::bootstrap_centers(dx, dy, 0.2, 20, 3, 0.9, opts),
                    gpkl::NumericError);

    // a single bad replicate (serial order: calls 0 and 1 belong to
    // replicate 0) is within the 10% budget and gets counted
    auto call_count = std::make_shared<int>(0);
    BootstrapOptions one_bad;
    one_bad.threads = 1;
    one_bad.resample_hook = [call_count](gpkl::Rng&, Eigen::Index n) {
        const int call = (*call_count)++;
        if (call == 0) return std::vector<Eigen::Index>(static_cast<std::size_t>(n), 0);
        std::vector<Eigen::Index> idx(static_cast<std::size_t>(n));
        for (Eigen::Index i = 0; i < n; ++i) idx[static_cast<std::size_t>(i)] = i;
        return idx;
    };
    const BootstrapResult ok = gpkl::bootstrap_centers(dx, dy, 0.2, 20, 3, 0.9, one_bad);
    CHECK(ok.failures == 1);
    CHECK(ok.centers.size() == 19);
}

TEST_CASE("validation of B and group sizes") {
    auto [dx, dy] = scenario_data(Scenario::B, 30, 12, 51);
    CHECK_THROWS_AS(gpkl::bootstrap_centers(dx, dy, 0.2, 0, 1, 0.9), gpkl::ParameterError);
    Eigen::MatrixXd one_row = dx.rows().topRows(1);
    const SampleSet tiny(dx.grid(), one_row);
    CHECK_THROWS_AS(gpkl::bootstrap_centers(tiny, dy, 0.2, 10, 1, 0.9), gpkl::ParameterError);
}

TEST_CASE("distinct possible centers are p - k + 1 and collapse as c grows") {
    const Grid g = Grid::unit_spaced(100);
    std::size_t prev = 100;
    for (double c : {0.1, 0.3, 0.5, 0.7, 0.9, 1.0}) {
        const auto windows = gpkl::enumerate_windows(c, g);
        std::vector<double> centers;
        for (const Window& w : windows) centers.push_back(w.center_time(g));
        std::sort(centers.begin(), centers.end());
        centers.erase(std::unique(centers.begin(), centers.end()), centers.end());
        const Eigen::Index k = gpkl::max_window_size(c, g);
        CHECK(centers.size() == static_cast<std::size_t>(100 - k + 1));
        CHECK(centers.size() <= prev);
        prev = centers.size();
    }
    CHECK(prev == 1);  // c = 1: single window, single center
}

TEST_CASE("bootstrap centers concentrate on an identifiable landscape") {
    // Scenario B has a unique bump-anchored optimum; with n = m = 250 the
    // center distribution stays tight (IQR well under 0.2 * lambda(T)).
    auto [dx, dy] = scenario_data(Scenario::B, 100, 250, 61);
    const BootstrapResult boot = gpkl::bootstrap_centers(dx, dy, 0.1, 200, 13, 0.9);
    std::vector<double> sorted = boot.centers;
    std::sort(sorted.begin(), sorted.end());
    const double iqr =
        gpkl::quantile_sorted(sorted, 0.75) - gpkl::quantile_sorted(sorted, 0.25);
    CHECK(iqr <= 0.2 * dx.grid().domain_length());

    // the point estimate lies inside its own bootstrap range (smoke check,
    // not a theorem; warn only)
    if (boot.point_center < sorted.front() || boot.point_center > sorted.back())
        WARN("point estimate outside the bootstrap center range");
}

TEST_CASE("center spread shrinks as c approaches 1") {
    auto [dx, dy] = scenario_data(Scenario::A, 100, 250, 71);
    const BootstrapResult small_c = gpkl::bootstrap_centers(dx, dy, 0.1, 200, 17, 0.9);
    const BootstrapResult large_c = gpkl::bootstrap_centers(dx, dy, 0.9, 200, 17, 0.9);
    auto spread = [](const std::vector<double>& v) {
        const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
        return *hi - *lo;
    };
    CHECK(spread(large_c.centers) <= spread(small_c.centers));
}
