// Command-line surface for the interval-selection toolkit: data ingestion,
// window selection, KL profiles, bootstrap inference, discriminant
// cross-validation, scenario simulation, and the benchmark harness.
//
// Exit codes: 0 success, 2 parse/validation error, 3 numerical failure.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gpkl/gpkl.hpp"

namespace {

using nlohmann::json;

constexpr std::uint64_t kDefaultSeed = 1729;
constexpr int kSchemaVersion = 1;

struct InputOptions {
    std::string x_path;
    std::string y_path;
    std::string data_path;
    std::string grid_path;
    std::string x_label;
};

struct RunConfig {
    double c = 0.1;
    std::vector<double> c_list;
    double eta = 1.0;
    double alpha = 0.05;
    int B = 1000;
    std::uint64_t seed = kDefaultSeed;
    double split_fraction = 0.5;
    bool all_sizes = false;
    bool symmetrized = false;
    bool jitter = false;
    std::optional<double> prior_x;
    unsigned threads = 0;
};

void add_input_options(CLI::App* cmd, InputOptions& in, bool labeled_only = false) {
    if (!labeled_only) {
        cmd->add_option("--x", in.x_path, "curve CSV for group X (grid-times header)");
        cmd->add_option("--y", in.y_path, "curve CSV for group Y (grid-times header)");
    }
    cmd->add_option("--data", in.data_path, "labeled CSV (label,v1,...,vp per row)");
    cmd->add_option("--grid", in.grid_path, "optional grid file with time points");
    cmd->add_option("--x-label", in.x_label,
                    "label mapped to group X (default: lexicographically smaller)");
}

gpkl::SelectOptions select_options(const RunConfig& cfg) {
    gpkl::SelectOptions opts;
    opts.maximal_only = !cfg.all_sizes;
    opts.symmetrized = cfg.symmetrized;
    return opts;
}

struct LoadedGroups {
    gpkl::SampleSet dx;
    gpkl::SampleSet dy;
    std::string label_x = "X";
    std::string label_y = "Y";
};

LoadedGroups load_groups(const InputOptions& in) {
    std::optional<gpkl::Grid> grid;
    if (!in.grid_path.empty()) grid = gpkl::read_grid_file(in.grid_path);
    if (!in.data_path.empty()) {
        auto labeled = gpkl::read_labeled(
            in.data_path, grid,
            in.x_label.empty() ? std::nullopt : std::optional<std::string>(in.x_label));
        return {labeled.samples.group_rows(gpkl::Group::X),
                labeled.samples.group_rows(gpkl::Group::Y), labeled.label_x, labeled.label_y};
    }
    if (in.x_path.empty() || in.y_path.empty())
        throw gpkl::ParseError("provide either --data or both --x and --y");
    gpkl::SampleSet dx = gpkl::read_curves(in.x_path, grid);
    gpkl::SampleSet dy = gpkl::read_curves(in.y_path, grid);
    if (!dx.grid().same_as(dy.grid()))
        throw gpkl::ParseError("grid mismatch between " + in.x_path + " and " + in.y_path);
    return {std::move(dx), std::move(dy), "X", "Y"};
}

gpkl::GaussianParams prepare_params(const gpkl::SampleSet& samples, const RunConfig& cfg) {
    gpkl::GaussianParams params =
        gpkl::shrink_covariance(gpkl::estimate_params(samples), cfg.eta);
    if (cfg.jitter) params = gpkl::add_jitter(params);
    return params;
}

json window_json(const gpkl::Window& w, const gpkl::Grid& grid) {
    return json{{"start", w.start},
                {"size", w.size},
                {"start_time", w.start_time(grid)},
                {"end_time", w.end_time(grid)},
                {"center", w.center_time(grid)},
                {"radius", w.radius(grid)}};
}

json params_json(const RunConfig& cfg) {
    return json{{"eta", cfg.eta},
                {"maximal_only", !cfg.all_sizes},
                {"symmetrized", cfg.symmetrized},
                {"jitter", cfg.jitter}};
}

void emit(const std::string& out_path, const std::string& text) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw gpkl::ParseError("cannot write " + out_path);
    out << text;
}

std::string csv_double(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

int run_select(const InputOptions& in, const RunConfig& cfg, const std::string& out_path) {
    LoadedGroups groups = load_groups(in);
    const gpkl::GaussianParams px = prepare_params(groups.dx, cfg);
    const gpkl::GaussianParams py = prepare_params(groups.dy, cfg);
    const gpkl::SelectionResult sel =
        gpkl::select_interval(px, py, cfg.c, select_options(cfg));
    json result{{"schema_version", kSchemaVersion},
                {"command", "select"},
                {"c", cfg.c},
                {"window", window_json(sel.window, groups.dx.grid())},
                {"kl", sel.value.value},
                {"groups",
                 {{"x", {{"label", groups.label_x}, {"n", groups.dx.count()}}},
                  {"y", {{"label", groups.label_y}, {"n", groups.dy.count()}}}}},
                {"params", params_json(cfg)}};
    emit(out_path, result.dump(2) + "\n");
    return 0;
}

int run_profile(const InputOptions& in, const RunConfig& cfg, const std::string& out_path) {
    LoadedGroups groups = load_groups(in);
    const gpkl::GaussianParams px = prepare_params(groups.dx, cfg);
    const gpkl::GaussianParams py = prepare_params(groups.dy, cfg);
    const gpkl::KLProfile profile = gpkl::kl_profile(px, py, cfg.c, select_options(cfg));
    std::ostringstream out;
    out << "center_time,kl\n";
    for (std::size_t i = 0; i < profile.windows.size(); ++i)
        out << csv_double(profile.windows[i].center_time(groups.dx.grid())) << ','
            << csv_double(profile.values[i]) << '\n';
    emit(out_path, out.str());
    return 0;
}

int run_bootstrap(const InputOptions& in, const RunConfig& cfg, const std::string& out_path,
                  const std::string& centers_path) {
    LoadedGroups groups = load_groups(in);
    gpkl::BootstrapOptions opts;
    opts.select = select_options(cfg);
    opts.threads = cfg.threads;
    opts.jitter = cfg.jitter;
    const gpkl::BootstrapResult boot =
        gpkl::bootstrap_centers(groups.dx, groups.dy, cfg.c, cfg.B, cfg.seed, cfg.eta, opts);
    const auto ci = gpkl::ci_center(boot, cfg.alpha);
    const auto cs = gpkl::confidence_set(boot, cfg.alpha);

    std::ostringstream centers_csv;
    centers_csv << "replicate,center\n";
    for (std::size_t b = 0; b < boot.centers.size(); ++b)
        centers_csv << b << ',' << csv_double(boot.centers[b]) << '\n';
    emit(centers_path, centers_csv.str());

    json result{{"schema_version", kSchemaVersion},
                {"command", "bootstrap"},
                {"c", cfg.c},
                {"B", cfg.B},
                {"seed", cfg.seed},
                {"alpha", cfg.alpha},
                {"point_estimate", window_json(boot.point_estimate, boot.grid)},
                {"ci", {{"lo", ci.first}, {"hi", ci.second}}},
                {"confidence_set", {{"lo", cs.first}, {"hi", cs.second}}},
                {"failures", boot.failures},
                {"centers_csv", centers_path},
                {"params", params_json(cfg)}};
    emit(out_path, result.dump(2) + "\n");
    return 0;
}

int run_classify(const InputOptions& in, const RunConfig& cfg, const std::string& out_path,
                 const std::string& splits_path) {
    std::optional<gpkl::Grid> grid;
    if (!in.grid_path.empty()) grid = gpkl::read_grid_file(in.grid_path);
    auto labeled = gpkl::read_labeled(
        in.data_path, grid,
        in.x_label.empty() ? std::nullopt : std::optional<std::string>(in.x_label));
    std::vector<double> candidates = cfg.c_list.empty() ? std::vector<double>{cfg.c} : cfg.c_list;
    gpkl::CvOptions opts;
    opts.select = select_options(cfg);
    opts.prior_x_override = cfg.prior_x;
    opts.threads = cfg.threads;
    const gpkl::CvResult cv = gpkl::select_c_cv(labeled.samples, candidates, cfg.split_fraction,
                                                cfg.B, cfg.seed, cfg.eta, opts);

    std::ostringstream splits_csv;
    splits_csv << "c,split,err\n";
    for (const gpkl::CvPoint& pt : cv.curve)
        for (std::size_t b = 0; b < pt.split_errors.size(); ++b)
            splits_csv << csv_double(pt.c) << ',' << b << ',' << csv_double(pt.split_errors[b])
                       << '\n';
    emit(splits_path, splits_csv.str());

    json curve = json::array();
    for (const gpkl::CvPoint& pt : cv.curve)
        curve.push_back({{"c", pt.c}, {"mean_err", pt.mean_error}});
    json result{{"schema_version", kSchemaVersion},
                {"command", "classify"},
                {"best_c", cv.best_c},
                {"curve", curve},
                {"B", cfg.B},
                {"seed", cfg.seed},
                {"split", cfg.split_fraction},
                {"splits_csv", splits_path},
                {"params", params_json(cfg)}};
    emit(out_path, result.dump(2) + "\n");
    return 0;
}

int run_simulate(const std::string& scenario_name, Eigen::Index n, Eigen::Index m,
                 Eigen::Index p, std::uint64_t seed, const std::string& out_dir) {
    gpkl::Scenario scenario;
    if (scenario_name == "A") scenario = gpkl::Scenario::A;
    else if (scenario_name == "B") scenario = gpkl::Scenario::B;
    else if (scenario_name == "C") scenario = gpkl::Scenario::C;
    else throw gpkl::ParameterError("scenario must be A, B, or C");
    const gpkl::ScenarioSpec spec = gpkl::ScenarioSpec::make(scenario, p, seed);
    auto [dx, dy] = gpkl::sample_scenario(spec, n, m);
    std::filesystem::create_directories(out_dir);
    const std::string x_path = (std::filesystem::path(out_dir) / "dx.csv").string();
    const std::string y_path = (std::filesystem::path(out_dir) / "dy.csv").string();
    gpkl::write_curves(x_path, dx);
    gpkl::write_curves(y_path, dy);
    json result{{"schema_version", kSchemaVersion},
                {"command", "simulate"},
                {"scenario", scenario_name},
                {"n", n},
                {"m", m},
                {"p", p},
                {"seed", seed},
                {"dx", x_path},
                {"dy", y_path}};
    std::cout << result.dump(2) << "\n";
    return 0;
}

int run_bench(const std::vector<std::string>& scenario_names,
              const std::vector<Eigen::Index>& n_list, const std::vector<Eigen::Index>& p_list,
              std::vector<double> c_list, int M, const RunConfig& cfg,
              const std::string& out_prefix) {
    std::vector<gpkl::Scenario> scenarios;
    for (const std::string& s : scenario_names) {
        if (s == "A") scenarios.push_back(gpkl::Scenario::A);
        else if (s == "B") scenarios.push_back(gpkl::Scenario::B);
        else if (s == "C") scenarios.push_back(gpkl::Scenario::C);
        else throw gpkl::ParameterError("scenario must be A, B, or C");
    }
    gpkl::MonteCarloOptions mc_opts;
    mc_opts.eta = cfg.eta;
    mc_opts.select = select_options(cfg);
    mc_opts.threads = cfg.threads;
    const gpkl::MonteCarloReport report = gpkl::monte_carlo_run(
        scenarios, n_list, p_list, M, gpkl::default_c_grid(), cfg.seed, mc_opts);
    emit(out_prefix + "aijd.csv", report.to_csv());

    if (c_list.empty()) c_list = {0.1, 0.25, 0.5, 0.75, 1.0};
    gpkl::TimingReport timing;
    for (gpkl::Scenario scenario : scenarios) {
        for (Eigen::Index p : p_list) {
            const gpkl::ScenarioSpec spec = gpkl::ScenarioSpec::make(scenario, p, cfg.seed);
            for (Eigen::Index n : n_list) {
                const gpkl::TimingReport part =
                    gpkl::timing_benchmark(spec, n, p, c_list, 5, cfg.eta, mc_opts.select);
                timing.rows.insert(timing.rows.end(), part.rows.begin(), part.rows.end());
            }
        }
    }
    emit(out_prefix + "timing.csv", timing.to_csv());

    json summary = json::array();
    for (const gpkl::AijdSummary& s : report.summaries())
        summary.push_back({{"scenario", gpkl::scenario_name(s.scenario)},
                           {"n", s.n},
                           {"p", s.p},
                           {"q1", s.q1},
                           {"median", s.median},
                           {"q3", s.q3},
                           {"mean", s.mean},
                           {"failures", s.failures}});
    json result{{"schema_version", kSchemaVersion},
                {"command", "bench"},
                {"M", M},
                {"seed", cfg.seed},
                {"aijd_csv", out_prefix + "aijd.csv"},
                {"timing_csv", out_prefix + "timing.csv"},
                {"aijd_summary", summary}};
    std::cout << result.dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Interval selection for Gaussian process data via local KL divergence"};
    app.require_subcommand(1);

    InputOptions in;
    RunConfig cfg;
    std::string out_path;
    std::string centers_path = "centers.csv";
    std::string splits_path = "cv_errors.csv";

    auto add_common = [&](CLI::App* cmd, bool with_c) {
        if (with_c) cmd->add_option("--c", cfg.c, "interval length fraction in (0, 1]");
        cmd->add_option("--eta", cfg.eta, "covariance shrinkage in [0, 1] (default 1 = none)");
        cmd->add_flag("--all-sizes", cfg.all_sizes,
                      "search every window size up to the maximum (default: maximal only)");
        cmd->add_flag("--symmetrized", cfg.symmetrized, "use symmetrized KL");
        cmd->add_flag("--jitter", cfg.jitter,
                      "add the default ridge (1e-8 trace/p) to covariances");
        cmd->add_option("--threads", cfg.threads, "worker threads (0 = auto)");
        cmd->add_option("--out", out_path, "write the result here instead of stdout");
    };

    CLI::App* select_cmd = app.add_subcommand("select", "select the maximal-KL interval");
    add_input_options(select_cmd, in);
    add_common(select_cmd, true);

    CLI::App* profile_cmd =
        app.add_subcommand("profile", "KL value per window center (CSV: center_time,kl)");
    add_input_options(profile_cmd, in);
    add_common(profile_cmd, true);

    CLI::App* boot_cmd =
        app.add_subcommand("bootstrap", "bootstrap CI for the interval center");
    add_input_options(boot_cmd, in);
    add_common(boot_cmd, true);
    boot_cmd->add_option("--B", cfg.B, "bootstrap replicates (default 1000)");
    boot_cmd->add_option("--alpha", cfg.alpha, "CI level alpha (default 0.05)");
    boot_cmd->add_option("--seed", cfg.seed, "RNG seed (default 1729)");
    boot_cmd->add_option("--centers-out", centers_path, "CSV path for the bootstrap centers");

    CLI::App* classify_cmd =
        app.add_subcommand("classify", "cross-validated restricted discriminant analysis");
    add_input_options(classify_cmd, in, /*labeled_only=*/true);
    classify_cmd->get_option("--data")->required();
    add_common(classify_cmd, false);
    classify_cmd->add_option("--c-list", cfg.c_list, "candidate c values")->delimiter(',');
    classify_cmd->add_option("--c", cfg.c, "single candidate c (when --c-list is absent)");
    classify_cmd->add_option("--B", cfg.B, "number of random splits (default 1000)");
    classify_cmd->add_option("--split", cfg.split_fraction, "training fraction (default 0.5)");
    classify_cmd->add_option("--seed", cfg.seed, "RNG seed (default 1729)");
    double prior_x_value = 0.5;
    CLI::Option* priors_opt = classify_cmd->add_option(
        "--priors", prior_x_value, "fixed prior for group X (default: training proportions)");
    classify_cmd->add_option("--splits-out", splits_path, "CSV path for per-split errors");

    std::string scenario_name = "A";
    Eigen::Index sim_n = 100, sim_m = 0, sim_p = 100;
    std::string out_dir = ".";
    CLI::App* simulate_cmd = app.add_subcommand("simulate", "generate scenario data as CSV");
    simulate_cmd->add_option("--scenario", scenario_name, "A, B, or C")->required();
    simulate_cmd->add_option("--n", sim_n, "X curves")->required();
    simulate_cmd->add_option("--m", sim_m, "Y curves (default: n)");
    simulate_cmd->add_option("--p", sim_p, "grid resolution (default 100)");
    simulate_cmd->add_option("--seed", cfg.seed, "RNG seed (default 1729)");
    simulate_cmd->add_option("--out-dir", out_dir, "output directory (default .)");

    std::vector<std::string> bench_scenarios{"A", "B", "C"};
    std::vector<Eigen::Index> n_list{50, 100};
    std::vector<Eigen::Index> p_list{50, 100};
    int M = 1;
    std::string out_prefix;
    CLI::App* bench_cmd =
        app.add_subcommand("bench", "AIJD consistency study and timing benchmark");
    bench_cmd->add_option("--scenarios", bench_scenarios, "scenarios to run")->delimiter(',');
    bench_cmd->add_option("--n-list", n_list, "sample sizes")->delimiter(',');
    bench_cmd->add_option("--p-list", p_list, "grid resolutions")->delimiter(',');
    bench_cmd->add_option("--c-list", cfg.c_list, "c values for the timing table")
        ->delimiter(',');
    bench_cmd->add_option("--M", M, "Monte Carlo replicates (default 1)");
    bench_cmd->add_option("--seed", cfg.seed, "RNG seed (default 1729)");
    double bench_eta = gpkl::kDefaultStudyEta;
    bench_cmd->add_option("--eta", bench_eta, "covariance shrinkage for the study (default 0.9)");
    bench_cmd->add_option("--threads", cfg.threads, "worker threads (0 = auto)");
    bench_cmd->add_option("--out-prefix", out_prefix, "prefix for the CSV tables");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (priors_opt->count() > 0) cfg.prior_x = prior_x_value;
        if (select_cmd->parsed()) return run_select(in, cfg, out_path);
        if (profile_cmd->parsed()) return run_profile(in, cfg, out_path);
        if (boot_cmd->parsed()) return run_bootstrap(in, cfg, out_path, centers_path);
        if (classify_cmd->parsed()) return run_classify(in, cfg, out_path, splits_path);
        if (simulate_cmd->parsed())
            return run_simulate(scenario_name, sim_n, sim_m > 0 ? sim_m : sim_n, sim_p,
                                cfg.seed, out_dir);
        if (bench_cmd->parsed()) {
            cfg.eta = bench_eta;
            return run_bench(bench_scenarios, n_list, p_list, cfg.c_list, M, cfg, out_prefix);
        }
    } catch (const gpkl::SingularMatrixError& e) {
        std::cerr << "error (numerical): " << e.what()
                  << "\nhint: retry with --eta 0.9 (or smaller) or --jitter\n";
        return 3;
    } catch (const gpkl::NumericError& e) {
        std::cerr << "error (numerical): " << e.what() << "\n";
        return 3;
    } catch (const gpkl::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
