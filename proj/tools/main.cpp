#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rfclust/csv.hpp"
#include "rfclust/experiment.hpp"
#include "rfclust/io.hpp"
#include "rfclust/version.hpp"

namespace {

using nlohmann::json;
using namespace rfclust;

json load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::string first_line;
    std::getline(in, first_line);
    std::stringstream rest;
    if (!first_line.empty() && first_line.front() != '#') rest << first_line << '\n';
    rest << in.rdbuf();
    return json::parse(rest.str());
}

std::vector<std::string> split_list(const std::string& csv) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(csv);
    while (std::getline(in, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

// Values from --config override command-line flags.
template <typename T>
void override_from(const json& config, const char* key, T* value) {
    if (config.contains(key)) *value = config[key].get<T>();
}

struct AlgorithmTable {
    std::vector<DEConfig> configs;

    DEConfig resolve(const std::string& id) const {
        for (const DEConfig& config : configs) {
            if (config.algorithm_id == id) return config;
        }
        throw std::invalid_argument("unknown algorithm id: '" + id + "'");
    }
};

AlgorithmTable algorithm_table(const json& config, int dimension, int budget_factor, int runs,
                               int population_size, std::uint64_t seed) {
    AlgorithmTable table;
    table.configs = default_de_configs(dimension, budget_factor, runs, seed);
    if (population_size > 0) {
        for (DEConfig& de : table.configs) de.population_size = population_size;
    }
    if (config.contains("de_configs")) {
        for (const auto& entry : config["de_configs"]) {
            DEConfig de;
            de.algorithm_id = entry.at("id").get<std::string>();
            de.strategy = parse_strategy(entry.at("strategy").get<std::string>());
            de.scale_factor = entry.at("F").get<double>();
            de.crossover_rate = entry.at("Cr").get<double>();
            de.population_size = entry.value("population_size",
                                             population_size > 0 ? population_size : dimension);
            de.budget = budget_factor * dimension;
            de.runs = runs;
            de.seed = seed;
            // Replace a preset with the same id, otherwise append.
            bool replaced = false;
            for (DEConfig& existing : table.configs) {
                if (existing.algorithm_id == de.algorithm_id) {
                    existing = de;
                    replaced = true;
                    break;
                }
            }
            if (!replaced) table.configs.push_back(de);
        }
    }
    return table;
}

int cmd_suite_list(const std::string& name, int dimension, std::uint64_t seed,
                   const std::string& format, const std::string& out) {
    if (format != "csv") throw std::invalid_argument("unknown format: '" + format + "'");
    const SuiteSpec suite = suite_catalog(name, dimension);
    const auto instances = suite_instances(suite, seed);
    if (out.empty() || out == "-") {
        const auto tmp = std::filesystem::temp_directory_path() / "rfclust_suite_list.csv";
        write_suite_csv(tmp, instances, seed);
        std::ifstream in(tmp);
        std::cout << in.rdbuf();
        std::filesystem::remove(tmp);
    } else {
        write_suite_csv(out, instances, seed);
    }
    return 0;
}

int cmd_optimize(const json& config_json, std::string suite_name, int dimension,
                 std::string algs_csv, int budget_factor, int runs, int population_size,
                 std::uint64_t seed, std::string out, std::string agg_out, int jobs) {
    override_from(config_json, "suite", &suite_name);
    override_from(config_json, "dimension", &dimension);
    override_from(config_json, "budget_factor", &budget_factor);
    override_from(config_json, "runs", &runs);
    override_from(config_json, "population_size", &population_size);
    override_from(config_json, "master_seed", &seed);
    override_from(config_json, "jobs", &jobs);
    std::vector<std::string> algs = split_list(algs_csv);
    if (config_json.contains("algorithms")) {
        algs = config_json["algorithms"].get<std::vector<std::string>>();
    }
    if (algs.empty()) algs = {"de1", "de2", "de3"};

    const AlgorithmTable table =
        algorithm_table(config_json, dimension, budget_factor, runs, population_size, seed);
    const SuiteSpec suite = suite_catalog(suite_name, dimension);
    const auto instances = suite_instances(suite, seed);

    std::vector<PerformanceRecord> all_records;
    for (const std::string& id : algs) {
        const DEConfig de = table.resolve(id);
        const auto records = collect_performance(de, instances, jobs);
        all_records.insert(all_records.end(), records.begin(), records.end());
    }
    if (agg_out.empty()) {
        const std::filesystem::path base(out);
        agg_out = (base.parent_path() / (base.stem().string() + "_agg.csv")).string();
    }
    write_performance_csv(out, all_records, seed);
    write_performance_aggregate_csv(agg_out, all_records, seed);
    std::cerr << "wrote " << out << " and " << agg_out << "\n";
    return 0;
}

int cmd_features(const json& config_json, std::string suite_name, int dimension,
                 int sample_factor, int repetitions, std::string sampler_name,
                 std::uint64_t seed, std::string out, int jobs) {
    override_from(config_json, "suite", &suite_name);
    override_from(config_json, "dimension", &dimension);
    override_from(config_json, "sample_factor", &sample_factor);
    override_from(config_json, "repetitions", &repetitions);
    override_from(config_json, "sampler", &sampler_name);
    override_from(config_json, "master_seed", &seed);
    override_from(config_json, "jobs", &jobs);

    const SuiteSpec suite = suite_catalog(suite_name, dimension);
    const auto instances = suite_instances(suite, seed);
    SampleDesign design;
    design.sample_size = sample_factor * dimension;
    design.repetitions = repetitions;
    design.sampler = parse_sampler(sampler_name);
    design.seed = seed;
    const auto features = compute_suite_features(instances, design, jobs);
    write_features_csv(out, features, seed);
    std::cerr << "wrote " << out << "\n";
    return 0;
}

int cmd_experiment(const json& config_json, std::string perf, std::string features,
                   std::string out_dir, std::string thresholds_csv, std::string portfolios_csv,
                   std::string aggregation, std::string normalize, std::string algs_csv,
                   std::uint64_t seed, int jobs, int importance_repeats) {
    ExperimentConfig config;
    config.master_seed = seed;
    config.jobs = jobs;
    config.importance_repeats = importance_repeats;
    config.aggregation = parse_aggregation(aggregation);
    config.normalize = parse_normalization(normalize);
    config.algorithms = split_list(algs_csv);
    if (!thresholds_csv.empty()) {
        config.thresholds.clear();
        for (const auto& t : split_list(thresholds_csv)) {
            config.thresholds.push_back(parse_double(t));
        }
    }
    if (!portfolios_csv.empty()) {
        config.portfolios.clear();
        for (const auto& p : split_list(portfolios_csv)) config.portfolios.push_back(std::stoi(p));
    }

    override_from(config_json, "master_seed", &config.master_seed);
    override_from(config_json, "jobs", &config.jobs);
    override_from(config_json, "importance_repeats", &config.importance_repeats);
    override_from(config_json, "thresholds", &config.thresholds);
    override_from(config_json, "portfolios", &config.portfolios);
    override_from(config_json, "algorithms", &config.algorithms);
    if (config_json.contains("aggregation")) {
        config.aggregation = parse_aggregation(config_json["aggregation"].get<std::string>());
    }
    if (config_json.contains("normalize")) {
        config.normalize = parse_normalization(config_json["normalize"].get<std::string>());
    }
    override_from(config_json, "out_dir", &out_dir);
    override_from(config_json, "perf", &perf);
    override_from(config_json, "features", &features);

    const ExperimentBundle bundle = run_experiment(perf, features, config);
    write_experiment_outputs(bundle, out_dir);
    std::cerr << "wrote experiment outputs to " << out_dir << "\n";
    return 0;
}

int cmd_diagnose(const std::string& features_path, const std::string& perf_path,
                 const std::string& algorithm, int focus_class,
                 const std::string& portfolio_file, int top, const std::string& normalize,
                 const std::string& out, std::uint64_t seed) {
    const auto features = read_features_csv(features_path);
    auto records = read_performance_csv(perf_path);
    std::vector<PerformanceRecord> filtered;
    for (const auto& record : records) {
        if (record.algorithm_id == algorithm) filtered.push_back(record);
    }
    if (filtered.empty()) {
        throw std::invalid_argument("algorithm '" + algorithm +
                                    "' has no rows in the performance data");
    }

    std::vector<std::string> portfolio = feature_names();
    if (!portfolio_file.empty()) {
        const CsvTable table = read_csv(portfolio_file);
        const auto feature_col = table.column("feature");
        portfolio.clear();
        for (const auto& row : table.rows) {
            portfolio.push_back(row[feature_col]);
            if (top > 0 && static_cast<int>(portfolio.size()) == top) break;
        }
    }

    const Dataset dataset = make_dataset(features, filtered, portfolio);
    SimilarityConfig config;
    config.normalize = parse_normalization(normalize);
    const auto rows = similarity_diagnostics(dataset, focus_class, config);

    CsvWriter writer(out, seed);
    writer.header({"focus_instance", "other_class", "other_instance", "similarity",
                   "performance_gap"});
    for (const DiagnosticsRow& row : rows) {
        writer.row({std::to_string(row.focus_instance), std::to_string(row.other_class),
                    std::to_string(row.other_instance), format_double(row.similarity),
                    format_double(row.performance_gap)});
    }
    std::cerr << "wrote " << out << "\n";
    return 0;
}

int cmd_report(const std::string& bundle_path, const std::string& out_dir,
               const std::string& format) {
    const ExperimentBundle bundle = load_bundle(bundle_path);
    render_report(bundle, out_dir, parse_report_format(format));
    std::cerr << "wrote report to " << out_dir << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Landscape-aware algorithm performance prediction pipeline"};
    app.set_version_flag("--version", std::string("rfclust ") + kVersion);
    app.require_subcommand(1);

    // suite list
    auto* suite = app.add_subcommand("suite", "Benchmark suite utilities");
    suite->require_subcommand(1);
    auto* suite_list = suite->add_subcommand("list", "Dump the instance catalog");
    std::string suite_name = "classic12-multi5";
    int dimension = 10;
    std::uint64_t seed = 1;
    std::string format = "csv";
    std::string out;
    suite_list->add_option("--name", suite_name, "Suite name");
    suite_list->add_option("--dimension", dimension, "Problem dimension");
    suite_list->add_option("--seed", seed, "Master seed");
    suite_list->add_option("--format", format, "Output format (csv)");
    suite_list->add_option("--out", out, "Output file; '-' or empty for stdout");

    // optimize
    auto* optimize = app.add_subcommand("optimize", "Collect DE performance data");
    std::string opt_suite = "classic12-multi5";
    int opt_dim = 10;
    std::string algs = "de1,de2,de3";
    int budget_factor = 500;
    int runs = 30;
    int population = 0;
    std::uint64_t opt_seed = 1;
    std::string opt_out = "perf.csv";
    std::string agg_out;
    int opt_jobs = 1;
    std::string opt_config;
    optimize->add_option("--suite", opt_suite, "Suite name");
    optimize->add_option("--dimension", opt_dim, "Problem dimension");
    optimize->add_option("--algs", algs, "Comma-separated algorithm ids");
    optimize->add_option("--budget-factor", budget_factor, "Evaluations per dimension");
    optimize->add_option("--runs", runs, "Runs per instance");
    optimize->add_option("--pop", population, "Population size (0 = dimension)");
    optimize->add_option("--seed", opt_seed, "Master seed");
    optimize->add_option("--out", opt_out, "Per-run output CSV");
    optimize->add_option("--agg-out", agg_out, "Aggregate output CSV");
    optimize->add_option("--jobs", opt_jobs, "Worker threads");
    optimize->add_option("--config", opt_config, "JSON config file; overrides flags");

    // features
    auto* features = app.add_subcommand("features", "Compute landscape features");
    std::string feat_suite = "classic12-multi5";
    int feat_dim = 10;
    int sample_factor = 800;
    int repetitions = 30;
    std::string sampler = "ilhs";
    std::uint64_t feat_seed = 1;
    std::string feat_out = "features.csv";
    int feat_jobs = 1;
    std::string feat_config;
    features->add_option("--suite", feat_suite, "Suite name");
    features->add_option("--dimension", feat_dim, "Problem dimension");
    features->add_option("--sample-factor", sample_factor, "Samples per dimension");
    features->add_option("--reps", repetitions, "Feature computation repetitions");
    features->add_option("--sampler", sampler, "Sampler (lhs or ilhs)");
    features->add_option("--seed", feat_seed, "Master seed");
    features->add_option("--out", feat_out, "Output CSV");
    features->add_option("--jobs", feat_jobs, "Worker threads");
    features->add_option("--config", feat_config, "JSON config file; overrides flags");

    // experiment
    auto* experiment = app.add_subcommand("experiment", "Run the LOPO prediction experiment");
    std::string exp_perf = "perf_agg.csv";
    std::string exp_features = "features.csv";
    std::string exp_out = "experiment_out";
    std::string thresholds;
    std::string portfolios;
    std::string aggregation = "weighted_mean";
    std::string normalize = "min_max_on_train";
    std::string exp_algs;
    std::uint64_t exp_seed = 1;
    int exp_jobs = 1;
    int importance_repeats = 5;
    std::string exp_config;
    experiment->add_option("--perf", exp_perf, "Performance CSV (per-run or aggregate)");
    experiment->add_option("--features", exp_features, "Features CSV");
    experiment->add_option("--out-dir", exp_out, "Output directory");
    experiment->add_option("--thresholds", thresholds, "Comma-separated similarity thresholds");
    experiment->add_option("--portfolios", portfolios, "Comma-separated portfolio sizes");
    experiment->add_option("--aggregation", aggregation,
                           "Neighbor aggregation (weighted_mean, mean, median)");
    experiment->add_option("--normalize", normalize,
                           "Feature normalization (min_max_on_train, none)");
    experiment->add_option("--algs", exp_algs, "Restrict to these algorithm ids");
    experiment->add_option("--seed", exp_seed, "Master seed");
    experiment->add_option("--jobs", exp_jobs, "Worker threads");
    experiment->add_option("--importance-repeats", importance_repeats,
                           "Permutation importance repeats");
    experiment->add_option("--config", exp_config, "JSON config file; overrides flags");

    // diagnose
    auto* diagnose = app.add_subcommand("diagnose", "Similarity vs performance-gap scatter data");
    std::string diag_features = "features.csv";
    std::string diag_perf = "perf_agg.csv";
    std::string diag_alg = "de1";
    int focus_class = 1;
    std::string portfolio_file;
    int top = 0;
    std::string diag_normalize = "min_max_on_train";
    std::string diag_out = "diagnostics.csv";
    std::uint64_t diag_seed = 1;
    diagnose->add_option("--features", diag_features, "Features CSV");
    diagnose->add_option("--perf", diag_perf, "Performance CSV");
    diagnose->add_option("--alg", diag_alg, "Algorithm id");
    diagnose->add_option("--focus-class", focus_class, "Class to diagnose");
    diagnose->add_option("--portfolio-file", portfolio_file,
                         "Importance CSV restricting the portfolio");
    diagnose->add_option("--top", top, "Take only the top-k rows of the portfolio file");
    diagnose->add_option("--normalize", diag_normalize, "Feature normalization");
    diagnose->add_option("--out", diag_out, "Output CSV");
    diagnose->add_option("--seed", diag_seed, "Seed recorded in the provenance line");

    // report
    auto* report = app.add_subcommand("report", "Re-render experiment outputs");
    std::string bundle_path = "experiment_out/bundle.json";
    std::string report_out = "report_out";
    std::string report_format = "csv";
    report->add_option("--bundle", bundle_path, "bundle.json from an experiment run");
    report->add_option("--out-dir", report_out, "Output directory");
    report->add_option("--format", report_format, "csv or markdown");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (suite_list->parsed()) {
            return cmd_suite_list(suite_name, dimension, seed, format, out);
        }
        if (optimize->parsed()) {
            const json config = opt_config.empty() ? json::object() : load_config_file(opt_config);
            return cmd_optimize(config, opt_suite, opt_dim, algs, budget_factor, runs, population,
                                opt_seed, opt_out, agg_out, opt_jobs);
        }
        if (features->parsed()) {
            const json config =
                feat_config.empty() ? json::object() : load_config_file(feat_config);
            return cmd_features(config, feat_suite, feat_dim, sample_factor, repetitions, sampler,
                                feat_seed, feat_out, feat_jobs);
        }
        if (experiment->parsed()) {
            const json config = exp_config.empty() ? json::object() : load_config_file(exp_config);
            return cmd_experiment(config, exp_perf, exp_features, exp_out, thresholds, portfolios,
                                  aggregation, normalize, exp_algs, exp_seed, exp_jobs,
                                  importance_repeats);
        }
        if (diagnose->parsed()) {
            return cmd_diagnose(diag_features, diag_perf, diag_alg, focus_class, portfolio_file,
                                top, diag_normalize, diag_out, diag_seed);
        }
        if (report->parsed()) {
            return cmd_report(bundle_path, report_out, report_format);
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
