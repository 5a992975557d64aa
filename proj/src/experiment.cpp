#include "rfclust/experiment.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "rfclust/csv.hpp"
#include "rfclust/io.hpp"
#include "rfclust/parallel.hpp"
#include "rfclust/rng.hpp"
#include "rfclust/version.hpp"

namespace rfclust {

namespace {

using nlohmann::json;

std::string threshold_label(double threshold) { return format_double(threshold); }

std::vector<SimilarityConfig> similarity_configs(const ExperimentConfig& config) {
    std::vector<SimilarityConfig> out;
    for (const double threshold : config.thresholds) {
        out.push_back({threshold, config.aggregation, config.normalize});
    }
    return out;
}

PortfolioRun run_portfolio(const Dataset& dataset, const std::vector<Fold>& folds,
                           const ExperimentConfig& config, std::uint64_t portfolio_seed,
                           bool compute_importance) {
    PortfolioRun run;
    run.portfolio_label = static_cast<int>(dataset.feature_portfolio.size());
    run.features = dataset.feature_portfolio;
    run.reports.resize(folds.size());
    const auto sims = similarity_configs(config);
    parallel_for(folds.size(), config.jobs, [&](std::size_t f) {
        RunFoldOptions options;
        options.seed = portfolio_seed;
        options.importance_repeats = config.importance_repeats;
        options.compute_importance = compute_importance;
        run.reports[f] = run_fold(dataset, folds[f], config.grid, sims, options);
    });
    SimilarityConfig diag_config{0.0, config.aggregation, config.normalize};
    for (const Fold& fold : folds) {
        run.diagnostics.emplace_back(
            fold.held_out_class,
            similarity_diagnostics(dataset, fold.held_out_class, diag_config));
    }
    return run;
}

// ----------------------------------------------------------------- writers

void write_heatmaps(const ExperimentBundle& bundle, const AlgorithmResult& algorithm,
                    const PortfolioRun& run, const std::filesystem::path& out_dir) {
    const std::string stem = algorithm.algorithm_id + "_top" +
                             std::to_string(run.portfolio_label);
    std::vector<std::string> header{"model"};
    for (const FoldReport& report : run.reports) {
        header.push_back("c" + std::to_string(report.held_out_class));
    }

    CsvWriter errors(out_dir / ("errors_heatmap_" + stem + ".csv"),
                     bundle.config.master_seed);
    errors.header(header);
    std::vector<std::string> rf_row{"RF"};
    for (const FoldReport& report : run.reports) {
        rf_row.push_back(format_double(mae(report.rf_abs_errors)));
    }
    errors.row(rf_row);
    for (const double threshold : bundle.config.thresholds) {
        std::vector<std::string> row{"RF+clust@" + threshold_label(threshold)};
        for (const FoldReport& report : run.reports) {
            row.push_back(format_double(mae(report.rfclust_abs_errors.at(threshold))));
        }
        errors.row(row);
    }

    CsvWriter neighbors(out_dir / ("neighbors_heatmap_" + stem + ".csv"),
                        bundle.config.master_seed);
    neighbors.header(header);
    for (const double threshold : bundle.config.thresholds) {
        std::vector<std::string> row{"RF+clust@" + threshold_label(threshold)};
        for (const FoldReport& report : run.reports) {
            const auto& counts = report.neighbor_counts.at(threshold);
            double total = 0.0;
            for (const int c : counts) total += c;
            row.push_back(format_double(total / static_cast<double>(counts.size())));
        }
        neighbors.row(row);
    }
}

void write_mae_summary(const ExperimentBundle& bundle, const AlgorithmResult& algorithm,
                       const std::filesystem::path& out_dir) {
    CsvWriter writer(out_dir / ("mae_summary_" + algorithm.algorithm_id + ".csv"),
                     bundle.config.master_seed);
    writer.header({"top_features", "aggregation", "mae_train", "mae_test"});
    const auto emit = [&](const PortfolioRun& run) {
        std::vector<double> train_maes;
        std::vector<double> test_maes;
        for (const FoldReport& report : run.reports) {
            train_maes.push_back(mae(report.rf_train_abs_errors));
            test_maes.push_back(mae(report.rf_abs_errors));
        }
        const double mean_train = mae(train_maes);
        const double mean_test = mae(test_maes);
        writer.row({std::to_string(run.portfolio_label), "mean", format_double(mean_train),
                    format_double(mean_test)});
        writer.row({std::to_string(run.portfolio_label), "median",
                    format_double(median(train_maes)), format_double(median(test_maes))});
    };
    for (const PortfolioRun& run : algorithm.portfolios) emit(run);
    emit(algorithm.full);
}

void write_comparison(const ExperimentBundle& bundle, const std::filesystem::path& out_dir) {
    CsvWriter writer(out_dir / "comparison.csv", bundle.config.master_seed);
    writer.header({"algorithm_id", "threshold", "portfolio", "n_better", "n_equal", "n_worse"});
    for (const AlgorithmResult& algorithm : bundle.algorithms) {
        for (const ComparisonSummary& summary : algorithm.summaries) {
            writer.row({summary.algorithm_id, threshold_label(summary.threshold),
                        std::to_string(summary.portfolio), std::to_string(summary.n_better),
                        std::to_string(summary.n_equal), std::to_string(summary.n_worse)});
        }
    }
}

void write_importance(const ExperimentBundle& bundle, const AlgorithmResult& algorithm,
                      const std::filesystem::path& out_dir) {
    CsvWriter writer(out_dir / ("importance_" + algorithm.algorithm_id + ".csv"),
                     bundle.config.master_seed);
    writer.header({"feature", "summed_importance", "rank"});
    int rank = 1;
    for (const auto& [name, value] : algorithm.summed_importance) {
        writer.row({name, format_double(value), std::to_string(rank++)});
    }
}

void write_diagnostics(const ExperimentBundle& bundle, const AlgorithmResult& algorithm,
                       const PortfolioRun& run, const std::filesystem::path& out_dir) {
    const auto dir = out_dir / "diagnostics" /
                     (algorithm.algorithm_id + "_top" + std::to_string(run.portfolio_label));
    std::filesystem::create_directories(dir);
    for (const auto& [focus_class, rows] : run.diagnostics) {
        CsvWriter writer(dir / ("diagnostics_" + std::to_string(focus_class) + ".csv"),
                         bundle.config.master_seed);
        writer.header({"focus_instance", "other_class", "other_instance", "similarity",
                       "performance_gap"});
        for (const DiagnosticsRow& row : rows) {
            writer.row({std::to_string(row.focus_instance), std::to_string(row.other_class),
                        std::to_string(row.other_instance), format_double(row.similarity),
                        format_double(row.performance_gap)});
        }
    }
}

void write_queries(const ExperimentBundle& bundle, const AlgorithmResult& algorithm,
                   const PortfolioRun& run, const std::filesystem::path& out_dir) {
    const auto path = out_dir / ("queries_" + algorithm.algorithm_id + "_top" +
                                 std::to_string(run.portfolio_label) + ".jsonl");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open file for writing: " + path.string());
    out << provenance_line(bundle.config.master_seed) << '\n';
    for (const FoldReport& report : run.reports) {
        for (const QueryRecord& query : report.queries) {
            json neighbors = json::array();
            for (std::size_t i = 0; i < query.neighbors.size(); ++i) {
                neighbors.push_back({{"class_id", query.neighbor_classes[i]},
                                     {"instance_id", query.neighbor_instances[i]},
                                     {"similarity", query.neighbors[i].similarity},
                                     {"performance", query.neighbors[i].performance}});
            }
            json record{{"suite", bundle.suite},
                        {"class_id", query.class_id},
                        {"instance_id", query.instance_id},
                        {"threshold", query.threshold},
                        {"k", query.neighbors.size()},
                        {"neighbors", neighbors},
                        {"raw", query.raw},
                        {"final", query.final_value}};
            if (query.aggregated) {
                record["aggregated"] = *query.aggregated;
            } else {
                record["aggregated"] = nullptr;
            }
            out << record.dump() << '\n';
        }
    }
}

json config_to_json(const ExperimentConfig& config) {
    json doc;
    doc["suite"] = config.suite;
    doc["dimension"] = config.dimension;
    doc["algorithms"] = config.algorithms;
    doc["budget_factor"] = config.budget_factor;
    doc["runs"] = config.runs;
    doc["population_size"] = config.population_size;
    doc["sample_factor"] = config.sample_factor;
    doc["repetitions"] = config.repetitions;
    doc["sampler"] = config.sampler == Sampler::kImprovedLatinHypercube ? "ilhs" : "lhs";
    doc["thresholds"] = config.thresholds;
    doc["portfolios"] = config.portfolios;
    doc["aggregation"] = aggregation_name(config.aggregation);
    doc["normalize"] = normalization_name(config.normalize);
    doc["master_seed"] = config.master_seed;
    doc["jobs"] = config.jobs;
    doc["importance_repeats"] = config.importance_repeats;
    json grid;
    grid["n_estimators"] = config.grid.n_estimators;
    std::vector<std::string> mf;
    for (const MaxFeatures m : config.grid.max_features) mf.push_back(max_features_name(m));
    grid["max_features"] = mf;
    grid["max_depth"] = config.grid.max_depth;
    grid["min_samples_split"] = config.grid.min_samples_split;
    doc["grid"] = std::move(grid);
    return doc;
}

ExperimentConfig config_from_json(const json& doc) {
    ExperimentConfig config;
    config.suite = doc.value("suite", config.suite);
    config.dimension = doc.value("dimension", config.dimension);
    config.algorithms = doc.value("algorithms", config.algorithms);
    config.budget_factor = doc.value("budget_factor", config.budget_factor);
    config.runs = doc.value("runs", config.runs);
    config.population_size = doc.value("population_size", config.population_size);
    config.sample_factor = doc.value("sample_factor", config.sample_factor);
    config.repetitions = doc.value("repetitions", config.repetitions);
    if (doc.contains("sampler")) config.sampler = parse_sampler(doc["sampler"].get<std::string>());
    config.thresholds = doc.value("thresholds", config.thresholds);
    config.portfolios = doc.value("portfolios", config.portfolios);
    if (doc.contains("aggregation")) {
        config.aggregation = parse_aggregation(doc["aggregation"].get<std::string>());
    }
    if (doc.contains("normalize")) {
        config.normalize = parse_normalization(doc["normalize"].get<std::string>());
    }
    config.master_seed = doc.value("master_seed", config.master_seed);
    config.jobs = doc.value("jobs", config.jobs);
    config.importance_repeats = doc.value("importance_repeats", config.importance_repeats);
    if (doc.contains("grid")) {
        const auto& grid = doc["grid"];
        config.grid.n_estimators = grid.value("n_estimators", config.grid.n_estimators);
        if (grid.contains("max_features")) {
            config.grid.max_features.clear();
            for (const auto& name : grid["max_features"]) {
                config.grid.max_features.push_back(parse_max_features(name.get<std::string>()));
            }
        }
        config.grid.max_depth = grid.value("max_depth", config.grid.max_depth);
        config.grid.min_samples_split =
            grid.value("min_samples_split", config.grid.min_samples_split);
    }
    return config;
}

json fold_report_to_json(const FoldReport& report) {
    json doc;
    doc["held_out_class"] = report.held_out_class;
    doc["tuned_params"] = {{"n_estimators", report.tuned_params.n_estimators},
                           {"max_features", max_features_name(report.tuned_params.max_features)},
                           {"max_depth", report.tuned_params.max_depth},
                           {"min_samples_split", report.tuned_params.min_samples_split}};
    doc["rf_abs_errors"] = report.rf_abs_errors;
    doc["rf_train_abs_errors"] = report.rf_train_abs_errors;
    json clust = json::object();
    json counts = json::object();
    for (const auto& [threshold, errors] : report.rfclust_abs_errors) {
        clust[threshold_label(threshold)] = errors;
    }
    for (const auto& [threshold, c] : report.neighbor_counts) {
        counts[threshold_label(threshold)] = c;
    }
    doc["rfclust_abs_errors"] = std::move(clust);
    doc["neighbor_counts"] = std::move(counts);
    return doc;
}

FoldReport fold_report_from_json(const json& doc) {
    FoldReport report;
    report.held_out_class = doc.at("held_out_class").get<int>();
    const auto& params = doc.at("tuned_params");
    report.tuned_params.n_estimators = params.at("n_estimators").get<int>();
    report.tuned_params.max_features =
        parse_max_features(params.at("max_features").get<std::string>());
    report.tuned_params.max_depth = params.at("max_depth").get<int>();
    report.tuned_params.min_samples_split = params.at("min_samples_split").get<int>();
    report.rf_abs_errors = doc.at("rf_abs_errors").get<std::vector<double>>();
    report.rf_train_abs_errors = doc.at("rf_train_abs_errors").get<std::vector<double>>();
    for (const auto& [label, errors] : doc.at("rfclust_abs_errors").items()) {
        report.rfclust_abs_errors[parse_double(label)] = errors.get<std::vector<double>>();
    }
    for (const auto& [label, counts] : doc.at("neighbor_counts").items()) {
        report.neighbor_counts[parse_double(label)] = counts.get<std::vector<int>>();
    }
    return report;
}

json portfolio_to_json(const PortfolioRun& run) {
    json doc;
    doc["portfolio_label"] = run.portfolio_label;
    doc["features"] = run.features;
    json reports = json::array();
    for (const FoldReport& report : run.reports) reports.push_back(fold_report_to_json(report));
    doc["reports"] = std::move(reports);
    return doc;
}

PortfolioRun portfolio_from_json(const json& doc) {
    PortfolioRun run;
    run.portfolio_label = doc.at("portfolio_label").get<int>();
    run.features = doc.at("features").get<std::vector<std::string>>();
    for (const auto& report : doc.at("reports")) {
        run.reports.push_back(fold_report_from_json(report));
    }
    return run;
}

}  // namespace

void ExperimentConfig::validate() const {
    if (dimension < 2) throw std::invalid_argument("dimension must be >= 2");
    if (budget_factor < 1) throw std::invalid_argument("budget_factor must be positive");
    if (runs < 1) throw std::invalid_argument("runs must be positive");
    if (sample_factor < 4) throw std::invalid_argument("sample_factor must be at least 4");
    if (repetitions < 1) throw std::invalid_argument("repetitions must be positive");
    // An empty threshold list is allowed: the experiment then reports the
    // plain RF rows only.
    for (std::size_t i = 0; i < thresholds.size(); ++i) {
        if (thresholds[i] < -1.0 || thresholds[i] > 1.0) {
            throw std::invalid_argument("thresholds must lie in [-1, 1]");
        }
        if (i > 0 && thresholds[i] <= thresholds[i - 1]) {
            throw std::invalid_argument("thresholds must be strictly increasing");
        }
    }
    for (const int p : portfolios) {
        if (p < 1) throw std::invalid_argument("portfolio sizes must be positive");
    }
    if (jobs < 1) throw std::invalid_argument("jobs must be positive");
    if (importance_repeats < 1) throw std::invalid_argument("importance_repeats must be positive");
}

ExperimentBundle run_experiment(const std::vector<FeatureVector>& features,
                                const std::vector<PerformanceRecord>& records,
                                const ExperimentConfig& config) {
    config.validate();
    if (features.empty()) throw std::invalid_argument("run_experiment: no feature vectors");

    // Algorithms in file order unless the config narrows them down.
    std::vector<std::string> algorithm_ids;
    std::map<std::string, std::vector<PerformanceRecord>> by_algorithm;
    for (const PerformanceRecord& record : records) {
        if (!by_algorithm.count(record.algorithm_id)) algorithm_ids.push_back(record.algorithm_id);
        by_algorithm[record.algorithm_id].push_back(record);
    }
    if (!config.algorithms.empty()) {
        for (const std::string& id : config.algorithms) {
            if (!by_algorithm.count(id)) {
                throw std::invalid_argument("algorithm '" + id +
                                            "' has no rows in the performance data");
            }
        }
        algorithm_ids = config.algorithms;
    }
    if (algorithm_ids.empty()) {
        throw std::invalid_argument("performance data contains no algorithms");
    }

    ExperimentBundle bundle;
    bundle.config = config;
    bundle.suite = features.empty() ? "" : features.front().suite;

    for (std::size_t a = 0; a < algorithm_ids.size(); ++a) {
        AlgorithmResult result;
        result.algorithm_id = algorithm_ids[a];

        const Dataset full = make_dataset(features, by_algorithm[result.algorithm_id],
                                          features.front().names);
        const std::vector<Fold> folds = make_lopo_folds(full);

        result.full = run_portfolio(full, folds, config,
                                    stream_key(config.master_seed, RngStage::kFold, a, 0), true);

        std::vector<std::map<std::string, double>> fold_importances;
        for (const FoldReport& report : result.full.reports) {
            fold_importances.push_back(report.importances);
        }
        std::map<std::string, double> summed;
        for (const auto& fold : fold_importances) {
            for (const auto& [name, value] : fold) summed[name] += value;
        }
        result.summed_importance.assign(summed.begin(), summed.end());
        std::sort(result.summed_importance.begin(), result.summed_importance.end(),
                  [](const auto& x, const auto& y) {
                      if (x.second != y.second) return x.second > y.second;
                      return x.first < y.first;
                  });

        for (std::size_t p = 0; p < config.portfolios.size(); ++p) {
            const int k = config.portfolios[p];
            const std::vector<std::string> selected = select_top_features(fold_importances, k);
            const Dataset restricted = full.restricted_to(selected);
            PortfolioRun run =
                run_portfolio(restricted, folds, config,
                              stream_key(config.master_seed, RngStage::kFold, a, p + 1), false);
            for (const double threshold : config.thresholds) {
                ComparisonSummary summary = compare(run.reports, threshold);
                summary.algorithm_id = result.algorithm_id;
                summary.portfolio = run.portfolio_label;
                result.summaries.push_back(summary);
            }
            result.portfolios.push_back(std::move(run));
        }
        bundle.algorithms.push_back(std::move(result));
    }
    return bundle;
}

ExperimentBundle run_experiment(const std::filesystem::path& performance_csv,
                                const std::filesystem::path& features_csv,
                                const ExperimentConfig& config) {
    return run_experiment(read_features_csv(features_csv), read_performance_csv(performance_csv),
                          config);
}

ReportFormat parse_report_format(const std::string& name) {
    if (name == "csv") return ReportFormat::kCsv;
    if (name == "markdown" || name == "md") return ReportFormat::kMarkdown;
    throw std::invalid_argument("unknown report format: '" + name + "'");
}

void render_report(const ExperimentBundle& bundle, const std::filesystem::path& out_dir,
                   ReportFormat format) {
    std::filesystem::create_directories(out_dir);
    if (format == ReportFormat::kCsv) {
        write_comparison(bundle, out_dir);
        for (const AlgorithmResult& algorithm : bundle.algorithms) {
            for (const PortfolioRun& run : algorithm.portfolios) {
                write_heatmaps(bundle, algorithm, run, out_dir);
            }
            write_mae_summary(bundle, algorithm, out_dir);
        }
        return;
    }

    const auto path = out_dir / "report.md";
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open file for writing: " + path.string());
    out << "<!-- " << provenance_line(bundle.config.master_seed).substr(2) << " -->\n";
    out << "# Performance prediction report\n\n";
    out << "Suite: " << bundle.suite << "\n";

    out << "\n## Better / equal / worse counts\n\n";
    out << "| algorithm | threshold | portfolio | better | equal | worse |\n";
    out << "|---|---|---|---|---|---|\n";
    for (const AlgorithmResult& algorithm : bundle.algorithms) {
        for (const ComparisonSummary& s : algorithm.summaries) {
            out << "| " << s.algorithm_id << " | " << threshold_label(s.threshold) << " | "
                << s.portfolio << " | " << s.n_better << " | " << s.n_equal << " | " << s.n_worse
                << " |\n";
        }
    }

    for (const AlgorithmResult& algorithm : bundle.algorithms) {
        out << "\n## Algorithm " << algorithm.algorithm_id << "\n";
        out << "\n### MAE summary\n\n";
        out << "| top_features | aggregation | mae_train | mae_test |\n|---|---|---|---|\n";
        const auto emit = [&](const PortfolioRun& run) {
            std::vector<double> train_maes;
            std::vector<double> test_maes;
            for (const FoldReport& report : run.reports) {
                train_maes.push_back(mae(report.rf_train_abs_errors));
                test_maes.push_back(mae(report.rf_abs_errors));
            }
            out << "| " << run.portfolio_label << " | mean | " << format_double(mae(train_maes))
                << " | " << format_double(mae(test_maes)) << " |\n";
            out << "| " << run.portfolio_label << " | median | "
                << format_double(median(train_maes)) << " | " << format_double(median(test_maes))
                << " |\n";
        };
        for (const PortfolioRun& run : algorithm.portfolios) emit(run);
        emit(algorithm.full);

        for (const PortfolioRun& run : algorithm.portfolios) {
            out << "\n### Absolute error per held-out class (top-" << run.portfolio_label
                << " portfolio)\n\n";
            out << "| model |";
            for (const FoldReport& report : run.reports) {
                out << " c" << report.held_out_class << " |";
            }
            out << "\n|---|";
            for (std::size_t i = 0; i < run.reports.size(); ++i) out << "---|";
            out << "\n| RF |";
            for (const FoldReport& report : run.reports) {
                out << " " << format_double(mae(report.rf_abs_errors)) << " |";
            }
            out << "\n";
            for (const double threshold : bundle.config.thresholds) {
                out << "| RF+clust@" << threshold_label(threshold) << " |";
                for (const FoldReport& report : run.reports) {
                    out << " " << format_double(mae(report.rfclust_abs_errors.at(threshold)))
                        << " |";
                }
                out << "\n";
            }
        }
    }
}

void write_experiment_outputs(const ExperimentBundle& bundle,
                              const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    render_report(bundle, out_dir, ReportFormat::kCsv);
    for (const AlgorithmResult& algorithm : bundle.algorithms) {
        write_importance(bundle, algorithm, out_dir);
        for (const PortfolioRun& run : algorithm.portfolios) {
            write_diagnostics(bundle, algorithm, run, out_dir);
            write_queries(bundle, algorithm, run, out_dir);
        }
    }

    {
        std::ofstream out(out_dir / "experiment.json");
        out << provenance_line(bundle.config.master_seed) << '\n';
        json doc;
        doc["tool_version"] = kVersion;
        doc["master_seed"] = bundle.config.master_seed;
        doc["suite"] = bundle.suite;
        doc["config"] = config_to_json(bundle.config);
        out << doc.dump(2) << '\n';
    }
    {
        std::ofstream out(out_dir / "bundle.json");
        out << provenance_line(bundle.config.master_seed) << '\n';
        json doc;
        doc["tool_version"] = kVersion;
        doc["suite"] = bundle.suite;
        doc["config"] = config_to_json(bundle.config);
        json algorithms = json::array();
        for (const AlgorithmResult& algorithm : bundle.algorithms) {
            json a;
            a["algorithm_id"] = algorithm.algorithm_id;
            json importance = json::array();
            for (const auto& [name, value] : algorithm.summed_importance) {
                importance.push_back({{"feature", name}, {"importance", value}});
            }
            a["summed_importance"] = std::move(importance);
            a["full"] = portfolio_to_json(algorithm.full);
            json runs = json::array();
            for (const PortfolioRun& run : algorithm.portfolios) {
                runs.push_back(portfolio_to_json(run));
            }
            a["portfolios"] = std::move(runs);
            json summaries = json::array();
            for (const ComparisonSummary& s : algorithm.summaries) {
                summaries.push_back({{"algorithm_id", s.algorithm_id},
                                     {"threshold", s.threshold},
                                     {"portfolio", s.portfolio},
                                     {"n_better", s.n_better},
                                     {"n_equal", s.n_equal},
                                     {"n_worse", s.n_worse}});
            }
            a["summaries"] = std::move(summaries);
            algorithms.push_back(std::move(a));
        }
        doc["algorithms"] = std::move(algorithms);
        out << doc.dump(2) << '\n';
    }
}

ExperimentBundle load_bundle(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path.string());
    std::string first_line;
    std::getline(in, first_line);
    std::stringstream rest;
    if (!first_line.empty() && first_line.front() != '#') rest << first_line << '\n';
    rest << in.rdbuf();
    const json doc = json::parse(rest.str());

    ExperimentBundle bundle;
    bundle.config = config_from_json(doc.at("config"));
    bundle.suite = doc.value("suite", "");
    for (const auto& a : doc.at("algorithms")) {
        AlgorithmResult result;
        result.algorithm_id = a.at("algorithm_id").get<std::string>();
        for (const auto& entry : a.at("summed_importance")) {
            result.summed_importance.emplace_back(entry.at("feature").get<std::string>(),
                                                  entry.at("importance").get<double>());
        }
        result.full = portfolio_from_json(a.at("full"));
        for (const auto& run : a.at("portfolios")) {
            result.portfolios.push_back(portfolio_from_json(run));
        }
        for (const auto& s : a.at("summaries")) {
            ComparisonSummary summary;
            summary.algorithm_id = s.at("algorithm_id").get<std::string>();
            summary.threshold = s.at("threshold").get<double>();
            summary.portfolio = s.at("portfolio").get<int>();
            summary.n_better = s.at("n_better").get<int>();
            summary.n_equal = s.at("n_equal").get<int>();
            summary.n_worse = s.at("n_worse").get<int>();
            result.summaries.push_back(summary);
        }
        bundle.algorithms.push_back(std::move(result));
    }
    return bundle;
}

}  // namespace rfclust
