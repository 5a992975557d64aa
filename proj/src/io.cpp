#include "rfclust/io.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "rfclust/csv.hpp"

namespace rfclust {

void write_suite_csv(const std::filesystem::path& path,
                     const std::vector<ProblemInstance>& instances, std::uint64_t master_seed) {
    CsvWriter writer(path, master_seed);
    const int dim = instances.empty() ? 0 : instances.front().dimension();
    std::vector<std::string> header{"suite", "class_id", "name", "dimension", "instance_id"};
    for (int d = 0; d < dim; ++d) header.push_back("xshift_" + std::to_string(d));
    header.emplace_back("yshift");
    writer.header(header);
    for (const ProblemInstance& instance : instances) {
        std::vector<std::string> row{instance.problem.suite,
                                     std::to_string(instance.problem.class_id),
                                     instance.problem.name,
                                     std::to_string(instance.problem.dimension),
                                     std::to_string(instance.instance_id)};
        for (int d = 0; d < dim; ++d) row.push_back(format_double(instance.x_shift[d]));
        row.push_back(format_double(instance.y_shift));
        writer.row(row);
    }
}

void write_performance_csv(const std::filesystem::path& path,
                           const std::vector<PerformanceRecord>& records,
                           std::uint64_t master_seed) {
    CsvWriter writer(path, master_seed);
    writer.header({"suite", "class_id", "instance_id", "algorithm_id", "run_index", "precision"});
    for (const PerformanceRecord& record : records) {
        for (std::size_t run = 0; run < record.run_precisions.size(); ++run) {
            writer.row({record.suite, std::to_string(record.class_id),
                        std::to_string(record.instance_id), record.algorithm_id,
                        std::to_string(run), format_double(record.run_precisions[run])});
        }
    }
}

void write_performance_aggregate_csv(const std::filesystem::path& path,
                                     const std::vector<PerformanceRecord>& records,
                                     std::uint64_t master_seed) {
    CsvWriter writer(path, master_seed);
    writer.header({"suite", "class_id", "instance_id", "algorithm_id", "median_precision",
                   "log_median_precision"});
    for (const PerformanceRecord& record : records) {
        writer.row({record.suite, std::to_string(record.class_id),
                    std::to_string(record.instance_id), record.algorithm_id,
                    format_double(record.median_precision),
                    format_double(record.log_median_precision)});
    }
}

std::vector<PerformanceRecord> read_performance_csv(const std::filesystem::path& path) {
    const CsvTable table = read_csv(path);
    const auto suite_col = table.column("suite");
    const auto class_col = table.column("class_id");
    const auto instance_col = table.column("instance_id");
    const auto alg_col = table.column("algorithm_id");

    const bool aggregated =
        std::find(table.header.begin(), table.header.end(), "median_precision") !=
        table.header.end();

    if (aggregated) {
        const auto median_col = table.column("median_precision");
        const auto log_col = table.column("log_median_precision");
        std::vector<PerformanceRecord> records;
        for (const auto& row : table.rows) {
            PerformanceRecord record;
            record.suite = row[suite_col];
            record.class_id = std::stoi(row[class_col]);
            record.instance_id = std::stoi(row[instance_col]);
            record.algorithm_id = row[alg_col];
            record.median_precision = parse_double(row[median_col]);
            record.log_median_precision = parse_double(row[log_col]);
            records.push_back(std::move(record));
        }
        return records;
    }

    const auto run_col = table.column("run_index");
    const auto precision_col = table.column("precision");
    // (algorithm, class, instance) -> run precisions keyed by run index.
    std::map<std::tuple<std::string, int, int>, PerformanceRecord> grouped;
    std::map<std::tuple<std::string, int, int>, std::map<int, double>> runs;
    for (const auto& row : table.rows) {
        const auto key = std::make_tuple(row[alg_col], std::stoi(row[class_col]),
                                         std::stoi(row[instance_col]));
        auto& record = grouped[key];
        record.suite = row[suite_col];
        record.algorithm_id = std::get<0>(key);
        record.class_id = std::get<1>(key);
        record.instance_id = std::get<2>(key);
        runs[key][std::stoi(row[run_col])] = parse_double(row[precision_col]);
    }
    std::vector<PerformanceRecord> records;
    for (auto& [key, record] : grouped) {
        for (const auto& [run, precision] : runs[key]) record.run_precisions.push_back(precision);
        record.median_precision = median(record.run_precisions);
        record.log_median_precision = log10_clamped(record.median_precision);
        records.push_back(std::move(record));
    }
    return records;
}

void write_features_csv(const std::filesystem::path& path,
                        const std::vector<FeatureVector>& features, std::uint64_t master_seed) {
    CsvWriter writer(path, master_seed);
    const auto& names = feature_names();
    std::vector<std::string> header{"suite", "class_id", "instance_id"};
    for (const auto& name : names) header.push_back(name);
    for (const auto& name : names) header.push_back("flag_" + name);
    writer.header(header);
    for (const FeatureVector& fv : features) {
        std::vector<std::string> row{fv.suite, std::to_string(fv.class_id),
                                     std::to_string(fv.instance_id)};
        for (Eigen::Index i = 0; i < fv.values.size(); ++i) {
            row.push_back(format_double(fv.values[i]));
        }
        for (Eigen::Index i = 0; i < fv.sentinel_counts.size(); ++i) {
            row.push_back(std::to_string(fv.sentinel_counts[i]));
        }
        writer.row(row);
    }
}

std::vector<FeatureVector> read_features_csv(const std::filesystem::path& path) {
    const CsvTable table = read_csv(path);
    const auto suite_col = table.column("suite");
    const auto class_col = table.column("class_id");
    const auto instance_col = table.column("instance_id");
    const auto& names = feature_names();
    std::vector<std::size_t> value_cols;
    std::vector<std::size_t> flag_cols;
    for (const auto& name : names) {
        value_cols.push_back(table.column(name));
        flag_cols.push_back(table.column("flag_" + name));
    }
    std::vector<FeatureVector> features;
    for (const auto& row : table.rows) {
        FeatureVector fv;
        fv.suite = row[suite_col];
        fv.class_id = std::stoi(row[class_col]);
        fv.instance_id = std::stoi(row[instance_col]);
        fv.names = names;
        fv.values.resize(static_cast<Eigen::Index>(names.size()));
        fv.sentinel_counts.resize(static_cast<Eigen::Index>(names.size()));
        for (std::size_t i = 0; i < names.size(); ++i) {
            fv.values[static_cast<Eigen::Index>(i)] = parse_double(row[value_cols[i]]);
            fv.sentinel_counts[static_cast<Eigen::Index>(i)] = std::stoi(row[flag_cols[i]]);
        }
        features.push_back(std::move(fv));
    }
    return features;
}

}  // namespace rfclust
