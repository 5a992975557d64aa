#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "rfclust/benchmark.hpp"
#include "rfclust/de.hpp"
#include "rfclust/features.hpp"

namespace rfclust {

// Suite catalog dump: suite,class_id,name,dimension,instance_id,xshift_*,yshift.
void write_suite_csv(const std::filesystem::path& path,
                     const std::vector<ProblemInstance>& instances, std::uint64_t master_seed);

// Per-run precisions: suite,class_id,instance_id,algorithm_id,run_index,precision.
void write_performance_csv(const std::filesystem::path& path,
                           const std::vector<PerformanceRecord>& records,
                           std::uint64_t master_seed);

// Aggregates: suite,class_id,instance_id,algorithm_id,median_precision,log_median_precision.
void write_performance_aggregate_csv(const std::filesystem::path& path,
                                     const std::vector<PerformanceRecord>& records,
                                     std::uint64_t master_seed);

// Reads either performance file; run_precisions are only populated from the
// per-run format.
std::vector<PerformanceRecord> read_performance_csv(const std::filesystem::path& path);

// Wide per-instance feature table with trailing sentinel flag columns.
void write_features_csv(const std::filesystem::path& path,
                        const std::vector<FeatureVector>& features, std::uint64_t master_seed);

std::vector<FeatureVector> read_features_csv(const std::filesystem::path& path);

}  // namespace rfclust
