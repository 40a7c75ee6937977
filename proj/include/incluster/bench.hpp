#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "incluster/dataset.hpp"
#include "incluster/dbscan.hpp"
#include "incluster/delta.hpp"

namespace incluster::bench {

enum class Algorithm { kmeans, dbscan };
enum class Mode { batch, incremental };

std::string_view to_string(Algorithm a);
std::string_view to_string(Mode m);
Algorithm parse_algorithm(std::string_view name);

using Duration = std::chrono::nanoseconds;

/// Median of a non-empty list; the lower middle element for even counts.
Duration median(std::span<const Duration> samples);

struct TimingRecord {
    Algorithm algorithm = Algorithm::kmeans;
    Mode mode = Mode::batch;
    /// Total points for batch runs, inserted points for incremental runs.
    std::size_t workload_size = 0;
    std::vector<Duration> elapsed;

    // Deterministic for a given input; taken from the first timed trial.
    std::uint64_t distance_calls = 0;
    std::size_t clusters = 0;
    std::size_t unclustered = 0;  // DBSCAN noise or k-means outliers
    /// Incremental runs only: cluster per inserted point, -1 for noise/outlier.
    std::vector<long> outcomes;

    std::size_t trials() const noexcept { return elapsed.size(); }
    Duration summary() const { return median(elapsed); }
    double summary_ms() const;
};

struct KMeansSettings {
    std::size_t k = 3;
    std::uint64_t init_seed = 7;
    std::size_t max_iter = 100;
    double tol = 1e-6;
    std::optional<double> outlier_radius;
};

struct DataSettings {
    std::size_t dim = 4;
    std::size_t blobs = 3;
    double spread = 1.0;
    double outlier_fraction = 0.05;
    /// Load points from this CSV instead of generating them.
    std::optional<std::filesystem::path> csv;
};

struct BenchConfig {
    std::size_t base_size = 500;
    std::vector<std::size_t> batch_sizes{500, 600, 700, 800, 900, 1000, 1100};
    std::vector<std::size_t> increment_sizes{100, 200, 300, 400, 500};
    std::size_t trials = 5;
    std::size_t warmup = 2;
    std::uint64_t seed = 42;
    Metric metric = Metric::euclidean;
    KMeansSettings kmeans;
    double eps = 3.0;
    std::size_t min_pts = 5;
    DataSettings data;
    std::filesystem::path output_dir = "bench_out";

    /// Throws std::invalid_argument naming the first violated constraint.
    void validate() const;
    /// Points needed to cover every batch size and base + increment.
    std::size_t required_points() const;
    dbscan::Params dbscan_params() const { return {eps, min_pts, metric}; }
};

/// The configured synthetic workload (or CSV), checked against required_points().
Dataset load_workload(const BenchConfig& config);

/// Called with each finished record, outside any timed region.
using RecordSink = std::function<void(const TimingRecord&)>;

/// For each batch size s: warmup untimed fits, then `trials` timed fits on
/// the first s points.
std::vector<TimingRecord> run_batch_suite(const BenchConfig& config, const Dataset& data,
                                          Algorithm algorithm, const RecordSink& sink = {});
std::vector<TimingRecord> run_batch_suite(const BenchConfig& config, Algorithm algorithm);

/// Fits once on the first base_size points (untimed). For each increment d,
/// each trial clones the base model (untimed) and times insertion of the
/// next d points.
std::vector<TimingRecord> run_incremental_suite(const BenchConfig& config, const Dataset& data,
                                                Algorithm algorithm, const RecordSink& sink = {});
std::vector<TimingRecord> run_incremental_suite(const BenchConfig& config, Algorithm algorithm);

/// The base model the incremental suite starts from, as a JSON document.
std::string base_model_json(const BenchConfig& config, const Dataset& data, Algorithm algorithm);

struct AlgorithmReport {
    Algorithm algorithm = Algorithm::kmeans;
    std::vector<TimingRecord> batch;
    std::vector<TimingRecord> incremental;
    std::vector<delta::ComparisonRow> rows;
    delta::Crossover crossover = delta::NoCrossover{delta::NoCrossover::Reason::incremental_never_wins};
};

struct DeltaComparison {
    double delta_percent = 0.0;
    std::size_t increment = 0;
    std::uint64_t kmeans_batch_calls = 0;
    std::uint64_t kmeans_incremental_calls = 0;
    std::uint64_t dbscan_batch_calls = 0;
    std::uint64_t dbscan_incremental_calls = 0;
    double kmeans_incremental_ms = 0.0;
    double dbscan_incremental_ms = 0.0;
};

struct ComparisonReport {
    AlgorithmReport kmeans;
    AlgorithmReport dbscan;
    std::vector<DeltaComparison> per_delta;
};

ComparisonReport run_comparison(const BenchConfig& config, const Dataset& data);
ComparisonReport run_comparison(const BenchConfig& config);

/// Timing records as CSV. Columns ending in `_ms` carry wall-clock values;
/// all others are deterministic for a fixed seed.
std::string records_csv(std::span<const TimingRecord> records);
std::string per_delta_csv(std::span<const DeltaComparison> rows);

void emit_csv(std::span<const TimingRecord> records, const std::filesystem::path& path);
void emit_csv(std::span<const delta::ComparisonRow> rows, const std::filesystem::path& path);

/// Whitespace-separated `workload_size median_ms`, one record per line.
void emit_plot_data(std::span<const TimingRecord> records, const std::filesystem::path& path);
/// Whitespace-separated `delta actual incremental` sorted by delta.
void emit_plot_data(std::span<const delta::ComparisonRow> rows, const std::filesystem::path& path);

/// gnuplot script drawing every series written by write_report.
std::string plot_script();

/// Writes every CSV, JSON, plot series, and the plot script into `dir`.
void write_report(const ComparisonReport& report, const std::filesystem::path& dir);
void write_suite(std::span<const TimingRecord> records, const std::filesystem::path& dir);

/// Human-readable summary for stdout.
std::string describe(const ComparisonReport& report);
std::string describe(std::span<const TimingRecord> records);

}  // namespace incluster::bench
