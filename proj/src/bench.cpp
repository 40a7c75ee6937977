#include "incluster/bench.hpp"

#include <algorithm>
#include <cstdio>
#include <set>
#include <sstream>
#include <stdexcept>

#include "incluster/kmeans.hpp"
#include "incluster/serialize.hpp"

namespace incluster::bench {

namespace {

using Clock = std::chrono::steady_clock;

kmeans::FitOptions kmeans_options(const BenchConfig& config) {
    kmeans::FitOptions opt;
    opt.k = config.kmeans.k;
    opt.metric = config.metric;
    opt.init_seed = config.kmeans.init_seed;
    opt.max_iter = config.kmeans.max_iter;
    opt.tol = config.kmeans.tol;
    opt.outlier_radius = config.kmeans.outlier_radius;
    return opt;
}

struct RunStats {
    std::size_t clusters = 0;
    std::size_t unclustered = 0;
    std::vector<long> outcomes;
};

RunStats stats_of(const kmeans::KMeansModel& m) { return {m.k(), m.outliers().size(), {}}; }
RunStats stats_of(const dbscan::DbscanModel& m) { return {m.cluster_count(), m.noise_count(), {}}; }

// One timed region around `body`; nothing else happens between the clock reads.
template <typename F>
Duration timed(F&& body) {
    const auto start = Clock::now();
    body();
    const auto stop = Clock::now();
    return std::chrono::duration_cast<Duration>(stop - start);
}

// Only the insertion itself sits inside the timed region.
template <typename Model>
RunStats insert_and_collect(Model& model, std::span<const Point> points, Duration* elapsed) {
    decltype(model.insert_incremental(points)) outcomes;
    const auto t = timed([&] { outcomes = model.insert_incremental(points); });
    if (elapsed) *elapsed = t;
    RunStats stats = stats_of(model);
    stats.outcomes.reserve(outcomes.size());
    for (const auto& o : outcomes) stats.outcomes.push_back(o.cluster ? static_cast<long>(*o.cluster) : -1L);
    return stats;
}

std::string join_ms(const std::vector<Duration>& samples) {
    std::string out;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (i) out += ';';
        out += format_double(std::chrono::duration<double, std::milli>(samples[i]).count());
    }
    return out;
}

const TimingRecord* find_record(const std::vector<TimingRecord>& records, std::size_t size) {
    for (const auto& r : records)
        if (r.workload_size == size) return &r;
    return nullptr;
}

std::vector<delta::SizedDuration> sized(const std::vector<TimingRecord>& records) {
    std::vector<delta::SizedDuration> out;
    for (const auto& r : records) out.push_back({r.workload_size, r.summary_ms()});
    return out;
}

AlgorithmReport run_algorithm(const BenchConfig& config, const Dataset& data, Algorithm algorithm) {
    AlgorithmReport report;
    report.algorithm = algorithm;
    report.batch = run_batch_suite(config, data, algorithm);
    report.incremental = run_incremental_suite(config, data, algorithm);
    report.rows = delta::build_comparison(sized(report.batch), sized(report.incremental),
                                          config.base_size);
    if (report.rows.size() >= 2) report.crossover = delta::crossover_threshold(report.rows);
    return report;
}

}  // namespace

std::string_view to_string(Algorithm a) { return a == Algorithm::kmeans ? "kmeans" : "dbscan"; }
std::string_view to_string(Mode m) { return m == Mode::batch ? "batch" : "incremental"; }

Algorithm parse_algorithm(std::string_view name) {
    if (name == "kmeans") return Algorithm::kmeans;
    if (name == "dbscan") return Algorithm::dbscan;
    throw std::invalid_argument("unknown algorithm '" + std::string(name) +
                                "' (expected kmeans or dbscan)");
}

Duration median(std::span<const Duration> samples) {
    if (samples.empty()) throw std::invalid_argument("median of an empty sample");
    std::vector<Duration> sorted(samples.begin(), samples.end());
    const std::size_t mid = (sorted.size() - 1) / 2;
    std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(mid), sorted.end());
    return sorted[mid];
}

double TimingRecord::summary_ms() const {
    return std::chrono::duration<double, std::milli>(summary()).count();
}

void BenchConfig::validate() const {
    if (base_size == 0) throw std::invalid_argument("base_size must be positive");
    if (trials == 0) throw std::invalid_argument("trials must be at least 1");
    if (batch_sizes.empty()) throw std::invalid_argument("batch_sizes must not be empty");
    for (auto s : batch_sizes)
        if (s == 0) throw std::invalid_argument("batch sizes must be positive");
    const std::set<std::size_t> sizes(batch_sizes.begin(), batch_sizes.end());
    for (auto d : increment_sizes)
        if (!sizes.contains(base_size + d))
            throw std::invalid_argument("increment " + std::to_string(d) + " needs batch size " +
                                        std::to_string(base_size + d) + " (base_size + increment)");
    if (kmeans.k == 0) throw std::invalid_argument("k must be at least 1");
    const auto smallest = std::min(base_size, *sizes.begin());
    if (kmeans.k > smallest)
        throw std::invalid_argument("k = " + std::to_string(kmeans.k) +
                                    " exceeds the smallest workload of " + std::to_string(smallest));
    if (kmeans.max_iter == 0) throw std::invalid_argument("max_iter must be at least 1");
    dbscan_params().validate();
    if (data.dim == 0) throw std::invalid_argument("dim must be positive");
}

std::size_t BenchConfig::required_points() const {
    std::size_t need = base_size;
    for (auto s : batch_sizes) need = std::max(need, s);
    for (auto d : increment_sizes) need = std::max(need, base_size + d);
    return need;
}

Dataset load_workload(const BenchConfig& config) {
    config.validate();
    const std::size_t need = config.required_points();
    if (config.data.csv) {
        Dataset data = load_csv(*config.data.csv, config.data.dim);
        if (data.size() < need)
            throw std::invalid_argument("dataset '" + config.data.csv->string() + "' has " +
                                        std::to_string(data.size()) + " points, workload needs " +
                                        std::to_string(need));
        return data;
    }
    SyntheticSpec spec;
    spec.n = need;
    spec.dim = config.data.dim;
    spec.n_blobs = config.data.blobs;
    spec.blob_spread = config.data.spread;
    spec.outlier_fraction = config.data.outlier_fraction;
    spec.seed = config.seed;
    return generate_synthetic(spec).data;
}

std::vector<TimingRecord> run_batch_suite(const BenchConfig& config, const Dataset& data,
                                          Algorithm algorithm, const RecordSink& sink) {
    config.validate();
    const auto opt = kmeans_options(config);
    const auto params = config.dbscan_params();

    std::vector<TimingRecord> records;
    for (auto size : config.batch_sizes) {
        if (size > data.size())
            throw std::invalid_argument("batch size " + std::to_string(size) +
                                        " exceeds dataset of " + std::to_string(data.size()));
        const Dataset subset = data.prefix(size);
        auto run = [&]() -> RunStats {
            if (algorithm == Algorithm::kmeans) return stats_of(kmeans::fit(subset, opt));
            return stats_of(dbscan::fit(subset, params));
        };
        for (std::size_t w = 0; w < config.warmup; ++w) run();

        TimingRecord rec;
        rec.algorithm = algorithm;
        rec.mode = Mode::batch;
        rec.workload_size = size;
        for (std::size_t t = 0; t < config.trials; ++t) {
            RunStats stats;
            DistanceCallCounter counter;
            rec.elapsed.push_back(timed([&] { stats = run(); }));
            if (t == 0) {
                rec.distance_calls = counter.count();
                rec.clusters = stats.clusters;
                rec.unclustered = stats.unclustered;
            }
        }
        records.push_back(std::move(rec));
        if (sink) sink(records.back());
    }
    return records;
}

std::vector<TimingRecord> run_batch_suite(const BenchConfig& config, Algorithm algorithm) {
    return run_batch_suite(config, load_workload(config), algorithm);
}

std::vector<TimingRecord> run_incremental_suite(const BenchConfig& config, const Dataset& data,
                                                Algorithm algorithm, const RecordSink& sink) {
    config.validate();
    if (config.required_points() > data.size())
        throw std::invalid_argument("workload needs " + std::to_string(config.required_points()) +
                                    " points, dataset has " + std::to_string(data.size()));
    const Dataset base = data.prefix(config.base_size);

    std::optional<kmeans::KMeansModel> kmeans_base;
    std::optional<dbscan::DbscanModel> dbscan_base;
    if (algorithm == Algorithm::kmeans)
        kmeans_base = kmeans::fit(base, kmeans_options(config));
    else
        dbscan_base = dbscan::fit(base, config.dbscan_params());

    std::vector<TimingRecord> records;
    for (auto d : config.increment_sizes) {
        const auto incoming = data.slice(config.base_size, d);

        // The clone happens here, before the clock starts.
        auto run_once = [&](Duration* elapsed) -> RunStats {
            if (kmeans_base) {
                auto model = *kmeans_base;
                return insert_and_collect(model, incoming, elapsed);
            }
            auto model = *dbscan_base;
            return insert_and_collect(model, incoming, elapsed);
        };
        for (std::size_t w = 0; w < config.warmup; ++w) run_once(nullptr);

        TimingRecord rec;
        rec.algorithm = algorithm;
        rec.mode = Mode::incremental;
        rec.workload_size = d;
        for (std::size_t t = 0; t < config.trials; ++t) {
            Duration elapsed{};
            DistanceCallCounter counter;
            RunStats stats = run_once(&elapsed);
            rec.elapsed.push_back(elapsed);
            if (t == 0) {
                rec.distance_calls = counter.count();
                rec.clusters = stats.clusters;
                rec.unclustered = stats.unclustered;
                rec.outcomes = std::move(stats.outcomes);
            }
        }
        records.push_back(std::move(rec));
        if (sink) sink(records.back());
    }
    return records;
}

std::vector<TimingRecord> run_incremental_suite(const BenchConfig& config, Algorithm algorithm) {
    return run_incremental_suite(config, load_workload(config), algorithm);
}

std::string base_model_json(const BenchConfig& config, const Dataset& data, Algorithm algorithm) {
    const Dataset base = data.prefix(config.base_size);
    if (algorithm == Algorithm::kmeans) return to_json(kmeans::fit(base, kmeans_options(config)));
    return to_json(dbscan::fit(base, config.dbscan_params()));
}

ComparisonReport run_comparison(const BenchConfig& config, const Dataset& data) {
    ComparisonReport report;
    report.kmeans = run_algorithm(config, data, Algorithm::kmeans);
    report.dbscan = run_algorithm(config, data, Algorithm::dbscan);

    std::vector<std::size_t> increments = config.increment_sizes;
    std::sort(increments.begin(), increments.end());
    increments.erase(std::unique(increments.begin(), increments.end()), increments.end());
    for (auto d : increments) {
        const std::size_t total = config.base_size + d;
        const auto* kb = find_record(report.kmeans.batch, total);
        const auto* ki = find_record(report.kmeans.incremental, d);
        const auto* db = find_record(report.dbscan.batch, total);
        const auto* di = find_record(report.dbscan.incremental, d);
        DeltaComparison row;
        row.delta_percent = delta::delta_percent(config.base_size, total);
        row.increment = d;
        row.kmeans_batch_calls = kb->distance_calls;
        row.kmeans_incremental_calls = ki->distance_calls;
        row.dbscan_batch_calls = db->distance_calls;
        row.dbscan_incremental_calls = di->distance_calls;
        row.kmeans_incremental_ms = ki->summary_ms();
        row.dbscan_incremental_ms = di->summary_ms();
        report.per_delta.push_back(row);
    }
    return report;
}

ComparisonReport run_comparison(const BenchConfig& config) {
    return run_comparison(config, load_workload(config));
}

std::string records_csv(std::span<const TimingRecord> records) {
    std::string out =
        "algorithm,mode,workload_size,trials,distance_calls,clusters,unclustered,median_ms,"
        "elapsed_ms\n";
    for (const auto& r : records) {
        out += std::string(to_string(r.algorithm)) + "," + std::string(to_string(r.mode)) + "," +
               std::to_string(r.workload_size) + "," + std::to_string(r.trials()) + "," +
               std::to_string(r.distance_calls) + "," + std::to_string(r.clusters) + "," +
               std::to_string(r.unclustered) + "," + format_double(r.summary_ms()) + "," +
               join_ms(r.elapsed) + "\n";
    }
    return out;
}

std::string per_delta_csv(std::span<const DeltaComparison> rows) {
    std::string out =
        "delta_percent,increment,kmeans_batch_calls,kmeans_incremental_calls,dbscan_batch_calls,"
        "dbscan_incremental_calls,fewer_calls,kmeans_incremental_ms,dbscan_incremental_ms,"
        "winner_by_ms\n";
    for (const auto& r : rows) {
        const char* fewer = r.kmeans_incremental_calls < r.dbscan_incremental_calls   ? "kmeans"
                            : r.dbscan_incremental_calls < r.kmeans_incremental_calls ? "dbscan"
                                                                                      : "tie";
        const char* faster = r.kmeans_incremental_ms < r.dbscan_incremental_ms   ? "kmeans"
                             : r.dbscan_incremental_ms < r.kmeans_incremental_ms ? "dbscan"
                                                                                 : "tie";
        out += format_double(r.delta_percent) + "," + std::to_string(r.increment) + "," +
               std::to_string(r.kmeans_batch_calls) + "," +
               std::to_string(r.kmeans_incremental_calls) + "," +
               std::to_string(r.dbscan_batch_calls) + "," +
               std::to_string(r.dbscan_incremental_calls) + "," + fewer + "," +
               format_double(r.kmeans_incremental_ms) + "," +
               format_double(r.dbscan_incremental_ms) + "," + faster + "\n";
    }
    return out;
}

void emit_csv(std::span<const TimingRecord> records, const std::filesystem::path& path) {
    write_text_file(path, records_csv(records));
}

void emit_csv(std::span<const delta::ComparisonRow> rows, const std::filesystem::path& path) {
    write_text_file(path, delta::comparison_csv({rows.begin(), rows.end()}));
}

void emit_plot_data(std::span<const TimingRecord> records, const std::filesystem::path& path) {
    std::string out = "# workload_size median_ms\n";
    for (const auto& r : records)
        out += std::to_string(r.workload_size) + " " + format_double(r.summary_ms()) + "\n";
    write_text_file(path, out);
}

void emit_plot_data(std::span<const delta::ComparisonRow> rows, const std::filesystem::path& path) {
    std::vector<delta::ComparisonRow> sorted(rows.begin(), rows.end());
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const auto& a, const auto& b) { return a.delta_percent < b.delta_percent; });
    std::string out = "# delta_percent actual_ms incremental_ms\n";
    for (const auto& r : sorted)
        out += format_double(r.delta_percent) + " " + format_double(r.actual_ms) + " " +
               format_double(r.incremental_ms) + "\n";
    write_text_file(path, out);
}

std::string plot_script() {
    return R"gp(# gnuplot -p plot.gp
set datafile commentschars "#"
set key left top
set grid

set title "Batch clustering time vs. data size"
set xlabel "points"
set ylabel "time (ms)"
plot "kmeans_batch.dat" using 1:2 with linespoints title "k-means", \
     "dbscan_batch.dat" using 1:2 with linespoints title "DBSCAN"
pause -1

set title "Incremental insertion time vs. inserted points"
set xlabel "inserted points"
plot "kmeans_incremental.dat" using 1:2 with linespoints title "k-means", \
     "dbscan_incremental.dat" using 1:2 with linespoints title "DBSCAN"
pause -1

set title "DBSCAN: batch vs. incremental"
set xlabel "% delta change"
plot "dbscan_overlay.dat" using 1:2 with linespoints title "batch", \
     "dbscan_overlay.dat" using 1:3 with linespoints title "incremental"
pause -1

set title "k-means: batch vs. incremental"
plot "kmeans_overlay.dat" using 1:2 with linespoints title "batch", \
     "kmeans_overlay.dat" using 1:3 with linespoints title "incremental"
pause -1

set title "Incremental k-means vs. incremental DBSCAN"
plot "incremental_comparison.dat" using 1:2 with linespoints title "k-means", \
     "incremental_comparison.dat" using 1:3 with linespoints title "DBSCAN"
pause -1
)gp";
}

void write_suite(std::span<const TimingRecord> records, const std::filesystem::path& dir) {
    if (records.empty()) return;
    std::filesystem::create_directories(dir);
    const std::string stem = std::string(to_string(records.front().algorithm)) + "_" +
                             std::string(to_string(records.front().mode));
    emit_csv(records, dir / (stem + ".csv"));
    emit_plot_data(records, dir / (stem + ".dat"));
}

void write_report(const ComparisonReport& report, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    for (const auto* alg : {&report.kmeans, &report.dbscan}) {
        const std::string name(to_string(alg->algorithm));
        write_suite(alg->batch, dir);
        write_suite(alg->incremental, dir);
        emit_csv(alg->rows, dir / (name + "_table3.csv"));
        emit_plot_data(alg->rows, dir / (name + "_overlay.dat"));
        write_text_file(dir / (name + "_crossover.json"), delta::crossover_json(alg->crossover));
    }
    write_text_file(dir / "comparison.csv", per_delta_csv(report.per_delta));

    std::string overlay = "# delta_percent kmeans_incremental_ms dbscan_incremental_ms\n";
    for (const auto& r : report.per_delta)
        overlay += format_double(r.delta_percent) + " " + format_double(r.kmeans_incremental_ms) +
                   " " + format_double(r.dbscan_incremental_ms) + "\n";
    write_text_file(dir / "incremental_comparison.dat", overlay);
    write_text_file(dir / "plot.gp", plot_script());
}

std::string describe(std::span<const TimingRecord> records) {
    std::ostringstream out;
    char line[160];
    std::snprintf(line, sizeof line, "%-8s %-12s %10s %12s %14s %9s %12s\n", "algo", "mode",
                  "size", "median_ms", "dist_calls", "clusters", "unclustered");
    out << line;
    for (const auto& r : records) {
        std::snprintf(line, sizeof line, "%-8s %-12s %10zu %12.3f %14llu %9zu %12zu\n",
                      std::string(to_string(r.algorithm)).c_str(),
                      std::string(to_string(r.mode)).c_str(), r.workload_size, r.summary_ms(),
                      static_cast<unsigned long long>(r.distance_calls), r.clusters, r.unclustered);
        out << line;
    }
    return out.str();
}

std::string describe(const ComparisonReport& report) {
    std::ostringstream out;
    for (const auto* alg : {&report.kmeans, &report.dbscan}) {
        out << "== " << to_string(alg->algorithm) << " ==\n";
        out << describe(alg->batch) << describe(alg->incremental);
        out << "delta_percent  actual_ms  incremental_ms\n";
        char line[128];
        for (const auto& r : alg->rows) {
            std::snprintf(line, sizeof line, "%12.2f %10.3f %15.3f\n", r.delta_percent, r.actual_ms,
                          r.incremental_ms);
            out << line;
        }
        if (const auto* hit = std::get_if<delta::CrossoverResult>(&alg->crossover)) {
            std::snprintf(line, sizeof line, "cut-off: %.2f%% between %.2f%% and %.2f%% (%s)\n",
                          hit->threshold_percent, hit->low.delta_percent, hit->high.delta_percent,
                          hit->method.c_str());
        } else {
            std::snprintf(line, sizeof line, "cut-off: none (%s)\n",
                          std::string(delta::to_string(
                                          std::get<delta::NoCrossover>(alg->crossover).reason))
                              .c_str());
        }
        out << line << "\n";
    }
    out << "delta_percent  kmeans_inc_calls  dbscan_inc_calls  kmeans_inc_ms  dbscan_inc_ms\n";
    char line[160];
    for (const auto& r : report.per_delta) {
        std::snprintf(line, sizeof line, "%12.2f %17llu %17llu %14.3f %14.3f\n", r.delta_percent,
                      static_cast<unsigned long long>(r.kmeans_incremental_calls),
                      static_cast<unsigned long long>(r.dbscan_incremental_calls),
                      r.kmeans_incremental_ms, r.dbscan_incremental_ms);
        out << line;
    }
    return out.str();
}

}  // namespace incluster::bench
