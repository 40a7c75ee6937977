// bench: times batch and incremental k-means / DBSCAN over a growing
// workload and writes CSV tables, crossover reports and plot series.
//
//   bench compare --out results
//   bench batch --algorithm dbscan --sizes 500,600,700 --trials 3
//   bench incremental --config bench.toml --eps 2.5

#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "incluster/bench.hpp"
#include "incluster/serialize.hpp"

using namespace incluster;

int main(int argc, char** argv) {
    CLI::App app{"Batch vs. incremental clustering benchmark"};
    app.fallthrough();
    app.require_subcommand(1);
    app.set_config("--config", "", "Flat key = value file; command-line flags override it");

    bench::BenchConfig config;
    std::string algorithm = "dbscan";
    std::string metric = "euclidean";
    std::string out_dir = config.output_dir.string();
    std::string csv;
    double outlier_radius = 0.0;

    app.add_option("--algorithm", algorithm, "kmeans or dbscan (batch/incremental only)")
        ->check(CLI::IsMember({"kmeans", "dbscan"}))
        ->capture_default_str();
    app.add_option("--base-size", config.base_size, "Points in the original database")
        ->capture_default_str();
    app.add_option("--sizes", config.batch_sizes, "Batch workload sizes")->delimiter(',');
    app.add_option("--increments", config.increment_sizes, "Incremental insertion sizes")
        ->delimiter(',');
    app.add_option("--trials", config.trials, "Timed runs per workload")->capture_default_str();
    app.add_option("--warmup", config.warmup, "Untimed runs per workload")->capture_default_str();
    app.add_option("--seed", config.seed, "Synthetic data seed")->capture_default_str();
    app.add_option("--eps", config.eps, "DBSCAN neighborhood radius")->capture_default_str();
    app.add_option("--min-pts", config.min_pts, "DBSCAN MinPts")->capture_default_str();
    app.add_option("--k", config.kmeans.k, "k-means cluster count")->capture_default_str();
    app.add_option("--metric", metric, "manhattan or euclidean")
        ->check(CLI::IsMember({"manhattan", "euclidean"}))
        ->capture_default_str();
    app.add_option("--init-seed", config.kmeans.init_seed, "k-means seeding")->capture_default_str();
    app.add_option("--max-iter", config.kmeans.max_iter, "Lloyd iteration cap")->capture_default_str();
    app.add_option("--tol", config.kmeans.tol, "Lloyd centroid-shift tolerance")->capture_default_str();
    auto* radius_opt = app.add_option("--outlier-radius", outlier_radius,
                                      "Reject incremental k-means points farther than this");
    app.add_option("--dim", config.data.dim, "Point dimension")->capture_default_str();
    app.add_option("--blobs", config.data.blobs, "Synthetic blob count")->capture_default_str();
    app.add_option("--spread", config.data.spread, "Synthetic per-axis spread")->capture_default_str();
    app.add_option("--outlier-fraction", config.data.outlier_fraction, "Synthetic outlier share")
        ->capture_default_str();
    app.add_option("--out", out_dir, "Output directory")->capture_default_str();
    app.add_option("--csv", csv, "Load points from this CSV instead of generating them");

    auto* batch = app.add_subcommand("batch", "Time batch fits across --sizes");
    auto* incremental = app.add_subcommand("incremental", "Time incremental inserts across --increments");
    auto* compare = app.add_subcommand("compare", "Run both suites for both algorithms");

    CLI11_PARSE(app, argc, argv);

    try {
        config.metric = parse_metric(metric);
        config.output_dir = out_dir;
        if (radius_opt->count() > 0) config.kmeans.outlier_radius = outlier_radius;
        if (!csv.empty()) config.data.csv = csv;
        const auto alg = bench::parse_algorithm(algorithm);

        const Dataset data = bench::load_workload(config);
        if (*batch) {
            const auto records = bench::run_batch_suite(config, data, alg);
            bench::write_suite(records, config.output_dir);
            std::cout << bench::describe(records);
        } else if (*incremental) {
            const auto records = bench::run_incremental_suite(config, data, alg);
            bench::write_suite(records, config.output_dir);
            write_text_file(config.output_dir / (std::string(bench::to_string(alg)) + "_base_model.json"),
                            bench::base_model_json(config, data, alg));
            std::cout << bench::describe(records);
        } else if (*compare) {
            const auto report = bench::run_comparison(config, data);
            bench::write_report(report, config.output_dir);
            std::cout << bench::describe(report);
        }
        std::cout << "wrote " << config.output_dir.string() << "\n";
    } catch (const std::exception& e) {
        std::cerr << "bench: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
