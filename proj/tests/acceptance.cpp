// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Usage: acceptance <path-to-bench-binary>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "incluster/bench.hpp"
#include "incluster/dbscan.hpp"
#include "incluster/delta.hpp"
#include "incluster/kmeans.hpp"
#include "incluster/serialize.hpp"
#include "oracles.hpp"

using namespace incluster;

namespace {

struct Check {
    std::vector<std::string> failures;

    void expect(bool ok, const std::string& what) {
        if (!ok) failures.push_back(what);
    }
};

using Criterion = std::function<void(Check&)>;

const std::vector<Point> example_means{{4, 6}, {4, 9}, {3, 2}};

void golden_example(Check& c) {
    const Point p{9, 15};
    c.expect(distance(Metric::manhattan, p, example_means[0]) == 14.0, "distance to (4,6) != 14");
    c.expect(distance(Metric::manhattan, p, example_means[1]) == 11.0, "distance to (4,9) != 11");
    c.expect(distance(Metric::manhattan, p, example_means[2]) == 19.0, "distance to (3,2) != 19");
    const auto model = kmeans::KMeansModel::from_centroids(example_means, Metric::manhattan);
    const auto a = model.assign(p);
    c.expect(a.cluster == 1 && a.distance == 11.0, "(9,15) not assigned to the (4,9) cluster");
}

void delta_table(Check& c) {
    const std::pair<std::size_t, double> expected[] = {{600, 20}, {700, 40}, {800, 60}, {900, 80}};
    for (auto [size, pct] : expected)
        c.expect(delta::delta_percent(500, size) == pct,
                 "delta_percent(500, " + std::to_string(size) + ") != " + std::to_string(pct));
}

void crossover(Check& c) {
    const std::vector<delta::ComparisonRow> rows{
        {20, 41500, 12480}, {40, 43300, 24643}, {60, 48230, 38943}, {80, 50720, 52530}};
    const auto result = delta::crossover_threshold(rows);
    const auto* hit = std::get_if<delta::CrossoverResult>(&result);
    if (!hit) {
        c.expect(false, "no crossover found");
        return;
    }
    c.expect(hit->low.delta_percent == 60.0 && hit->high.delta_percent == 80.0,
             "bracket is not (60, 80)");
    // Hand interpolation: g(60) = -9287, g(80) = +1810.
    const double oracle_threshold = 60.0 + 20.0 * 9287.0 / (9287.0 + 1810.0);
    c.expect(std::abs(hit->threshold_percent - 76.74) <= 0.01,
             "threshold " + std::to_string(hit->threshold_percent) + " not within 76.74 +/- 0.01");
    c.expect(std::abs(hit->threshold_percent - oracle_threshold) <= 1e-9,
             "threshold disagrees with hand interpolation");
    c.expect(72.0 > hit->low.delta_percent && 72.0 < hit->high.delta_percent,
             "published 72% cut-off outside the bracket");
}

void noise_promotion(Check& c) {
    const Dataset nine(2, {{4, 6}, {112, 94}, {9, 15}, {4, 9}, {8, 17}, {3, 2}, {1, 4}, {1, 7}, {10, 9}});
    auto model = dbscan::fit(nine, {70.0, 2, Metric::manhattan});
    c.expect(model.noise() == std::vector<std::size_t>{1}, "starting noise pool is not {(112,94)}");
    const auto clusters_before = model.cluster_count();
    const std::vector<Point> incoming{{155, 112}, {99, 125}};
    model.insert_incremental(incoming);
    c.expect(model.cluster_count() == clusters_before + 1, "expected exactly one new cluster");
    c.expect(model.noise_count() == 0, "noise pool not empty");
    if (model.cluster_count() == clusters_before + 1) {
        std::vector<Point> members;
        for (auto idx : model.clusters().back().members) members.push_back(model.points()[idx]);
        c.expect(members == std::vector<Point>{{112, 94}, {155, 112}, {99, 125}},
                 "new cluster is not the three outliers");
    }
}

void kmeans_outliers(Check& c) {
    const std::vector<Point> outliers{{112, 94}, {155, 112}, {99, 125}};
    // Hand-computed nearest-mean Manhattan distances.
    const double nearest[] = {193, 254, 211};
    auto strict = kmeans::KMeansModel::from_centroids(example_means, Metric::manhattan, 50.0);
    for (std::size_t i = 0; i < outliers.size(); ++i)
        c.expect(strict.assign(outliers[i]).distance == nearest[i],
                 "unexpected nearest-mean distance for outlier " + std::to_string(i));
    const auto flagged = strict.insert_incremental(outliers);
    c.expect(std::all_of(flagged.begin(), flagged.end(), [](auto o) { return o.is_outlier(); }),
             "radius 50 did not flag all three");
    c.expect(strict.outliers().size() == 3, "outlier list size != 3");

    auto open = kmeans::KMeansModel::from_centroids(example_means, Metric::manhattan);
    const auto assigned = open.insert_incremental(outliers);
    c.expect(std::none_of(assigned.begin(), assigned.end(), [](auto o) { return o.is_outlier(); }),
             "unset radius produced an outlier");
}

void dbscan_oracle(Check& c) {
    std::mt19937_64 rng(20240601);
    std::uniform_int_distribution<std::size_t> size(1, 50), min_pts(2, 5), dim(1, 4);
    std::uniform_real_distribution<double> eps(0.2, 4.0);
    int mismatches = 0;
    const int instances = 400;
    for (int i = 0; i < instances; ++i) {
        const auto data = oracle::random_dataset(rng, size(rng), dim(rng), 0, 10);
        const dbscan::Params p{eps(rng), min_pts(rng), i % 2 ? Metric::manhattan : Metric::euclidean};
        if (dbscan::fit(data, p).labels() != oracle::dbscan_labels(data, p.eps, p.min_pts, p.metric))
            ++mismatches;
    }
    c.expect(mismatches == 0, std::to_string(mismatches) + " of " + std::to_string(instances) +
                                  " instances differ from the oracle");
}

void kmeans_invariants(Check& c) {
    std::mt19937_64 rng(777);
    int objective_violations = 0;
    for (int i = 0; i < 100; ++i) {
        const auto data = oracle::random_dataset(rng, 30 + i, 2 + i % 3, 0, 100);
        kmeans::FitOptions opt;
        opt.k = 2 + i % 5;
        opt.init_seed = static_cast<std::uint64_t>(i);
        opt.tol = 0.0;
        const auto h = kmeans::fit(data, opt).objective_history();
        for (std::size_t t = 1; t < h.size(); ++t)
            if (h[t] > h[t - 1] * (1 + 1e-12)) ++objective_violations;
    }
    c.expect(objective_violations == 0,
             std::to_string(objective_violations) + " Lloyd objective increases");

    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const auto data = oracle::random_dataset(rng, 40, 3, 0, 50);
        kmeans::FitOptions opt;
        opt.k = 3;
        opt.init_seed = static_cast<std::uint64_t>(i);
        auto model = kmeans::fit(data, opt);
        for (int batch = 0; batch < 5; ++batch) {
            std::vector<Point> incoming;
            for (int j = 0; j < 1 + (i + batch) % 25; ++j)
                incoming.push_back(oracle::random_point(rng, 3, -50, 100));
            model.insert_incremental(incoming, true);
        }
        for (std::size_t k = 0; k < model.k(); ++k) {
            if (model.members()[k].empty()) continue;
            std::vector<Point> pts;
            for (auto idx : model.members()[k]) pts.push_back(model.points()[idx]);
            const auto m = oracle::mean(pts);
            for (std::size_t d = 0; d < m.size(); ++d)
                worst = std::max(worst, std::abs(model.centroids()[k][d] - m[d]));
        }
    }
    c.expect(worst <= 1e-9, "running mean drifted by " + std::to_string(worst));
}

void cost_ordering(Check& c) {
    bench::BenchConfig config;  // base 500, increments 100..500, 5% outliers
    config.trials = 1;
    config.warmup = 0;
    const auto report = bench::run_comparison(config);
    std::cout << "    delta%  km_batch  km_inc  db_batch  db_inc  (distance calls; ms not asserted)\n";
    for (const auto& r : report.per_delta) {
        std::cout << "    " << r.delta_percent << "  " << r.kmeans_batch_calls << "  "
                  << r.kmeans_incremental_calls << "  " << r.dbscan_batch_calls << "  "
                  << r.dbscan_incremental_calls << "  | inc ms k-means " << r.kmeans_incremental_ms
                  << " dbscan " << r.dbscan_incremental_ms << "\n";
        const std::string at = " at delta " + format_double(r.delta_percent) + "%";
        if (r.delta_percent <= 60.0) {
            c.expect(r.kmeans_incremental_calls < r.kmeans_batch_calls, "k-means incremental >= batch" + at);
            c.expect(r.dbscan_incremental_calls < r.dbscan_batch_calls, "DBSCAN incremental >= batch" + at);
        }
        c.expect(r.dbscan_incremental_calls > r.kmeans_incremental_calls,
                 "DBSCAN incremental <= k-means incremental" + at);
    }
}

// Drops every column whose header ends in "_ms".
std::string strip_timing(const std::string& csv) {
    std::istringstream in(csv);
    std::string line, out;
    std::vector<bool> keep;
    bool header = true;
    while (std::getline(in, line)) {
        std::vector<std::string> fields;
        std::stringstream ls(line);
        for (std::string f; std::getline(ls, f, ',');) fields.push_back(f);
        if (header) {
            for (const auto& f : fields) keep.push_back(!(f.size() >= 3 && f.ends_with("_ms")));
            header = false;
        }
        for (std::size_t i = 0; i < fields.size(); ++i)
            if (i < keep.size() && keep[i]) out += fields[i] + ",";
        out += "\n";
    }
    return out;
}

void determinism(Check& c, const std::string& bench_exe) {
    const auto root = std::filesystem::temp_directory_path() / "incluster_acceptance";
    std::filesystem::remove_all(root);
    for (const char* run : {"a", "b"}) {
        const auto cmd = "\"" + bench_exe + "\" compare --trials 1 --warmup 0 --seed 1234 --out \"" +
                         (root / run).string() + "\" > /dev/null";
        if (std::system(cmd.c_str()) != 0) {
            c.expect(false, std::string("bench compare failed for run ") + run);
            return;
        }
    }
    std::size_t compared = 0;
    for (const auto& entry : std::filesystem::directory_iterator(root / "a")) {
        if (entry.path().extension() != ".csv") continue;
        const auto other = root / "b" / entry.path().filename();
        if (!std::filesystem::exists(other)) {
            c.expect(false, "second run lacks " + entry.path().filename().string());
            continue;
        }
        ++compared;
        c.expect(strip_timing(read_text_file(entry.path())) == strip_timing(read_text_file(other)),
                 entry.path().filename().string() + " differs in non-timing columns");
    }
    c.expect(compared >= 7, "expected at least 7 CSV outputs, found " + std::to_string(compared));
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: acceptance <bench-binary>\n";
        return 2;
    }
    const std::string bench_exe = argv[1];

    const std::vector<std::pair<std::string, Criterion>> criteria{
        {"1 golden example: Manhattan 14/11/19, (9,15) -> cluster of (4,9)", golden_example},
        {"2 delta percent reproduces 20/40/60/80 exactly", delta_table},
        {"3 crossover bracket (60,80), threshold 76.74 +/- 0.01", crossover},
        {"4 noise trio promoted to one new cluster, noise empty", noise_promotion},
        {"5 k-means outliers flagged at radius 50, assigned when unset", kmeans_outliers},
        {"6 DBSCAN batch fit matches brute-force oracle on 400 instances", dbscan_oracle},
        {"7 Lloyd objective non-increasing; running mean within 1e-9", kmeans_invariants},
        {"8 distance-call ordering on default workload", cost_ordering},
        {"9 bench compare deterministic in non-timing columns",
         [&](Check& c) { determinism(c, bench_exe); }},
    };

    int failed = 0;
    for (const auto& [name, run] : criteria) {
        Check check;
        const auto start = std::chrono::steady_clock::now();
        try {
            run(check);
        } catch (const std::exception& e) {
            check.failures.push_back(std::string("exception: ") + e.what());
        }
        const auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        const bool ok = check.failures.empty();
        failed += !ok;
        std::cout << (ok ? "[PASS] " : "[FAIL] ") << name << " (" << static_cast<long>(ms) << " ms)\n";
        for (const auto& f : check.failures) std::cout << "       " << f << "\n";
    }
    std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size()
              << " criteria passed\n";
    return failed == 0 ? 0 : 1;
}
