#include "incluster/kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

namespace incluster::kmeans {

namespace {

void check_radius(std::optional<double> radius) {
    if (radius && !(*radius >= 0.0 && std::isfinite(*radius)))
        throw std::invalid_argument("outlier radius must be finite and non-negative");
}

Assignment nearest(Metric metric, const std::vector<Point>& centroids, const Point& p) {
    Assignment best{0, distance(metric, p, centroids[0])};
    for (std::size_t c = 1; c < centroids.size(); ++c) {
        const double d = distance(metric, p, centroids[c]);
        if (d < best.distance) best = {c, d};
    }
    return best;
}

Point running_mean(const Point& mean, std::size_t n, const Point& p) {
    std::vector<double> out(p.dim());
    const auto count = static_cast<double>(n);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = (mean[i] * count + p[i]) / (count + 1.0);
    return Point(std::move(out));
}

}  // namespace

KMeansModel::KMeansModel(std::vector<Point> centroids, Metric metric, std::optional<double> radius)
    : metric_(metric), outlier_radius_(radius), centroids_(std::move(centroids)) {
    if (centroids_.empty()) throw std::invalid_argument("k must be at least 1");
    const std::size_t d = centroids_.front().dim();
    for (const auto& c : centroids_)
        if (c.dim() != d) throw DimensionMismatch(d, c.dim());
    check_radius(radius);
    members_.resize(centroids_.size());
}

KMeansModel KMeansModel::from_centroids(std::vector<Point> centroids, Metric metric,
                                        std::optional<double> outlier_radius) {
    return KMeansModel(std::move(centroids), metric, outlier_radius);
}

KMeansModel KMeansModel::restore(Metric metric, std::optional<double> outlier_radius,
                                 std::vector<Point> points, std::vector<Point> centroids,
                                 std::vector<std::vector<std::size_t>> members,
                                 std::vector<std::size_t> outliers) {
    KMeansModel model(std::move(centroids), metric, outlier_radius);
    if (members.size() != model.k())
        throw std::invalid_argument("member lists (" + std::to_string(members.size()) +
                                    ") do not match k (" + std::to_string(model.k()) + ")");
    std::vector<bool> seen(points.size(), false);
    auto claim = [&](std::size_t idx) {
        if (idx >= points.size())
            throw std::invalid_argument("point index " + std::to_string(idx) + " out of range");
        if (seen[idx])
            throw std::invalid_argument("point index " + std::to_string(idx) + " listed twice");
        seen[idx] = true;
    };
    for (const auto& p : points)
        if (p.dim() != model.dim()) throw DimensionMismatch(model.dim(), p.dim());
    for (const auto& list : members)
        for (auto idx : list) claim(idx);
    for (auto idx : outliers) claim(idx);
    if (std::find(seen.begin(), seen.end(), false) != seen.end())
        throw std::invalid_argument("some points belong to no cluster and are not outliers");

    model.points_ = std::move(points);
    model.members_ = std::move(members);
    model.outliers_ = std::move(outliers);
    return model;
}

void KMeansModel::set_outlier_radius(std::optional<double> radius) {
    check_radius(radius);
    outlier_radius_ = radius;
}

Assignment KMeansModel::assign(const Point& p) const {
    if (p.dim() != dim()) throw DimensionMismatch(dim(), p.dim());
    return nearest(metric_, centroids_, p);
}

std::vector<InsertOutcome> KMeansModel::insert_incremental(std::span<const Point> new_points,
                                                           bool update_centroids) {
    for (const auto& p : new_points)
        if (p.dim() != dim()) throw DimensionMismatch(dim(), p.dim());

    std::vector<InsertOutcome> outcomes;
    outcomes.reserve(new_points.size());
    for (const auto& p : new_points) {
        const auto [cluster, dist] = nearest(metric_, centroids_, p);
        const std::size_t idx = points_.size();
        points_.push_back(p);
        if (outlier_radius_ && dist > *outlier_radius_) {
            outliers_.push_back(idx);
            outcomes.push_back({std::nullopt});
            continue;
        }
        if (update_centroids)
            centroids_[cluster] = running_mean(centroids_[cluster], members_[cluster].size(), p);
        members_[cluster].push_back(idx);
        outcomes.push_back({cluster});
    }
    return outcomes;
}

std::vector<std::size_t> seed_indices(std::size_t n, std::size_t k, std::uint64_t seed) {
    if (k > n) throw std::invalid_argument("cannot draw " + std::to_string(k) +
                                           " distinct indices from " + std::to_string(n));
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::mt19937_64 rng(seed);
    // Partial Fisher-Yates; the first k slots are the draw.
    for (std::size_t i = 0; i < k; ++i) {
        const auto span = n - i;
        const auto j = i + static_cast<std::size_t>(static_cast<double>(rng() >> 11) * 0x1.0p-53 *
                                                    static_cast<double>(span));
        std::swap(idx[i], idx[j]);
    }
    idx.resize(k);
    return idx;
}

KMeansModel fit(const Dataset& data, const FitOptions& options) {
    if (data.empty()) throw std::invalid_argument("cannot fit k-means on an empty dataset");
    if (options.k == 0) throw std::invalid_argument("k must be at least 1");
    if (options.k > data.size())
        throw std::invalid_argument("k = " + std::to_string(options.k) + " exceeds dataset size " +
                                    std::to_string(data.size()));
    std::vector<Point> initial;
    initial.reserve(options.k);
    for (auto i : seed_indices(data.size(), options.k, options.init_seed)) initial.push_back(data[i]);
    return fit_from(data, std::move(initial), options);
}

KMeansModel fit_from(const Dataset& data, std::vector<Point> initial_centroids,
                     const FitOptions& options) {
    if (data.empty()) throw std::invalid_argument("cannot fit k-means on an empty dataset");
    if (initial_centroids.empty()) throw std::invalid_argument("k must be at least 1");
    if (initial_centroids.size() > data.size())
        throw std::invalid_argument("k = " + std::to_string(initial_centroids.size()) +
                                    " exceeds dataset size " + std::to_string(data.size()));
    if (options.max_iter == 0) throw std::invalid_argument("max_iter must be at least 1");
    if (!(options.tol >= 0.0)) throw std::invalid_argument("tol must be non-negative");
    for (const auto& c : initial_centroids)
        if (c.dim() != data.dim()) throw DimensionMismatch(data.dim(), c.dim());

    KMeansModel model(std::move(initial_centroids), options.metric, options.outlier_radius);
    const std::size_t n = data.size();
    const std::size_t k = model.k();
    const std::size_t dim = data.dim();
    auto& centroids = model.centroids_;

    std::vector<std::size_t> labels(n, k);
    for (std::size_t iter = 0; iter < options.max_iter; ++iter) {
        bool changed = false;
        double objective = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const auto a = nearest(options.metric, centroids, data[i]);
            objective += a.distance * a.distance;
            if (labels[i] != a.cluster) {
                labels[i] = a.cluster;
                changed = true;
            }
        }
        model.objective_history_.push_back(objective);
        if (!changed) break;

        std::vector<std::vector<double>> sums(k, std::vector<double>(dim, 0.0));
        std::vector<std::size_t> counts(k, 0);
        for (std::size_t i = 0; i < n; ++i) {
            ++counts[labels[i]];
            for (std::size_t d = 0; d < dim; ++d) sums[labels[i]][d] += data[i][d];
        }
        double shift = 0.0;
        for (std::size_t c = 0; c < k; ++c) {
            if (counts[c] == 0) continue;
            for (double& s : sums[c]) s /= static_cast<double>(counts[c]);
            Point updated(std::move(sums[c]));
            shift = std::max(shift, distance(options.metric, centroids[c], updated));
            centroids[c] = std::move(updated);
        }
        if (shift < options.tol) break;
    }

    model.points_.assign(data.points().begin(), data.points().end());
    for (std::size_t i = 0; i < n; ++i) model.members_[labels[i]].push_back(i);
    return model;
}

}  // namespace incluster::kmeans
