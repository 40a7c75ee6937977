#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "incluster/dataset.hpp"

namespace incluster::kmeans {

struct Assignment {
    std::size_t cluster;
    double distance;
};

/// Result of inserting one point: a cluster index, or nullopt for an outlier.
struct InsertOutcome {
    std::optional<std::size_t> cluster;

    bool is_outlier() const noexcept { return !cluster.has_value(); }
    friend bool operator==(const InsertOutcome&, const InsertOutcome&) = default;
};

struct FitOptions {
    std::size_t k = 3;
    Metric metric = Metric::euclidean;
    std::uint64_t init_seed = 0;
    std::size_t max_iter = 100;
    double tol = 1e-6;
    std::optional<double> outlier_radius;
};

/// k centroids plus every point the model has absorbed, in insertion order.
/// Members and outliers are indices into `points()`.
class KMeansModel {
public:
    /// A model with the given centroids and no members yet.
    static KMeansModel from_centroids(std::vector<Point> centroids, Metric metric,
                                      std::optional<double> outlier_radius = std::nullopt);

    /// Rebuilds a model from stored state, validating every invariant.
    static KMeansModel restore(Metric metric, std::optional<double> outlier_radius,
                               std::vector<Point> points, std::vector<Point> centroids,
                               std::vector<std::vector<std::size_t>> members,
                               std::vector<std::size_t> outliers);

    std::size_t k() const noexcept { return centroids_.size(); }
    std::size_t dim() const noexcept { return centroids_.front().dim(); }
    Metric metric() const noexcept { return metric_; }
    std::optional<double> outlier_radius() const noexcept { return outlier_radius_; }
    void set_outlier_radius(std::optional<double> radius);

    const std::vector<Point>& centroids() const noexcept { return centroids_; }
    const std::vector<std::vector<std::size_t>>& members() const noexcept { return members_; }
    const std::vector<std::size_t>& outliers() const noexcept { return outliers_; }
    const std::vector<Point>& points() const noexcept { return points_; }
    std::size_t total_inserted() const noexcept { return points_.size(); }

    /// Nearest centroid; ties go to the lowest index.
    Assignment assign(const Point& p) const;

    /// Assigns each point in order against the current means. A winning
    /// distance above the outlier radius (when set) makes the point an
    /// outlier; otherwise it joins the winner, whose centroid moves to the
    /// running mean when `update_centroids` is set. A dimension mismatch
    /// anywhere rejects the whole batch before any change.
    std::vector<InsertOutcome> insert_incremental(std::span<const Point> new_points,
                                                  bool update_centroids = true);

    /// Lloyd objective after each assignment pass of the fit that built this
    /// model: sum of squared distances to the assigned centroid.
    const std::vector<double>& objective_history() const noexcept { return objective_history_; }
    std::size_t iterations() const noexcept { return objective_history_.size(); }

    friend KMeansModel fit_from(const Dataset&, std::vector<Point>, const FitOptions&);

private:
    KMeansModel(std::vector<Point> centroids, Metric metric, std::optional<double> radius);

    Metric metric_;
    std::optional<double> outlier_radius_;
    std::vector<Point> centroids_;
    std::vector<std::vector<std::size_t>> members_;
    std::vector<std::size_t> outliers_;
    std::vector<Point> points_;
    std::vector<double> objective_history_;
};

/// Lloyd iteration from centroids seeded at k distinct indices drawn with
/// `options.init_seed`.
KMeansModel fit(const Dataset& data, const FitOptions& options);

/// Lloyd iteration from explicit initial centroids (`options.k` is ignored).
/// Stops when the largest centroid shift drops below `tol`, when no
/// assignment changes, or after `max_iter` passes. An emptied cluster keeps
/// its previous centroid.
KMeansModel fit_from(const Dataset& data, std::vector<Point> initial_centroids,
                     const FitOptions& options);

/// k distinct indices in [0, n), deterministic for a seed.
std::vector<std::size_t> seed_indices(std::size_t n, std::size_t k, std::uint64_t seed);

}  // namespace incluster::kmeans
