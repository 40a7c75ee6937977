#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "incluster/dataset.hpp"

namespace incluster::dbscan {

/// Neighborhoods are closed balls (distance <= eps) and a point counts
/// itself toward min_pts.
struct Params {
    double eps = 1.0;
    std::size_t min_pts = 4;
    Metric metric = Metric::euclidean;

    void validate() const;
};

struct Cluster {
    std::vector<std::size_t> members;  // indices into DbscanModel::points()
    Point mean;
};

/// Result of inserting one point: the cluster it joined, or nullopt for noise.
/// Noise may still be promoted into a new cluster at the end of the batch.
struct InsertOutcome {
    std::optional<std::size_t> cluster;

    bool is_noise() const noexcept { return !cluster.has_value(); }
    friend bool operator==(const InsertOutcome&, const InsertOutcome&) = default;
};

inline constexpr long noise_label = -1;

class DbscanModel {
public:
    /// An empty model: no points, clusters, or noise.
    explicit DbscanModel(Params params);

    /// Rebuilds a model from stored state, validating membership and
    /// recomputing each cluster mean from its members.
    static DbscanModel restore(Params params, std::vector<Point> points,
                               std::vector<std::vector<std::size_t>> cluster_members,
                               std::vector<std::size_t> noise);

    const Params& params() const noexcept { return params_; }
    const std::vector<Cluster>& clusters() const noexcept { return clusters_; }
    /// Noise indices in ascending insertion order.
    const std::vector<std::size_t>& noise() const noexcept { return noise_; }
    const std::vector<Point>& points() const noexcept { return points_; }
    std::size_t total_points() const noexcept { return points_.size(); }

    std::size_t cluster_count() const noexcept { return clusters_.size(); }
    std::size_t noise_count() const noexcept { return noise_.size(); }

    /// Cluster index per point, or noise_label.
    std::vector<long> labels() const;

    /// Joins each point to the closest cluster whose mean lies within eps and
    /// whose size strictly exceeds min_pts (running-mean update), else pools it
    /// as noise. promote_noise runs once after the batch. A dimension
    /// mismatch anywhere rejects the whole batch before any change.
    std::vector<InsertOutcome> insert_incremental(std::span<const Point> new_points);

    /// Connected components of the eps-graph over noise points with at least
    /// min_pts members become new clusters, ordered by smallest member index.
    /// Returns the new cluster indices.
    std::vector<std::size_t> promote_noise();

    friend DbscanModel fit(const Dataset&, const Params&);

private:
    std::optional<std::size_t> dim() const;

    Params params_;
    std::vector<Point> points_;
    std::vector<Cluster> clusters_;
    std::vector<std::size_t> noise_;
};

/// Standard DBSCAN with linear-scan neighborhood queries. Points are scanned
/// in index order; a border point reachable from several clusters stays with
/// the first one to reach it.
DbscanModel fit(const Dataset& data, const Params& params);

}  // namespace incluster::dbscan
