#include "incluster/dbscan.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <stdexcept>
#include <string>

namespace incluster::dbscan {

namespace {

constexpr long unvisited = -2;

std::vector<std::size_t> region_query(const Dataset& data, const Params& params, std::size_t i) {
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < data.size(); ++j)
        if (distance(params.metric, data[i], data[j]) <= params.eps) out.push_back(j);
    return out;
}

Point running_mean(const Point& mean, std::size_t n, const Point& p) {
    std::vector<double> out(p.dim());
    const auto count = static_cast<double>(n);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = (mean[i] * count + p[i]) / (count + 1.0);
    return Point(std::move(out));
}

Point mean_of_members(const std::vector<Point>& points, const std::vector<std::size_t>& members) {
    std::vector<Point> selected;
    selected.reserve(members.size());
    for (auto idx : members) selected.push_back(points[idx]);
    return mean_of(selected);
}

// Minimal union-find with path halving; the root of a set is its smallest
// element so components come out ordered by their first member.
struct DisjointSets {
    std::vector<std::size_t> parent;

    explicit DisjointSets(std::size_t n) : parent(n) {
        std::iota(parent.begin(), parent.end(), std::size_t{0});
    }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (b < a) std::swap(a, b);
        parent[b] = a;
    }
};

}  // namespace

void Params::validate() const {
    if (!(eps > 0.0) || !std::isfinite(eps)) throw std::invalid_argument("eps must be positive");
    if (min_pts < 1) throw std::invalid_argument("min_pts must be at least 1");
}

DbscanModel::DbscanModel(Params params) : params_(params) { params_.validate(); }

std::optional<std::size_t> DbscanModel::dim() const {
    if (points_.empty()) return std::nullopt;
    return points_.front().dim();
}

DbscanModel DbscanModel::restore(Params params, std::vector<Point> points,
                                 std::vector<std::vector<std::size_t>> cluster_members,
                                 std::vector<std::size_t> noise) {
    DbscanModel model(params);
    for (const auto& p : points)
        if (p.dim() != points.front().dim()) throw DimensionMismatch(points.front().dim(), p.dim());
    std::vector<bool> seen(points.size(), false);
    auto claim = [&](std::size_t idx) {
        if (idx >= points.size())
            throw std::invalid_argument("point index " + std::to_string(idx) + " out of range");
        if (seen[idx])
            throw std::invalid_argument("point index " + std::to_string(idx) + " listed twice");
        seen[idx] = true;
    };
    for (const auto& members : cluster_members) {
        if (members.empty()) throw std::invalid_argument("stored cluster has no members");
        for (auto idx : members) claim(idx);
    }
    for (auto idx : noise) claim(idx);
    if (std::find(seen.begin(), seen.end(), false) != seen.end())
        throw std::invalid_argument("some points belong to no cluster and are not noise");
    std::sort(noise.begin(), noise.end());

    model.points_ = std::move(points);
    for (auto& members : cluster_members) {
        Point mean = mean_of_members(model.points_, members);
        model.clusters_.push_back(Cluster{std::move(members), std::move(mean)});
    }
    model.noise_ = std::move(noise);
    return model;
}

std::vector<long> DbscanModel::labels() const {
    std::vector<long> out(points_.size(), noise_label);
    for (std::size_t c = 0; c < clusters_.size(); ++c)
        for (auto idx : clusters_[c].members) out[idx] = static_cast<long>(c);
    return out;
}

std::vector<InsertOutcome> DbscanModel::insert_incremental(std::span<const Point> new_points) {
    if (!new_points.empty()) {
        const std::size_t d = dim().value_or(new_points.front().dim());
        for (const auto& p : new_points)
            if (p.dim() != d) throw DimensionMismatch(d, p.dim());
    }

    std::vector<InsertOutcome> outcomes;
    outcomes.reserve(new_points.size());
    for (const auto& p : new_points) {
        std::optional<std::size_t> best;
        double best_distance = 0.0;
        for (std::size_t c = 0; c < clusters_.size(); ++c) {
            const double d = distance(params_.metric, p, clusters_[c].mean);
            if (d > params_.eps || clusters_[c].members.size() <= params_.min_pts) continue;
            if (!best || d < best_distance) {
                best = c;
                best_distance = d;
            }
        }
        const std::size_t idx = points_.size();
        points_.push_back(p);
        if (best) {
            auto& cluster = clusters_[*best];
            cluster.mean = running_mean(cluster.mean, cluster.members.size(), p);
            cluster.members.push_back(idx);
        } else {
            noise_.push_back(idx);
        }
        outcomes.push_back({best});
    }
    promote_noise();
    return outcomes;
}

std::vector<std::size_t> DbscanModel::promote_noise() {
    const std::size_t n = noise_.size();
    if (n == 0) return {};

    DisjointSets sets(n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b)
            if (distance(params_.metric, points_[noise_[a]], points_[noise_[b]]) <= params_.eps)
                sets.unite(a, b);

    std::vector<std::vector<std::size_t>> components(n);
    for (std::size_t a = 0; a < n; ++a) components[sets.find(a)].push_back(noise_[a]);

    std::vector<std::size_t> created;
    std::vector<std::size_t> remaining;
    for (std::size_t root = 0; root < n; ++root) {
        auto& members = components[root];
        if (members.empty()) continue;
        if (members.size() >= params_.min_pts) {
            Point mean = mean_of_members(points_, members);
            created.push_back(clusters_.size());
            clusters_.push_back(Cluster{std::move(members), std::move(mean)});
        } else {
            remaining.insert(remaining.end(), members.begin(), members.end());
        }
    }
    std::sort(remaining.begin(), remaining.end());
    noise_ = std::move(remaining);
    return created;
}

DbscanModel fit(const Dataset& data, const Params& params) {
    params.validate();
    if (data.empty()) throw std::invalid_argument("cannot fit DBSCAN on an empty dataset");

    const std::size_t n = data.size();
    std::vector<long> labels(n, unvisited);
    long next_cluster = 0;

    for (std::size_t i = 0; i < n; ++i) {
        if (labels[i] != unvisited) continue;
        const auto neighbors = region_query(data, params, i);
        if (neighbors.size() < params.min_pts) {
            labels[i] = noise_label;
            continue;
        }
        const long cluster = next_cluster++;
        labels[i] = cluster;
        std::deque<std::size_t> seeds(neighbors.begin(), neighbors.end());
        while (!seeds.empty()) {
            const std::size_t j = seeds.front();
            seeds.pop_front();
            if (labels[j] == noise_label) {
                // Already known to be non-core: becomes a border point.
                labels[j] = cluster;
                continue;
            }
            if (labels[j] != unvisited) continue;
            labels[j] = cluster;
            const auto expansion = region_query(data, params, j);
            if (expansion.size() >= params.min_pts)
                seeds.insert(seeds.end(), expansion.begin(), expansion.end());
        }
    }

    DbscanModel model(params);
    model.points_.assign(data.points().begin(), data.points().end());
    std::vector<std::vector<std::size_t>> members(static_cast<std::size_t>(next_cluster));
    for (std::size_t i = 0; i < n; ++i) {
        if (labels[i] == noise_label)
            model.noise_.push_back(i);
        else
            members[static_cast<std::size_t>(labels[i])].push_back(i);
    }
    for (auto& m : members) {
        Point mean = mean_of_members(model.points_, m);
        model.clusters_.push_back(Cluster{std::move(m), std::move(mean)});
    }
    return model;
}

}  // namespace incluster::dbscan
