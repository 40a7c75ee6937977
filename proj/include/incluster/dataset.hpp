#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace incluster {

/// Raised when two points (or a point and a model) disagree on dimension.
class DimensionMismatch : public std::invalid_argument {
public:
    DimensionMismatch(std::size_t expected, std::size_t actual);

    std::size_t expected() const noexcept { return expected_; }
    std::size_t actual() const noexcept { return actual_; }

private:
    std::size_t expected_;
    std::size_t actual_;
};

/// CSV parse failure. Rows and columns are 1-based and count data rows only
/// (a detected header is not row 1).
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t row, std::size_t column);

    std::size_t row() const noexcept { return row_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t row_;
    std::size_t column_;
};

/// A fixed-dimension vector of finite real attributes.
class Point {
public:
    explicit Point(std::vector<double> coords);
    Point(std::initializer_list<double> coords);

    std::size_t dim() const noexcept { return coords_.size(); }
    std::span<const double> coords() const noexcept { return coords_; }
    double operator[](std::size_t i) const { return coords_[i]; }

    friend bool operator==(const Point&, const Point&) = default;

private:
    std::vector<double> coords_;
};

/// Ordered collection of points sharing one dimension. Index i is stable.
class Dataset {
public:
    explicit Dataset(std::size_t dim);
    Dataset(std::size_t dim, std::vector<Point> points);

    std::size_t dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return points_.size(); }
    bool empty() const noexcept { return points_.empty(); }

    const Point& operator[](std::size_t i) const { return points_[i]; }
    std::span<const Point> points() const noexcept { return points_; }

    void push_back(Point p);

    /// First `n` points as a new dataset.
    Dataset prefix(std::size_t n) const;
    /// Points [first, first + count).
    std::span<const Point> slice(std::size_t first, std::size_t count) const;

    friend bool operator==(const Dataset&, const Dataset&) = default;

private:
    std::size_t dim_;
    std::vector<Point> points_;
};

enum class Metric { manhattan, euclidean };

std::string_view to_string(Metric m);
Metric parse_metric(std::string_view name);

/// Manhattan: sum |a_i - b_i|. Euclidean: sqrt(sum (a_i - b_i)^2).
/// Every call bumps the calling thread's distance counter.
double distance(Metric metric, const Point& a, const Point& b);

/// Distance calls made on the current thread since it started.
std::uint64_t distance_calls() noexcept;

/// Counts distance() calls made on this thread during the object's lifetime.
class DistanceCallCounter {
public:
    DistanceCallCounter() noexcept : start_(distance_calls()) {}
    std::uint64_t count() const noexcept { return distance_calls() - start_; }

private:
    std::uint64_t start_;
};

/// Arithmetic mean of a non-empty set of points.
Point mean_of(std::span<const Point> points);

Dataset load_csv(const std::filesystem::path& path, std::size_t dim);
Dataset parse_csv(std::string_view text, std::size_t dim);

/// Shortest round-trip decimal form of each coordinate, no header.
std::string to_csv(const Dataset& data);
void save_csv(const Dataset& data, const std::filesystem::path& path);

/// Shortest decimal string that parses back to exactly `v`.
std::string format_double(double v);

struct SyntheticSpec {
    std::size_t n = 0;
    std::size_t dim = 4;
    std::size_t n_blobs = 3;
    double blob_spread = 1.0;
    double outlier_fraction = 0.05;
    std::uint64_t seed = 0;
};

struct SyntheticData {
    Dataset data;
    std::vector<Point> centers;
    /// True at indices holding a planted outlier.
    std::vector<bool> outlier_mask;
};

/// Centers sit on a lattice with spacing `lattice_spacing_factor * blob_spread`.
/// Blob points are normal around their center, truncated at 3 spreads per axis.
/// Outliers are uniform over a box around the lattice, rejected while within
/// 10 spreads (Euclidean) of any center. The output order is shuffled.
SyntheticData generate_synthetic(const SyntheticSpec& spec);

inline constexpr double lattice_spacing_factor = 20.0;
inline constexpr double outlier_clearance_factor = 10.0;

}  // namespace incluster
