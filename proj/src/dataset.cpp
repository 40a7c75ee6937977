#include "incluster/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

namespace incluster {

namespace {

thread_local std::uint64_t t_distance_calls = 0;

std::string dim_message(std::size_t expected, std::size_t actual) {
    return "dimension mismatch: expected " + std::to_string(expected) + ", got " +
           std::to_string(actual);
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

bool parse_number(std::string_view field, double& out) {
    field = trim(field);
    if (field.empty()) return false;
    if (field.front() == '+') field.remove_prefix(1);
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), out);
    return ec == std::errc{} && ptr == field.data() + field.size() && std::isfinite(out);
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    for (;;) {
        auto comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

// Uniform double in [0, 1) from the top 53 bits; avoids the
// implementation-defined std distributions so output is portable.
double unit_uniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double standard_normal(std::mt19937_64& rng) {
    double u1 = 0.0;
    do {
        u1 = unit_uniform(rng);
    } while (u1 <= 0.0);
    const double u2 = unit_uniform(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::size_t bounded(std::mt19937_64& rng, std::size_t n) {
    return static_cast<std::size_t>(unit_uniform(rng) * static_cast<double>(n));
}

}  // namespace

DimensionMismatch::DimensionMismatch(std::size_t expected, std::size_t actual)
    : std::invalid_argument(dim_message(expected, actual)), expected_(expected), actual_(actual) {}

ParseError::ParseError(const std::string& what, std::size_t row, std::size_t column)
    : std::runtime_error(what), row_(row), column_(column) {}

Point::Point(std::vector<double> coords) : coords_(std::move(coords)) {
    if (coords_.empty()) throw std::invalid_argument("point must have at least one coordinate");
    for (double c : coords_)
        if (!std::isfinite(c)) throw std::invalid_argument("point coordinates must be finite");
}

Point::Point(std::initializer_list<double> coords) : Point(std::vector<double>(coords)) {}

Dataset::Dataset(std::size_t dim) : dim_(dim) {
    if (dim == 0) throw std::invalid_argument("dataset dimension must be positive");
}

Dataset::Dataset(std::size_t dim, std::vector<Point> points) : Dataset(dim) {
    for (const auto& p : points)
        if (p.dim() != dim_) throw DimensionMismatch(dim_, p.dim());
    points_ = std::move(points);
}

void Dataset::push_back(Point p) {
    if (p.dim() != dim_) throw DimensionMismatch(dim_, p.dim());
    points_.push_back(std::move(p));
}

Dataset Dataset::prefix(std::size_t n) const {
    if (n > points_.size())
        throw std::out_of_range("dataset has " + std::to_string(points_.size()) +
                                " points, requested " + std::to_string(n));
    return Dataset(dim_, std::vector<Point>(points_.begin(), points_.begin() + n));
}

std::span<const Point> Dataset::slice(std::size_t first, std::size_t count) const {
    if (first > points_.size() || count > points_.size() - first)
        throw std::out_of_range("slice [" + std::to_string(first) + ", " +
                                std::to_string(first + count) + ") exceeds dataset of " +
                                std::to_string(points_.size()) + " points");
    return std::span<const Point>(points_).subspan(first, count);
}

std::string_view to_string(Metric m) {
    return m == Metric::manhattan ? "manhattan" : "euclidean";
}

Metric parse_metric(std::string_view name) {
    if (name == "manhattan") return Metric::manhattan;
    if (name == "euclidean") return Metric::euclidean;
    throw std::invalid_argument("unknown metric '" + std::string(name) +
                                "' (expected manhattan or euclidean)");
}

double distance(Metric metric, const Point& a, const Point& b) {
    if (a.dim() != b.dim()) throw DimensionMismatch(a.dim(), b.dim());
    ++t_distance_calls;
    const auto x = a.coords();
    const auto y = b.coords();
    double acc = 0.0;
    if (metric == Metric::manhattan) {
        for (std::size_t i = 0; i < x.size(); ++i) acc += std::abs(x[i] - y[i]);
        return acc;
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - y[i];
        acc += d * d;
    }
    return std::sqrt(acc);
}

std::uint64_t distance_calls() noexcept { return t_distance_calls; }

Point mean_of(std::span<const Point> points) {
    if (points.empty()) throw std::invalid_argument("mean of an empty point set");
    std::vector<double> sum(points.front().dim(), 0.0);
    for (const auto& p : points) {
        if (p.dim() != sum.size()) throw DimensionMismatch(sum.size(), p.dim());
        for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += p[i];
    }
    for (double& s : sum) s /= static_cast<double>(points.size());
    return Point(std::move(sum));
}

Dataset parse_csv(std::string_view text, std::size_t dim) {
    Dataset data(dim);
    std::size_t row = 0;
    bool first_line = true;
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        const auto line = trim(text.substr(pos, nl - pos));
        pos = nl + 1;
        if (line.empty()) continue;

        const auto fields = split_fields(line);
        if (first_line) {
            first_line = false;
            // A header is a first row in which nothing parses as a number.
            double ignored = 0.0;
            const bool any_numeric = std::any_of(fields.begin(), fields.end(), [&](auto f) {
                return parse_number(f, ignored);
            });
            if (!any_numeric) continue;
        }
        ++row;
        if (fields.size() != dim)
            throw ParseError("row " + std::to_string(row) + ": expected " + std::to_string(dim) +
                                 " fields, got " + std::to_string(fields.size()),
                             row, 0);
        std::vector<double> coords(dim);
        for (std::size_t c = 0; c < dim; ++c) {
            if (!parse_number(fields[c], coords[c]))
                throw ParseError("row " + std::to_string(row) + ", column " +
                                     std::to_string(c + 1) + ": non-numeric field '" +
                                     std::string(trim(fields[c])) + "'",
                                 row, c + 1);
        }
        data.push_back(Point(std::move(coords)));
    }
    return data;
}

Dataset load_csv(const std::filesystem::path& path, std::size_t dim) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_csv(buf.str(), dim);
}

std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

std::string to_csv(const Dataset& data) {
    std::string out;
    for (const auto& p : data.points()) {
        for (std::size_t i = 0; i < p.dim(); ++i) {
            if (i) out += ',';
            out += format_double(p[i]);
        }
        out += '\n';
    }
    return out;
}

void save_csv(const Dataset& data, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << to_csv(data);
    if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

SyntheticData generate_synthetic(const SyntheticSpec& spec) {
    if (spec.dim == 0) throw std::invalid_argument("dim must be positive");
    if (spec.n_blobs == 0) throw std::invalid_argument("n_blobs must be at least 1");
    if (!(spec.blob_spread > 0.0) || !std::isfinite(spec.blob_spread))
        throw std::invalid_argument("blob_spread must be positive");
    if (!(spec.outlier_fraction >= 0.0 && spec.outlier_fraction <= 1.0))
        throw std::invalid_argument("outlier_fraction must lie in [0, 1]");

    const double spacing = lattice_spacing_factor * spec.blob_spread;

    // Smallest lattice side m with m^dim >= n_blobs; center j takes the
    // base-m digits of j as lattice coordinates.
    std::size_t side = 1;
    for (;;) {
        std::size_t cells = 1;
        for (std::size_t d = 0; d < spec.dim && cells < spec.n_blobs; ++d) cells *= side;
        if (cells >= spec.n_blobs) break;
        ++side;
    }
    std::vector<Point> centers;
    centers.reserve(spec.n_blobs);
    for (std::size_t j = 0; j < spec.n_blobs; ++j) {
        std::vector<double> c(spec.dim, 0.0);
        std::size_t rest = j;
        for (std::size_t d = 0; d < spec.dim; ++d) {
            c[d] = static_cast<double>(rest % side) * spacing;
            rest /= side;
        }
        centers.emplace_back(std::move(c));
    }

    const auto n_outliers = static_cast<std::size_t>(
        std::llround(spec.outlier_fraction * static_cast<double>(spec.n)));
    const std::size_t n_blob_points = spec.n - n_outliers;

    std::mt19937_64 rng(spec.seed);
    std::vector<Point> points;
    std::vector<bool> mask;
    points.reserve(spec.n);
    mask.reserve(spec.n);

    for (std::size_t i = 0; i < n_blob_points; ++i) {
        const auto& center = centers[i % spec.n_blobs];
        std::vector<double> c(spec.dim);
        for (std::size_t d = 0; d < spec.dim; ++d) {
            double z = 0.0;
            do {
                z = standard_normal(rng);
            } while (std::abs(z) > 3.0);
            c[d] = center[d] + z * spec.blob_spread;
        }
        points.emplace_back(std::move(c));
        mask.push_back(false);
    }

    const double lo = -spacing;
    const double hi = static_cast<double>(side - 1) * spacing + spacing;
    const double clearance = outlier_clearance_factor * spec.blob_spread;
    for (std::size_t i = 0; i < n_outliers; ++i) {
        for (;;) {
            std::vector<double> c(spec.dim);
            for (double& x : c) x = lo + unit_uniform(rng) * (hi - lo);
            Point candidate(std::move(c));
            const bool clear = std::all_of(centers.begin(), centers.end(), [&](const Point& ctr) {
                double acc = 0.0;
                for (std::size_t d = 0; d < spec.dim; ++d) {
                    const double diff = candidate[d] - ctr[d];
                    acc += diff * diff;
                }
                return std::sqrt(acc) >= clearance;
            });
            if (clear) {
                points.push_back(std::move(candidate));
                mask.push_back(true);
                break;
            }
        }
    }

    for (std::size_t i = points.size(); i > 1; --i) {
        const std::size_t j = bounded(rng, i);
        std::swap(points[i - 1], points[j]);
        std::vector<bool>::swap(mask[i - 1], mask[j]);
    }

    return SyntheticData{Dataset(spec.dim, std::move(points)), std::move(centers), std::move(mask)};
}

}  // namespace incluster
