#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include <gtest/gtest.h>

#include "incluster/dataset.hpp"
#include "oracles.hpp"

using namespace incluster;

namespace {

std::filesystem::path temp_file(const std::string& name, const std::string& contents) {
    auto path = std::filesystem::temp_directory_path() / ("incluster_" + name);
    std::ofstream(path, std::ios::binary) << contents;
    return path;
}

}  // namespace

TEST(Distance, ManhattanMatchesWorkedExample) {
    const Point p{9, 15};
    EXPECT_EQ(distance(Metric::manhattan, p, Point{4, 6}), 14.0);
    EXPECT_EQ(distance(Metric::manhattan, p, Point{4, 9}), 11.0);
    EXPECT_EQ(distance(Metric::manhattan, p, Point{3, 2}), 19.0);
}

TEST(Distance, TrivialCases) {
    EXPECT_EQ(distance(Metric::manhattan, Point{7, 3}, Point{7, 3}), 0.0);
    EXPECT_EQ(distance(Metric::euclidean, Point{0, 0}, Point{3, 4}), 5.0);
}

TEST(Distance, DimensionMismatchNamesBothDimensions) {
    try {
        distance(Metric::euclidean, Point{1, 2}, Point{1, 2, 3});
        FAIL() << "expected DimensionMismatch";
    } catch (const DimensionMismatch& e) {
        EXPECT_EQ(e.expected(), 2u);
        EXPECT_EQ(e.actual(), 3u);
        EXPECT_NE(std::string(e.what()).find("2"), std::string::npos);
        EXPECT_NE(std::string(e.what()).find("3"), std::string::npos);
    }
}

TEST(Distance, CallsAreCounted) {
    DistanceCallCounter counter;
    distance(Metric::manhattan, Point{1}, Point{2});
    distance(Metric::euclidean, Point{1}, Point{2});
    EXPECT_EQ(counter.count(), 2u);
}

TEST(Distance, MetricAxiomsHoldOnRandomPoints) {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 2000; ++trial) {
        const std::size_t dim = 1 + trial % 5;
        const auto a = oracle::random_point(rng, dim, -100, 100);
        const auto b = oracle::random_point(rng, dim, -100, 100);
        const auto c = oracle::random_point(rng, dim, -100, 100);
        for (auto m : {Metric::manhattan, Metric::euclidean}) {
            const double ab = distance(m, a, b);
            EXPECT_GE(ab, 0.0);
            EXPECT_EQ(distance(m, a, a), 0.0);
            EXPECT_EQ(ab, distance(m, b, a));
            EXPECT_LE(distance(m, a, c), ab + distance(m, b, c) + 1e-9);
        }
        EXPECT_LE(distance(Metric::euclidean, a, b), distance(Metric::manhattan, a, b) + 1e-12);
    }
}

TEST(PointTest, RejectsEmptyAndNonFinite) {
    EXPECT_THROW(Point(std::vector<double>{}), std::invalid_argument);
    EXPECT_THROW((Point{1.0, std::nan("")}), std::invalid_argument);
    EXPECT_THROW((Point{INFINITY}), std::invalid_argument);
}

TEST(DatasetTest, EnforcesDimension) {
    Dataset d(2);
    d.push_back(Point{1, 2});
    EXPECT_THROW(d.push_back(Point{1, 2, 3}), DimensionMismatch);
    EXPECT_THROW(Dataset(0), std::invalid_argument);
    EXPECT_THROW(d.slice(1, 1), std::out_of_range);
    EXPECT_EQ(d.slice(1, 0).size(), 0u);
}

TEST(Csv, ParsesRowsInOrder) {
    const auto data = load_csv(temp_file("two.csv", "4,6\n9,15\n"), 2);
    ASSERT_EQ(data.size(), 2u);
    EXPECT_EQ(data[0], (Point{4, 6}));
    EXPECT_EQ(data[1], (Point{9, 15}));
}

TEST(Csv, HeaderOnlyFileIsEmpty) {
    const auto data = load_csv(temp_file("header.csv", "so2,no2,rspm,spm\n"), 4);
    EXPECT_EQ(data.size(), 0u);
    EXPECT_EQ(data.dim(), 4u);
}

TEST(Csv, HeaderIsSkippedBeforeData) {
    const auto data = parse_csv("x,y\r\n1.5,-2\r\n", 2);
    ASSERT_EQ(data.size(), 1u);
    EXPECT_EQ(data[0], (Point{1.5, -2}));
}

TEST(Csv, NonNumericFieldReportsRowAndColumn) {
    try {
        load_csv(temp_file("bad.csv", "4,x\n"), 2);
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.row(), 1u);
        EXPECT_EQ(e.column(), 2u);
    }
}

TEST(Csv, WrongArityIsAnError) {
    try {
        parse_csv("1,2\n3\n", 2);
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.row(), 2u);
    }
}

TEST(Csv, MissingFileIsAnError) {
    EXPECT_THROW(load_csv("/nonexistent/points.csv", 2), std::runtime_error);
}

TEST(Csv, SerializationRoundTripsExactly) {
    std::mt19937_64 rng(11);
    const auto data = oracle::random_dataset(rng, 200, 4, -1e6, 1e6);
    const auto text = to_csv(data);
    const auto reparsed = parse_csv(text, 4);
    EXPECT_EQ(reparsed, data);
    EXPECT_EQ(to_csv(reparsed), text);

    const auto path = temp_file("roundtrip.csv", "");
    save_csv(data, path);
    EXPECT_EQ(load_csv(path, 4), data);
}

TEST(Synthetic, EmptyRequestGivesEmptyDataset) {
    SyntheticSpec spec;
    spec.n = 0;
    EXPECT_TRUE(generate_synthetic(spec).data.empty());
}

TEST(Synthetic, DeterministicPerSeed) {
    SyntheticSpec spec;
    spec.n = 300;
    spec.seed = 9;
    EXPECT_EQ(generate_synthetic(spec).data, generate_synthetic(spec).data);
    auto other = spec;
    other.seed = 10;
    EXPECT_NE(generate_synthetic(spec).data, generate_synthetic(other).data);
}

TEST(Synthetic, OutliersAreFarFromEveryCenter) {
    SyntheticSpec spec;
    spec.n = 100;
    spec.dim = 4;
    spec.n_blobs = 3;
    spec.blob_spread = 1.0;
    spec.outlier_fraction = 0.05;
    spec.seed = 42;
    const auto out = generate_synthetic(spec);
    ASSERT_EQ(out.data.size(), 100u);
    ASSERT_EQ(out.centers.size(), 3u);

    // Direct scan: a point counts as an outlier iff it is at least
    // 10 spreads from every center.
    std::size_t far = 0;
    for (std::size_t i = 0; i < out.data.size(); ++i) {
        bool is_far = true;
        for (const auto& c : out.centers)
            is_far = is_far && oracle::euclidean(out.data[i], c) >= 10.0 * spec.blob_spread;
        far += is_far;
        EXPECT_EQ(is_far, static_cast<bool>(out.outlier_mask[i])) << "point " << i;
    }
    EXPECT_EQ(far, 5u);
    EXPECT_EQ(out.data.size() - far, 95u);
}

TEST(Synthetic, CentersAreWellSeparated) {
    SyntheticSpec spec;
    spec.n = 10;
    spec.n_blobs = 7;
    spec.dim = 2;
    const auto out = generate_synthetic(spec);
    for (std::size_t a = 0; a < out.centers.size(); ++a)
        for (std::size_t b = a + 1; b < out.centers.size(); ++b)
            EXPECT_GE(oracle::euclidean(out.centers[a], out.centers[b]), 20.0);
}

TEST(Synthetic, RejectsBadParameters) {
    SyntheticSpec spec;
    spec.n_blobs = 0;
    EXPECT_THROW(generate_synthetic(spec), std::invalid_argument);
    spec.n_blobs = 1;
    spec.outlier_fraction = 1.5;
    EXPECT_THROW(generate_synthetic(spec), std::invalid_argument);
}
