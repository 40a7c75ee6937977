#include "incluster/serialize.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace incluster {

namespace {

using nlohmann::ordered_json;

ordered_json point_json(const Point& p) { return ordered_json(std::vector<double>(p.coords().begin(), p.coords().end())); }

std::vector<Point> points_from(const ordered_json& arr) {
    std::vector<Point> out;
    out.reserve(arr.size());
    for (const auto& p : arr) out.emplace_back(p.get<std::vector<double>>());
    return out;
}

ordered_json parse_document(std::string_view text, std::string_view expected_format) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error(std::string("malformed model document: ") + e.what());
    }
    const auto format = doc.value("format", std::string{});
    if (format != expected_format)
        throw std::runtime_error("expected a '" + std::string(expected_format) +
                                 "' document, found '" + format + "'");
    const int version = doc.value("version", 0);
    if (version != model_format_version)
        throw std::runtime_error("unsupported model version " + std::to_string(version));
    return doc;
}

}  // namespace

std::string to_json(const kmeans::KMeansModel& model) {
    ordered_json doc;
    doc["format"] = "incluster.kmeans";
    doc["version"] = model_format_version;
    doc["k"] = model.k();
    doc["metric"] = to_string(model.metric());
    doc["outlier_radius"] = model.outlier_radius() ? ordered_json(*model.outlier_radius())
                                                   : ordered_json(nullptr);
    doc["centroids"] = ordered_json::array();
    for (const auto& c : model.centroids()) doc["centroids"].push_back(point_json(c));
    doc["members"] = model.members();
    doc["outliers"] = model.outliers();
    doc["points"] = ordered_json::array();
    for (const auto& p : model.points()) doc["points"].push_back(point_json(p));
    return doc.dump() + "\n";
}

std::string to_json(const dbscan::DbscanModel& model) {
    ordered_json doc;
    doc["format"] = "incluster.dbscan";
    doc["version"] = model_format_version;
    doc["params"] = {{"eps", model.params().eps},
                     {"min_pts", model.params().min_pts},
                     {"metric", to_string(model.params().metric)}};
    doc["clusters"] = ordered_json::array();
    for (const auto& c : model.clusters())
        doc["clusters"].push_back({{"members", c.members}, {"mean", point_json(c.mean)}});
    doc["noise"] = model.noise();
    doc["points"] = ordered_json::array();
    for (const auto& p : model.points()) doc["points"].push_back(point_json(p));
    return doc.dump() + "\n";
}

kmeans::KMeansModel kmeans_from_json(std::string_view text) {
    const auto doc = parse_document(text, "incluster.kmeans");
    try {
        std::optional<double> radius;
        if (!doc.at("outlier_radius").is_null()) radius = doc.at("outlier_radius").get<double>();
        auto model = kmeans::KMeansModel::restore(
            parse_metric(doc.at("metric").get<std::string>()), radius,
            points_from(doc.at("points")), points_from(doc.at("centroids")),
            doc.at("members").get<std::vector<std::vector<std::size_t>>>(),
            doc.at("outliers").get<std::vector<std::size_t>>());
        if (model.k() != doc.at("k").get<std::size_t>())
            throw std::runtime_error("k does not match the number of centroids");
        return model;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(std::string("invalid k-means model: ") + e.what());
    }
}

dbscan::DbscanModel dbscan_from_json(std::string_view text) {
    const auto doc = parse_document(text, "incluster.dbscan");
    try {
        const auto& p = doc.at("params");
        dbscan::Params params{p.at("eps").get<double>(), p.at("min_pts").get<std::size_t>(),
                              parse_metric(p.at("metric").get<std::string>())};
        std::vector<std::vector<std::size_t>> members;
        for (const auto& c : doc.at("clusters"))
            members.push_back(c.at("members").get<std::vector<std::size_t>>());
        return dbscan::DbscanModel::restore(params, points_from(doc.at("points")),
                                            std::move(members),
                                            doc.at("noise").get<std::vector<std::size_t>>());
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(std::string("invalid DBSCAN model: ") + e.what());
    }
}

void write_text_file(const std::filesystem::path& path, std::string_view contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << contents;
    if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace incluster
