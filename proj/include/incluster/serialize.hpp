#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "incluster/dbscan.hpp"
#include "incluster/kmeans.hpp"

namespace incluster {

/// Versioned JSON documents holding the parameters, every absorbed point,
/// and membership by point index. Both formats share the same layout idiom.
inline constexpr int model_format_version = 1;

std::string to_json(const kmeans::KMeansModel& model);
std::string to_json(const dbscan::DbscanModel& model);

kmeans::KMeansModel kmeans_from_json(std::string_view text);
dbscan::DbscanModel dbscan_from_json(std::string_view text);

void write_text_file(const std::filesystem::path& path, std::string_view contents);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace incluster
